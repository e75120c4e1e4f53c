r"""
Counting collections of hat-homologous saddle connections by length.

A *collection* is a maximal family of hat-homologous saddle connections;
it is counted at length ``L`` when its longest member has length at most
``L``.  Members of a collection have lengths in ratio one or two, so
tracing every direction up to ``2 L`` sees every collection counted at
``L`` completely.

On the torus of three squares the horizontal direction carries one
collection of three connections and is realised by two cylinders::

    >>> from qdstrata.flatsurface import bundled_surface
    >>> s = bundled_surface("threesquare")
    >>> rows = growth_report(s, [1, 2])
    >>> [(int(r.L), r.total) for r in rows]
    [(1, 3), (2, 7)]
    >>> sorted(rows[1].per_config.values())
    [1, 3, 3]

Each count belongs to one canonical configuration; the horizontal
collection gives the configuration made of two cylinders joined by three
saddle connections.
"""

from __future__ import annotations

import json
import math
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .configuration import Configuration, canonical_form
from .enumerator import default_jobs
from .flatsurface import (ExtractionError, FlatSurface, SaddleConnection, SurfaceError,
                          extract_configuration, hat_homology_classes)


def primitive_directions(radius: int) -> list[tuple[int, int]]:
    """Primitive integer vectors ``(p, q)`` with ``p > 0`` or ``p = 0 < q`` and norm at most ``radius``.

    >>> primitive_directions(1)
    [(0, 1), (1, 0)]
    >>> len(primitive_directions(2))
    4
    """
    out = []
    r2 = radius * radius
    for p in range(0, radius + 1):
        for q in range(-radius, radius + 1):
            if p == 0 and q <= 0:
                continue
            if p * p + q * q <= r2 and math.gcd(p, q) == 1:
                out.append((p, q))
    return out


def _radius(s: FlatSurface, L) -> int:
    """Largest direction norm that can carry a saddle connection of length ``L``."""
    return math.isqrt(math.floor((Fraction(L) * s.scale) ** 2))


def saddle_connections_up_to(s: FlatSurface, L) -> list[SaddleConnection]:
    """Every saddle connection of length at most ``L``, each once.

    >>> from qdstrata.flatsurface import bundled_surface
    >>> s = bundled_surface("threesquare")
    >>> len(saddle_connections_up_to(s, 1))
    6
    >>> saddle_connections_up_to(s, Fraction(1, 2))
    []
    """
    L = Fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    out = []
    for v in primitive_directions(_radius(s, L)):
        out.extend(s.saddle_connections(v, L))
    return sorted(out, key=lambda c: (c.length_squared, c.direction, c.start, c.end))


@dataclass(frozen=True)
class Collection:
    """A maximal hat-homologous family, with its configuration key.

    ``config`` is the canonical form, or ``None`` when extraction failed
    (the reason is kept in ``error``).
    """

    direction: tuple[int, int]
    size: int
    max_length_squared: Fraction
    config: str | None
    error: str | None = None
    members: tuple[SaddleConnection, ...] = ()
    configuration: Configuration | None = None

    @property
    def lengths_squared(self) -> list[Fraction]:
        return sorted(c.length_squared for c in self.members)


def _classify(s: FlatSurface, conns: Sequence[SaddleConnection]) -> list[Collection]:
    out = []
    for group in hat_homology_classes(s, conns):
        longest = max(c.length_squared for c in group)
        try:
            config = extract_configuration(s, group, check=False)
            key, err = canonical_form(config), None
        except (ExtractionError, SurfaceError) as exc:
            config, key, err = None, None, str(exc)
        out.append(Collection(group[0].direction, len(group), longest, key, err,
                              tuple(group), config))
    return out


def group_by_configuration(s: FlatSurface, connections: Iterable[SaddleConnection]
                           ) -> tuple[Counter, list[Collection]]:
    """Count the hat-homologous collections among ``connections`` per configuration.

    Returns the counter keyed by canonical form and the collections whose
    configuration could not be extracted.  A collection only contains
    connections from the input.

    >>> from qdstrata.flatsurface import bundled_surface
    >>> s = bundled_surface("threesquare")
    >>> counts, failed = group_by_configuration(s, s.saddle_connections((1, 0), 1))
    >>> list(counts.values()), failed
    ([1], [])
    """
    if s.holonomy_trivial():
        raise SurfaceError("surfaces with trivial linear holonomy are not supported")
    by_dir: dict[tuple[int, int], list[SaddleConnection]] = {}
    for c in connections:
        by_dir.setdefault(c.direction, []).append(c)
    counts: Counter = Counter()
    failed = []
    for v in sorted(by_dir):
        for col in _classify(s, by_dir[v]):
            if col.config is None:
                failed.append(col)
            else:
                counts[col.config] += 1
    return counts, failed


def _direction_task(args) -> list[Collection]:
    text, v, bound2 = args
    s = _surface_from_cache(text)
    conns = s.saddle_connections(v, bound2, squared=True)
    return _classify(s, conns) if conns else []


_CACHE: dict[str, FlatSurface] = {}


def _surface_from_cache(text: str) -> FlatSurface:
    s = _CACHE.get(text)
    if s is None:
        s = _CACHE[text] = FlatSurface.from_text(text)
    return s


def collections_up_to(s: FlatSurface, L, jobs: int | None = None) -> list[Collection]:
    """All maximal collections whose longest member has length at most ``L``."""
    L = Fraction(L)
    if L <= 0:
        raise ValueError("L must be positive")
    if s.holonomy_trivial():
        raise SurfaceError("surfaces with trivial linear holonomy are not supported")
    bound2 = 4 * L * L
    dirs = primitive_directions(_radius(s, L))
    jobs = default_jobs() if jobs is None else max(1, jobs)
    if jobs > 1 and len(dirs) > 1:
        text = s.to_text()
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_direction_task, [(text, v, bound2) for v in dirs],
                                  chunksize=max(1, len(dirs) // (8 * jobs))))
    else:
        parts = [_classify(s, conns) for conns in
                 (s.saddle_connections(v, bound2, squared=True) for v in dirs) if conns]
    out = [col for part in parts for col in part if col.max_length_squared <= L * L]
    return sorted(out, key=lambda c: (c.max_length_squared, c.direction, c.config or ""))


@dataclass
class GrowthRow:
    """One line of a growth table."""

    L: Fraction
    total: int
    per_config: dict[str, int] = field(default_factory=dict)
    failures: int = 0

    @property
    def ratio(self) -> Fraction:
        """``N(S, L) / L^2`` (exact)."""
        return Fraction(self.total) / (Fraction(self.L) ** 2)

    def csv_line(self) -> str:
        return "%s,%d,%s" % (self.L, self.total, json.dumps(self.per_config, sort_keys=True))


def growth_rows(collections: Sequence[Collection], Ls: Sequence) -> list[GrowthRow]:
    """Tabulate precomputed collections at each length of ``Ls``.

    ``collections`` must contain every collection up to the largest length,
    as returned by :func:`collections_up_to`.
    """
    Ls = [Fraction(x) for x in Ls]
    if not Ls or any(x <= 0 for x in Ls) or any(a >= b for a, b in zip(Ls, Ls[1:])):
        raise ValueError("lengths must be positive and increasing")
    rows = []
    for L in Ls:
        counts: Counter = Counter()
        failures = 0
        for col in collections:
            if col.max_length_squared > L * L:
                continue
            if col.config is None:
                failures += 1
            else:
                counts[col.config] += 1
        rows.append(GrowthRow(L, sum(counts.values()) + failures, dict(sorted(counts.items())),
                              failures))
    return rows


def growth_report(s: FlatSurface, Ls: Sequence, jobs: int | None = None) -> list[GrowthRow]:
    """Counts of collections for increasing lengths, tracing only once at the largest."""
    Ls = [Fraction(x) for x in Ls]
    if not Ls or any(x <= 0 for x in Ls) or any(a >= b for a, b in zip(Ls, Ls[1:])):
        raise ValueError("lengths must be positive and increasing")
    return growth_rows(collections_up_to(s, Ls[-1], jobs=jobs), Ls)


def csv_report(rows: Sequence[GrowthRow]) -> str:
    lines = ["L,total,per_config_json"]
    lines.extend(r.csv_line() for r in rows)
    return "\n".join(lines) + "\n"

