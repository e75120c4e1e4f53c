r"""
Listing every configuration of a stratum.

Given the singularity data of a stratum, :func:`enumerate_configurations`
produces one representative of every isomorphism class of valid
configurations whose glued-back surface has exactly that data (marked
points included).

The search is finite because of a mass count.  Give every conical point
of order ``d`` the mass ``d + 2``.  A corner of order ``k`` contributes
``k + 1`` to the mass of the conical point it belongs to, so the total mass
``B`` of the stratum bounds the number of corners, hence of edges, and
each vertex kind needs a minimum mass that depends only on its valence.

    >>> from qdstrata.strata import QSingularityData
    >>> [len(enumerate_configurations(QSingularityData.of(*a))) for a in [(2, 2), (2, 1, 1)]]
    [3, 5]

Two independent searches share the final step (choosing corner orders and
interior singularities on a fixed graph with fixed ribbon structures):

* :func:`enumerate_configurations` builds graphs from the five admissible
  shapes by placing valence-two vertices along their cycles and chains;
* :func:`enumerate_exhaustive` generates every small multigraph and keeps
  those the graph classifier accepts.
"""

from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from itertools import product
from typing import Iterable, Iterator, Sequence

from .confgraph import CYL, INVALID, MINUS, PLUS, ConfGraph, classify_base_type, signed_weights_at
from .configuration import (Configuration, canonical_form, face_cycles, newborn_order, validate)
from .ribbon import EVEN, compute_parities, cycles_of, ribbon_structures
from .strata import QSingularityData, is_empty_q

GENUS_TWO_STRATA = ((2, 2), (2, 1, 1), (1, 1, 1, 1))


def stratum_mass(alpha: QSingularityData) -> int:
    return sum(d + 2 for d in alpha.orders)


def min_vertex_mass(kind: str, valence: int) -> int:
    """Least mass a vertex of the given kind and valence can carry."""
    if kind == CYL:
        return valence
    if kind == MINUS:
        return valence + 1
    return valence + 2


def graph_min_mass(g: ConfGraph) -> int:
    return sum(min_vertex_mass(k, g.valence(v)) for v, k in enumerate(g.kinds))


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("QDSTRATA_JOBS", "1")))
    except ValueError:
        return 1


# ---------------------------------------------------------------------------
# skeletons built from the admissible shapes


def _segments(budget: int) -> Iterator[tuple[str, ...]]:
    """Sequences of valence-two '+' and 'o' vertices of total mass at most ``budget``.

    Each vertex also brings one extra edge, which costs nothing here since
    edges are paid for by the corners in the vertex masses.
    """
    yield ()
    for first, cost in ((PLUS, 4), (CYL, 2)):
        if cost <= budget:
            for rest in _segments(budget - cost):
                yield (first,) + rest


class _Builder:
    def __init__(self):
        self.kinds: list[str] = []
        self.edges: list[tuple[int, int]] = []

    def vertex(self, kind: str) -> int:
        self.kinds.append(kind)
        return len(self.kinds) - 1

    def path(self, start: int, inner: Sequence[str], end: int | None) -> int:
        """Join ``start`` to ``end`` through new vertices ``inner``; returns the last vertex."""
        prev = start
        for kind in inner:
            v = self.vertex(kind)
            self.edges.append((prev, v))
            prev = v
        if end is not None:
            self.edges.append((prev, end))
            return end
        return prev

    def graph(self) -> ConfGraph:
        return ConfGraph(tuple(self.kinds), tuple(self.edges))


def _shape_graphs(budget: int) -> Iterator[ConfGraph]:
    seg = lambda b: list(_segments(b))  # noqa: E731
    # a: chain between two '-' leaves
    for inner in seg(budget - 4):
        b = _Builder()
        x = b.vertex(MINUS)
        y = b.vertex(MINUS)
        b.path(x, inner, y)
        yield b.graph()
    # b: a cycle through one '-' vertex
    for inner in seg(budget - 3):
        b = _Builder()
        x = b.vertex(MINUS)
        b.path(x, inner, x)
        yield b.graph()
    for hub in (PLUS, CYL):
        hub3 = min_vertex_mass(hub, 3)
        hub4 = min_vertex_mass(hub, 4)
        # c: a cycle with a chain ending at a '-' leaf
        for loop in seg(budget - hub3 - 2):
            for chain in seg(budget - hub3 - 2 - _cost(loop)):
                b = _Builder()
                x = b.vertex(hub)
                leaf = b.vertex(MINUS)
                b.path(x, loop, x)
                b.path(x, chain, leaf)
                yield b.graph()
        # e: two cycles at one valence-four vertex
        for loop1 in seg(budget - hub4):
            for loop2 in seg(budget - hub4 - _cost(loop1)):
                b = _Builder()
                x = b.vertex(hub)
                b.path(x, loop1, x)
                b.path(x, loop2, x)
                yield b.graph()
    # d: two cycles joined by a chain
    for hub_x, hub_y in product((PLUS, CYL), repeat=2):
        base = min_vertex_mass(hub_x, 3) + min_vertex_mass(hub_y, 3)
        for loop1 in seg(budget - base):
            for loop2 in seg(budget - base - _cost(loop1)):
                for chain in seg(budget - base - _cost(loop1) - _cost(loop2)):
                    b = _Builder()
                    x = b.vertex(hub_x)
                    y = b.vertex(hub_y)
                    b.path(x, loop1, x)
                    b.path(y, loop2, y)
                    b.path(x, chain, y)
                    yield b.graph()


def _cost(seq: Iterable[str]) -> int:
    return sum(min_vertex_mass(k, 2) for k in seq)


def shape_graphs(budget: int) -> list[ConfGraph]:
    """Valid graphs of minimum mass at most ``budget`` built from the five shapes.

    Symmetric placements give isomorphic graphs more than once; the
    duplicates disappear when the final configurations are deduplicated.
    """
    out = []
    seen = set()
    for g in _shape_graphs(budget):
        if graph_min_mass(g) > budget or classify_base_type(g) == INVALID:
            continue
        key = (g.kinds, g.edges)
        if key not in seen:
            seen.add(key)
            out.append(g)
    return out


# ---------------------------------------------------------------------------
# all small multigraphs (independent search)


def exhaustive_graphs(budget: int) -> list[ConfGraph]:
    """Every valid graph of minimum mass at most ``budget``, one per isomorphism class.

    Unlabelled multigraphs with at most two independent cycles, valence at
    most four and at most two leaves are generated edge by edge and
    deduplicated with :mod:`networkx`; then every labelling by vertex
    kinds is tried.
    """
    import networkx as nx
    from networkx.algorithms.isomorphism import categorical_node_match

    max_vertices = max(1, budget // 2)
    shapes: list[tuple[int, tuple[tuple[int, int], ...]]] = []
    for n in range(1, max_vertices + 1):
        pairs = [(u, v) for u in range(n) for v in range(u, n)]
        found: dict[tuple, list[nx.MultiGraph]] = {}

        def extend(edges, start, deg):
            e = len(edges)
            if e - n + 1 > 2 or sum(max(d, 2) for d in deg) > budget:
                return
            if e >= n - 1 and e >= 1:
                _consider(n, edges, deg, found, shapes)
            if 2 * (e + 1) > budget:
                return
            for idx in range(start, len(pairs)):
                u, v = pairs[idx]
                add = 2 if u == v else 1
                if deg[u] + add > 4 or (u != v and deg[v] + 1 > 4):
                    continue
                deg[u] += 1
                deg[v] += 1
                extend(edges + [(u, v)], idx, deg)
                deg[u] -= 1
                deg[v] -= 1

        extend([], 0, [0] * n)

    out = []
    for n, edges in shapes:
        labelled: list[nx.MultiGraph] = []
        match = categorical_node_match("kind", None)
        for kinds in product((PLUS, MINUS, CYL), repeat=n):
            g = ConfGraph(kinds, edges)
            if graph_min_mass(g) > budget or classify_base_type(g) == INVALID:
                continue
            h = nx.MultiGraph()
            for v, k in enumerate(kinds):
                h.add_node(v, kind=k)
            h.add_edges_from(edges)
            if any(nx.is_isomorphic(h, other, node_match=match) for other in labelled):
                continue
            labelled.append(h)
            out.append(g)
    return out


def _invariant(n, edges) -> tuple:
    """Isomorphism invariant used to avoid most pairwise isomorphism tests."""
    mult: dict[tuple[int, int], int] = {}
    for uv in edges:
        mult[uv] = mult.get(uv, 0) + 1
    rows = []
    for v in range(n):
        row = sorted((m, u == w) for (u, w), m in mult.items() if v in (u, w))
        rows.append(tuple(row))
    return tuple(sorted(rows))


def _consider(n, edges, deg, found, shapes):
    import networkx as nx

    if any(d == 0 for d in deg) or sum(1 for d in deg if d == 1) > 2:
        return
    h = nx.MultiGraph()
    h.add_nodes_from(range(n))
    h.add_edges_from(edges)
    if not nx.is_connected(h):
        return
    bucket = found.setdefault(_invariant(n, edges), [])
    if any(nx.is_isomorphic(h, other) for other in bucket):
        return
    bucket.append(h)
    shapes.append((n, tuple(edges)))


# ---------------------------------------------------------------------------
# corner orders and interior singularities on a fixed graph


def _k_choices(total: int, slots: Sequence[str | None]) -> Iterator[tuple[int, ...]]:
    """Tuples of nonnegative integers summing to ``total``.

    ``slots[i]`` is ``'zero'`` for a forced zero, ``'even'``/``'odd'`` for a
    forced parity or ``None`` for no restriction.
    """
    if not slots:
        if total == 0:
            yield ()
        return
    head, rest = slots[0], slots[1:]
    if head == "zero":
        choices: Iterable[int] = (0,)
    elif head is None:
        choices = range(total + 1)
    else:
        choices = range(0 if head == EVEN else 1, total + 1, 2)
    for k in choices:
        if k > total:
            break
        for tail in _k_choices(total - k, rest):
            yield (k,) + tail


def _distinct_assignments(values: Sequence[int], slots: int) -> Iterator[tuple[int, ...]]:
    """Distinct ways to give every face an entry of ``values`` (a multiset)."""
    seen = set()

    def rec(remaining: list[int], acc: tuple[int, ...]):
        if len(acc) == slots:
            if acc not in seen:
                seen.add(acc)
                yield acc
            return
        used = set()
        for idx, val in enumerate(remaining):
            if val in used:
                continue
            used.add(val)
            yield from rec(remaining[:idx] + remaining[idx + 1:], acc + (val,))

    yield from rec(sorted(values), ())


def _distribute(values: Sequence[int], targets: Sequence[int]) -> Iterator[dict[int, tuple[int, ...]]]:
    """All ways to split the multiset ``values`` among ``targets``."""
    values = sorted(values)
    seen = set()

    def rec(idx: int, acc: dict[int, list[int]]):
        if idx == len(values):
            key = tuple(tuple(sorted(acc[t])) for t in targets)
            if key not in seen:
                seen.add(key)
                yield {t: tuple(acc[t]) for t in targets}
            return
        for t in targets:
            acc[t].append(values[idx])
            yield from rec(idx + 1, acc)
            acc[t].pop()

    if not targets:
        if not values:
            yield {}
        return
    yield from rec(0, {t: [] for t in targets})


def _interior_allowed(kind: str, d: int) -> bool:
    if kind == PLUS:
        return d >= 2 and d % 2 == 0
    if kind == MINUS:
        return d == -1 or d >= 1
    return False


def configurations_on_graph(g: ConfGraph, alpha: QSingularityData) -> list[Configuration]:
    """Valid configurations on ``g`` whose singularity data equal ``alpha`` (not deduplicated)."""
    if classify_base_type(g) == INVALID or graph_min_mass(g) > stratum_mass(alpha):
        return []
    alpha_vals = list(alpha.orders)
    n = g.num_vertices
    per_vertex = []
    for v in range(n):
        ends = g.ends_at(v)
        groups = g.cycle_groups(v) if len(ends) >= 3 else ()
        per_vertex.append(ribbon_structures(g.kinds[v], ends, groups))
    slot_kind = {}
    out = []
    for choice in product(*per_vertex):
        nxt = {}
        for m in choice:
            nxt.update(m)
        faces = face_cycles(nxt)
        if len(faces) > len(alpha_vals):
            continue
        comps = [cycles_of(m) for m in choice]
        slot_kind.clear()
        for v in range(n):
            kind = g.kinds[v]
            if kind == PLUS:
                par = compute_parities(comps[v], signed_weights_at(g, v))
                slot_kind.update(par)
            else:
                for s in choice[v]:
                    slot_kind[s] = "zero" if kind == CYL else None
        for values in _distinct_assignments(alpha_vals, len(faces)):
            rest = list(alpha_vals)
            for val in values:
                rest.remove(val)
            if any(not any(_interior_allowed(g.kinds[v], d) for v in range(n)) for d in rest):
                continue
            per_face = []
            for face, b in zip(faces, values):
                total = b + 2 - len(face)
                if total < 0:
                    per_face = None
                    break
                per_face.append(list(_k_choices(total, [slot_kind[s] for s in face])))
                if not per_face[-1]:
                    per_face = None
                    break
            if per_face is None:
                continue
            targets = [v for v in range(n) if g.kinds[v] != CYL]
            for ks in product(*per_face):
                korder = {}
                for face, kf in zip(faces, ks):
                    korder.update(zip(face, kf))
                if not _component_sums_ok(g, comps, korder):
                    continue
                for split in _distribute(rest, targets):
                    if any(not _interior_allowed(g.kinds[v], d)
                           for v, ds in split.items() for d in ds):
                        continue
                    interior = tuple(split.get(v, ()) for v in range(n))
                    ribbon = tuple(tuple(tuple((s, korder[s]) for s in comp) for comp in comps[v])
                                   for v in range(n))
                    c = Configuration(g, interior, ribbon)
                    if validate(c).ok:
                        out.append(c)
    return out


def _component_sums_ok(g: ConfGraph, comps, korder) -> bool:
    for v, cs in enumerate(comps):
        kind = g.kinds[v]
        if kind == CYL:
            continue
        floor = 2 if kind == PLUS else 1
        if any(sum(korder[s] for s in comp) < floor for comp in cs):
            return False
    return True


def _solve(args) -> list[tuple[str, str]]:
    g, alpha = args
    return [(canonical_form(c), c.to_json()) for c in configurations_on_graph(g, alpha)]


def _collect(graphs: list[ConfGraph], alpha: QSingularityData, jobs: int) -> list[Configuration]:
    tasks = [(g, alpha) for g in graphs]
    if jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_solve, tasks, chunksize=4))
    else:
        results = [_solve(t) for t in tasks]
    found: dict[str, str] = {}
    for batch in results:
        for key, text in batch:
            found.setdefault(key, text)
    return [Configuration.from_json(found[key]) for key in sorted(found)]


def _as_alpha(alpha) -> QSingularityData:
    if isinstance(alpha, QSingularityData):
        return alpha
    return QSingularityData(tuple(alpha))


def enumerate_configurations(alpha, bound_scale: int = 1, jobs: int | None = None
                             ) -> list[Configuration]:
    """Every configuration of ``Q(alpha)`` up to isomorphism, sorted by canonical form.

    ``bound_scale`` multiplies the mass budget used to stop the search;
    since the budget is already sharp, larger values only cost time.
    """
    alpha = _as_alpha(alpha)
    if not alpha.is_valid() or is_empty_q(alpha):
        return []
    budget = stratum_mass(alpha) * bound_scale
    return _collect(shape_graphs(budget), alpha, jobs or default_jobs())


def enumerate_exhaustive(alpha, jobs: int | None = None) -> list[Configuration]:
    """Same result as :func:`enumerate_configurations`, by brute force over multigraphs."""
    alpha = _as_alpha(alpha)
    if not alpha.is_valid() or is_empty_q(alpha):
        return []
    return _collect(exhaustive_graphs(stratum_mass(alpha)), alpha, jobs or default_jobs())


def genus2_table(jobs: int | None = None) -> dict[QSingularityData, list[Configuration]]:
    """Configurations of the three genus-two strata without poles or marked points."""
    return {QSingularityData(a): enumerate_configurations(QSingularityData(a), jobs=jobs)
            for a in GENUS_TWO_STRATA}


__all__ = [
    "GENUS_TWO_STRATA", "configurations_on_graph", "enumerate_configurations",
    "enumerate_exhaustive", "exhaustive_graphs", "genus2_table", "graph_min_mass",
    "min_vertex_mass", "newborn_order", "shape_graphs", "stratum_mass",
]
