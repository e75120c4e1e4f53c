r"""
Configurations of ĥomologous saddle connections.

A configuration bundles

* a component graph (:class:`~qdstrata.confgraph.ConfGraph`),
* at every vertex a local ribbon graph whose corners carry orders ``k``,
* at every ``+`` and ``-`` vertex the orders of the interior singularities
  of the component.

Edge ends double as *edge sides*: the end ``(e, 0)`` is the side of the
saddle connection ``e`` facing the component ``edges[e][0]`` and ``(e, 1)``
the side facing ``edges[e][1]``.  In text and JSON a side is written
``e3+`` for ``(3, 0)`` and ``e3-`` for ``(3, 1)``.

Gluing the components back together, the corners around each conical point
that lies on the saddle connections form a cycle.  Starting from the corner
that begins with side ``s``, cross the saddle connection that follows ``s``
in its boundary component and continue with the corner beginning at the
opposite side of that saddle connection.  A cycle with corners of orders
``k_1, ..., k_p`` is a conical point of order ``sum(k_i + 1) - 2``::

    >>> newborn_order([0, 1, 1, 1, 1, 0])
    8

JSON layout (``ribbon`` lists the boundary components of each vertex, each
component being a cyclic list of ``[side, k]`` pairs)::

    {"vertices": [{"kind": "+", "interior": [2]}, ...],
     "edges": [[0, 1], ...],
     "ribbon": [[[["e0+", 2], ["e3-", 0]], [["e1+", 1]]], ...]}
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from itertools import permutations
from typing import Iterable, Sequence

from .confgraph import (CYL, INVALID, MINUS, PLUS, ConfGraph, GraphError, classify_base_type,
                        invalid_reason, signed_weights_at)
from .ribbon import (EVEN, RibbonError, classify_boundary_type, compute_parities,
                     min_component_sum)
from .strata import (HSingularityData, QSingularityData, genus, is_empty, is_empty_q,
                     strip_zeros)

Side = tuple[int, int]


class ConfigurationError(ValueError):
    """Raised when an operation needs a valid configuration and gets another one."""


def _multiset(values: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(values))


# Pairs [interior orders, corner orders] that are forbidden at '-' vertices,
# one block per boundary pattern.  Both entries are unordered.
EXCEPTIONAL_TABLE: dict[str, frozenset] = {
    code: frozenset((_multiset(a), _multiset(b)) for a, b in rows)
    for code, rows in {
        "-1.1": [
            ((), (2,)), ((-1,), (3,)), ((1,), (1,)), ((-1, 1), (2,)),
            ((1,), (5,)), ((3,), (3,)), ((1, 3), (2,)),
            ((), (6,)), ((4,), (2,)),
        ],
        "-2.1": [
            ((), (2, 0)), ((), (1, 1)), ((-1,), (0, 3)), ((-1,), (1, 2)),
            ((1,), (0, 1)), ((1, -1), (0, 2)), ((1, -1), (1, 1)),
            ((3, 1), (2, 0)), ((3, 1), (1, 1)), ((3,), (3, 0)), ((3,), (2, 1)),
            ((1,), (5, 0)), ((1,), (4, 1)), ((1,), (3, 2)), ((4,), (2, 0)), ((4,), (1, 1)),
            ((), (6, 0)), ((), (5, 1)), ((), (4, 2)), ((), (3, 3)),
        ],
        "-2.2": [
            ((), (2, 2)), ((), (1, 3)), ((-1,), (2, 3)), ((1,), (1, 2)), ((-1, 1), (2, 2)),
            ((), (3, 5)), ((1,), (2, 5)), ((3,), (2, 3)), ((1, 3), (2, 2)),
            ((), (2, 6)), ((4,), (2, 2)),
        ],
    }.items()
}


def side_name(side: Side) -> str:
    return "e%d%s" % (side[0], "+" if side[1] == 0 else "-")


_SIDE_RE = re.compile(r"^e(\d+)([+-])$")


def parse_side(text: str) -> Side:
    m = _SIDE_RE.match(text.strip())
    if m is None:
        raise ConfigurationError("bad edge side %r" % text)
    return int(m.group(1)), 0 if m.group(2) == "+" else 1


def opposite(side: Side) -> Side:
    return side[0], 1 - side[1]


@dataclass(frozen=True)
class Configuration:
    graph: ConfGraph
    interior: tuple[tuple[int, ...], ...]
    ribbon: tuple[tuple[tuple[tuple[Side, int], ...], ...], ...]

    def __post_init__(self):
        object.__setattr__(self, "interior", tuple(
            tuple(sorted((int(d) for d in ints), reverse=True)) for ints in self.interior))
        object.__setattr__(self, "ribbon", tuple(
            tuple(tuple(((int(s[0]), int(s[1])), int(k)) for s, k in comp) for comp in comps)
            for comps in self.ribbon))
        if len(self.interior) != self.graph.num_vertices or \
                len(self.ribbon) != self.graph.num_vertices:
            raise ConfigurationError("interior and ribbon data must be given for every vertex")

    @property
    def kinds(self) -> tuple[str, ...]:
        return self.graph.kinds

    def sides(self) -> list[Side]:
        return [s for comps in self.ribbon for comp in comps for s, _ in comp]

    def next_map(self) -> dict[Side, Side]:
        nxt = {}
        for comps in self.ribbon:
            for comp in comps:
                for idx, (s, _) in enumerate(comp):
                    nxt[s] = comp[(idx + 1) % len(comp)][0]
        return nxt

    def orders(self) -> dict[Side, int]:
        return {s: k for comps in self.ribbon for comp in comps for s, k in comp}

    def components_at(self, v: int) -> list[tuple[Side, ...]]:
        return [tuple(s for s, _ in comp) for comp in self.ribbon[v]]

    def d_values(self, v: int) -> list[int]:
        return [sum(k for _, k in comp) - 2 for comp in self.ribbon[v]]

    def boundary_type(self, v: int) -> str:
        groups = self.graph.cycle_groups(v) if self.graph.valence(v) >= 3 else ()
        return classify_boundary_type(self.kinds[v], self.components_at(v), groups)

    # -- serialisation -------------------------------------------------
    def to_dict(self) -> dict:
        return {
            "vertices": [{"kind": k, "interior": list(ints)}
                         for k, ints in zip(self.kinds, self.interior)],
            "edges": [list(uv) for uv in self.graph.edges],
            "ribbon": [[[[side_name(s), k] for s, k in comp] for comp in comps]
                       for comps in self.ribbon],
        }

    def to_json(self, indent: int | None = None) -> str:
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, data: dict) -> "Configuration":
        try:
            kinds = tuple(v["kind"] for v in data["vertices"])
            interior = tuple(tuple(v.get("interior", ())) for v in data["vertices"])
            edges = tuple(tuple(uv) for uv in data["edges"])
            ribbon = tuple(
                tuple(tuple((parse_side(s), int(k)) for s, k in comp) for comp in comps)
                for comps in data["ribbon"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigurationError("malformed configuration data: %s" % exc) from exc
        try:
            graph = ConfGraph(kinds, edges)
        except GraphError as exc:
            raise ConfigurationError(str(exc)) from exc
        return cls(graph, interior, ribbon)

    @classmethod
    def from_json(cls, text: str) -> "Configuration":
        body = "\n".join(line for line in text.splitlines() if not line.lstrip().startswith("#"))
        try:
            data = json.loads(body)
        except json.JSONDecodeError as exc:
            raise ConfigurationError("not a JSON document: %s" % exc) from exc
        return cls.from_dict(data)

    def describe(self) -> str:
        """Readable multi-line summary of the graph and corner orders."""
        lines = [self.graph.text()]
        for v, comps in enumerate(self.ribbon):
            blocks = " ".join(
                "[" + " ".join("%s(k=%d)" % (side_name(s), k) for s, k in comp) + "]"
                for comp in comps)
            ints = ",".join(str(d) for d in self.interior[v])
            lines.append("v%d %s {%s}: %s" % (v, self.kinds[v], ints, blocks))
        return "\n".join(lines)


# ---------------------------------------------------------------------------
# validation


@dataclass(frozen=True)
class Violation:
    condition: int
    vertex: int | None
    message: str

    def __str__(self):
        where = "" if self.vertex is None else " at vertex %d" % self.vertex
        return "condition %d%s: %s" % (self.condition, where, self.message)


@dataclass
class ValidationResult:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def conditions(self) -> list[int]:
        return sorted({v.condition for v in self.violations})

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self):
        return "ok" if self.ok else "\n".join(str(v) for v in self.violations)


def _d_values_for(code: str, orders: Sequence[int]) -> list[int]:
    """``D`` values of a '-' vertex of pattern ``code`` with the given corner orders."""
    orders = list(orders)
    if code == "-2.1":
        return [sum(orders) - 2]
    return [k - 2 for k in orders]


def is_exceptional(code: str, interior: Iterable[int], corner_orders: Iterable[int]) -> bool:
    """Whether ``[interior, corner orders]`` is listed for the pattern ``code``."""
    key = (_multiset(interior), _multiset(corner_orders))
    return key in EXCEPTIONAL_TABLE.get(code, frozenset())


def _interior_problem(kind: str, d: int) -> str | None:
    if kind == PLUS and (d < 2 or d % 2):
        return "interior order %d at a '+' vertex is not a positive even integer" % d
    if kind == MINUS and (d < -1 or d == 0):
        return "interior order %d at a '-' vertex is not in {-1,1,2,3,...}" % d
    if kind == CYL:
        return "cylinder vertices carry no interior singularities"
    return None


def validate(c: Configuration) -> ValidationResult:
    """Check conditions 1 to 6 of a configuration, collecting every failure."""
    res = ValidationResult()
    bad = res.violations
    g = c.graph

    graph_ok = True
    try:
        base = classify_base_type(g)
    except GraphError as exc:
        base, graph_ok = INVALID, False
        bad.append(Violation(1, None, str(exc)))
    else:
        if base == INVALID:
            graph_ok = False
            bad.append(Violation(1, None, invalid_reason(g)))

    # condition 2: every side sits exactly once at its own vertex, admissible patterns
    ribbon_ok = True
    seen = Counter(c.sides())
    for side in g.all_ends():
        if seen[side] != 1:
            ribbon_ok = False
            bad.append(Violation(2, None, "edge side %s appears %d times in the ribbon data"
                                 % (side_name(side), seen[side])))
    for side in seen:
        if side[0] >= g.num_edges or side[1] not in (0, 1):
            ribbon_ok = False
            bad.append(Violation(2, None, "unknown edge side %s" % side_name(side)))
    for v, comps in enumerate(c.ribbon):
        for comp in comps:
            if not comp:
                ribbon_ok = False
                bad.append(Violation(2, v, "empty boundary component"))
            for s, _ in comp:
                if s[0] < g.num_edges and s[1] in (0, 1) and g.vertex_of(s) != v:
                    ribbon_ok = False
                    bad.append(Violation(2, v, "side %s belongs to vertex %d"
                                         % (side_name(s), g.vertex_of(s))))
    codes: dict[int, str] = {}
    if ribbon_ok and graph_ok:
        for v in range(g.num_vertices):
            try:
                codes[v] = c.boundary_type(v)
            except RibbonError as exc:
                ribbon_ok = False
                bad.append(Violation(2, v, str(exc)))

    # condition 4: corner orders
    for v, comps in enumerate(c.ribbon):
        kind = c.kinds[v]
        for comp in comps:
            for s, k in comp:
                if k < 0:
                    bad.append(Violation(4, v, "negative corner order at %s" % side_name(s)))
                if kind == CYL and k != 0:
                    bad.append(Violation(4, v, "cylinder corner at %s has order %d"
                                         % (side_name(s), k)))
            total = sum(k for _, k in comp)
            floor = min_component_sum(kind)
            if kind != CYL and total < floor:
                bad.append(Violation(4, v, "boundary component has D = %d below %d"
                                     % (total - 2, floor - 2)))
        if kind == PLUS and graph_ok and ribbon_ok:
            parity = compute_parities(c.components_at(v), signed_weights_at(g, v))
            for comp in comps:
                for s, k in comp:
                    want = parity[s]
                    if (k % 2 == 0) != (want == EVEN):
                        bad.append(Violation(4, v, "corner at %s has order %d but must be %s"
                                             % (side_name(s), k, want)))

    # condition 5: interior orders and the mod-4 window
    for v, ints in enumerate(c.interior):
        kind = c.kinds[v]
        for d in ints:
            problem = _interior_problem(kind, d)
            if problem:
                bad.append(Violation(5, v, problem))
        if kind == CYL:
            continue
        total = sum(ints) + sum(c.d_values(v))
        if total % 4 or total < -4:
            bad.append(Violation(5, v, "sum of interior orders and D values is %d" % total))

    # condition 6: forbidden data at '-' vertices
    for v, code in codes.items():
        if c.kinds[v] != MINUS:
            continue
        corner_orders = [k for comp in c.ribbon[v] for _, k in comp]
        if is_exceptional(code, c.interior[v], corner_orders):
            bad.append(Violation(6, v, "[%s, %s] is in the exceptional list of %s" % (
                _set_text(c.interior[v]), _set_text(corner_orders), code)))
    return res


def _set_text(values) -> str:
    return "{" + ",".join(str(x) for x in sorted(values)) + "}"


def _require_valid(c: Configuration) -> None:
    res = validate(c)
    if not res.ok:
        raise ConfigurationError(str(res))


# ---------------------------------------------------------------------------
# global ribbon graph and singularity data


@dataclass(frozen=True)
class GlobalRibbonGraph:
    """Cycles of corners around the conical points met by the saddle connections.

    ``faces[m]`` lists the first sides of the corners of the ``m``-th cycle
    and ``orders[m]`` the matching corner orders.
    """

    faces: tuple[tuple[Side, ...], ...]
    orders: tuple[tuple[int, ...], ...]

    def newborn_orders(self) -> list[int]:
        return [newborn_order(ks) for ks in self.orders]


def face_cycles(nxt: dict[Side, Side]) -> list[tuple[Side, ...]]:
    """Orbits of ``s -> opposite(next(s))`` listed from their least side."""
    seen = set()
    faces = []
    for start in sorted(nxt):
        if start in seen:
            continue
        face = []
        s = start
        while s not in seen:
            seen.add(s)
            face.append(s)
            s = opposite(nxt[s])
        if s != start:
            raise ConfigurationError("edge sides do not close up into cycles")
        faces.append(tuple(face))
    return faces


def global_ribbon_graph(c: Configuration) -> GlobalRibbonGraph:
    counts = Counter(c.sides())
    for side in c.graph.all_ends():
        if counts[side] != 1:
            raise ConfigurationError("edge %d does not appear exactly twice as a side" % side[0])
    if len(counts) != 2 * c.graph.num_edges:
        raise ConfigurationError("ribbon data mention unknown edge sides")
    nxt = c.next_map()
    orders = c.orders()
    faces = face_cycles(nxt)
    return GlobalRibbonGraph(tuple(faces), tuple(tuple(orders[s] for s in f) for f in faces))


def newborn_order(face) -> int:
    """Order of the conical point formed by a cycle of corners.

    ``face`` is a sequence of corner orders (or a tuple of ``(side, k)``).
    """
    ks = [k[1] if isinstance(k, tuple) else k for k in face]
    return sum(k + 1 for k in ks) - 2


def singularity_data(c: Configuration) -> QSingularityData:
    """Orders of all conical points of a surface realising ``c``."""
    _require_valid(c)
    grg = global_ribbon_graph(c)
    orders = [d for ints in c.interior for d in ints] + grg.newborn_orders()
    data = QSingularityData(tuple(orders))
    if not data.is_valid():
        raise ConfigurationError("configuration produces invalid data %s" % data)
    return data


def vertex_boundary_stratum(c: Configuration, v: int):
    """Stratum of the surface obtained from component ``v`` by contracting its boundary."""
    kind = c.kinds[v]
    ds = c.d_values(v)
    if kind == PLUS:
        return HSingularityData(tuple(d // 2 for d in c.interior[v]) + tuple(d // 2 for d in ds))
    if kind == MINUS:
        return QSingularityData(tuple(c.interior[v]) + tuple(ds))
    return None


def principal_boundary(c: Configuration) -> list[tuple[int, object]]:
    """``(vertex, stratum)`` for every non-cylinder vertex, in vertex order."""
    _require_valid(c)
    return [(v, vertex_boundary_stratum(c, v)) for v in range(c.graph.num_vertices)
            if c.kinds[v] != CYL]


def boundary_text(entries) -> str:
    return " ⊔ ".join(str(st) for _, st in entries)


def boundary_genera(c: Configuration) -> list[int]:
    return [genus(st) for _, st in principal_boundary(c)]


def exceptional_equivalence(code: str, interior: Iterable[int],
                            corner_orders: Iterable[int]) -> bool:
    """Whether the boundary stratum of a '-' vertex is empty.

    ``corner_orders`` are the corner orders at the vertex (for ``-2.2`` one per
    component, for ``-2.1`` the two corners of the single component).  The
    answer is computed from the stratum obtained by contracting the boundary.
    When the data satisfy the order and mod-4 conditions the answer is also
    compared with the exceptional table and a mismatch raises
    :class:`ConfigurationError`.
    """
    if code not in EXCEPTIONAL_TABLE:
        raise ConfigurationError("%s is not a '-' boundary pattern" % code)
    interior = list(interior)
    corner_orders = list(corner_orders)
    ds = _d_values_for(code, corner_orders)
    data = QSingularityData(tuple(interior) + tuple(ds))
    empty = is_empty_q(data)
    conds_hold = (
        all(k >= 0 for k in corner_orders)
        and all(d >= -1 for d in ds)
        and all(d == -1 or d >= 1 for d in interior)
        and sum(interior) + sum(ds) >= -4
        and (sum(interior) + sum(ds)) % 4 == 0
    )
    if conds_hold:
        listed = is_exceptional(code, interior, corner_orders)
        if listed != empty:
            raise ConfigurationError(
                "exceptional table disagrees with stratum emptiness for %s [%s, %s]"
                % (code, _set_text(interior), _set_text(corner_orders)))
    return empty


# ---------------------------------------------------------------------------
# canonical form


def _vertex_blocks(comps: list[tuple[Side, ...]], entry: Side):
    """Orderings of the sides at a vertex entered through ``entry``."""
    first = next(c for c in comps if entry in c)
    i = first.index(entry)
    head = list(first[i:] + first[:i])
    rest = [c for c in comps if c is not first]
    for perm in permutations(rest):
        yield from _rotations(head, list(perm))


def _rotations(acc: list[Side], remaining: list[tuple[Side, ...]]):
    if not remaining:
        yield acc
        return
    comp = remaining[0]
    for i in range(len(comp)):
        yield from _rotations(acc + list(comp[i:] + comp[:i]), remaining[1:])


def canonical_form(c: Configuration) -> str:
    """Isomorphism-invariant string encoding of ``c``.

    Every labelling obtained by a breadth-first exploration from some side
    is encoded, and the least code is kept.  Exploration is deterministic up
    to the order of the boundary components at a vertex, and those choices
    are all tried.
    """
    g = c.graph
    nxt = c.next_map()
    ks = c.orders()
    comps_at = [c.components_at(v) for v in range(g.num_vertices)]
    vertex_of = {s: g.vertex_of(s) for s in nxt}
    labels = [(c.kinds[v], c.interior[v]) for v in range(g.num_vertices)]

    best = None

    def encode(order: list[Side], vorder: list[int]):
        num = {s: i for i, s in enumerate(order)}
        vnum = {v: i for i, v in enumerate(vorder)}
        return (tuple(labels[v] for v in vorder),
                tuple((vnum[vertex_of[s]], num[opposite(s)], num[nxt[s]], ks[s]) for s in order))

    def explore(order: list[Side], vorder: list[int], ptr: int):
        nonlocal best
        visited = set(vorder)
        while ptr < len(order):
            t = opposite(order[ptr])
            ptr += 1
            w = vertex_of[t]
            if w not in visited:
                for block in _vertex_blocks(comps_at[w], t):
                    explore(order + block, vorder + [w], ptr)
                return
        code = encode(order, vorder)
        if best is None or code < best:
            best = code

    for start in sorted(nxt):
        v = vertex_of[start]
        for block in _vertex_blocks(comps_at[v], start):
            explore(block, [v], 0)
    if best is None:
        return ""
    verts, sides = best
    vtext = ";".join("%s%s" % (k, ",".join(str(d) for d in ints) and
                               "[" + ",".join(str(d) for d in ints) + "]" or "[]")
                     for k, ints in verts)
    stext = " ".join("%d.%d.%d.%d" % s for s in sides)
    return "%s|%s" % (vtext, stext)


def relabel(c: Configuration, vertex_perm: Sequence[int], edge_perm: Sequence[int],
            flip_edges: Iterable[int] = ()) -> Configuration:
    """An isomorphic copy: vertex ``v`` becomes ``vertex_perm[v]``, edge ``e`` becomes
    ``edge_perm[e]``, and the two ends of the edges in ``flip_edges`` are swapped."""
    flip = set(flip_edges)
    g = c.graph
    n = g.num_vertices
    new_edges: list = [None] * g.num_edges
    for e, (u, v) in enumerate(g.edges):
        a, b = vertex_perm[u], vertex_perm[v]
        new_edges[edge_perm[e]] = (b, a) if e in flip else (a, b)

    def side(s):
        e, i = s
        return edge_perm[e], (1 - i if e in flip else i)

    kinds: list = [None] * n
    interior: list = [None] * n
    ribbon: list = [None] * n
    for v in range(n):
        w = vertex_perm[v]
        kinds[w] = g.kinds[v]
        interior[w] = c.interior[v]
        ribbon[w] = tuple(tuple((side(s), k) for s, k in comp) for comp in c.ribbon[v])
    return Configuration(ConfGraph(tuple(kinds), tuple(new_edges)), tuple(interior), tuple(ribbon))


def boundary_is_nonempty(c: Configuration) -> bool:
    return all(not is_empty(st) for _, st in principal_boundary(c))


def strip_boundary_zeros(c: Configuration):
    return [(v, strip_zeros(st)) for v, st in principal_boundary(c)]
