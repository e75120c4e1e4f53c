r"""
Graphs of connected components.

Cutting a flat surface along a collection of ĥomologous saddle connections
leaves finitely many connected components.  The graph has one vertex per
component and one edge per saddle connection, joining the components on
its two sides.  A vertex is labelled

* ``+`` when the component has trivial linear holonomy and is not a cylinder,
* ``-`` when the component has nontrivial linear holonomy,
* ``o`` when the component is a flat cylinder.

Only five shapes occur, up to subdividing edges by valence-two vertices:

========  =============================================================
``a``     a chain between two ``-`` vertices of valence one
``b``     a cycle through exactly one ``-`` vertex
``c``     a cycle and a chain meeting at a valence-three vertex, the
          chain ending at a ``-`` vertex
``d``     two cycles joined by a chain, no ``-`` vertices
``e``     two cycles sharing a valence-four vertex
========  =============================================================

Edges carry integer identifiers (their position in :attr:`ConfGraph.edges`)
and an *edge end* is a pair ``(edge, i)`` with ``i = 0`` for the end at
``edges[edge][0]`` and ``i = 1`` for the other one.  Loops therefore have two
distinct ends at the same vertex.

    >>> g = ConfGraph(("-", "+", "-"), ((0, 1), (1, 2)))
    >>> classify_base_type(g)
    'a'
    >>> assign_weights(g)
    (1, 1)
    >>> signed_weights_at(g, 1)
    {(0, 1): 1, (1, 0): -1}
"""

from __future__ import annotations

from dataclasses import dataclass

PLUS = "+"
MINUS = "-"
CYL = "o"
KINDS = (PLUS, MINUS, CYL)

INVALID = "invalid"

End = tuple[int, int]


class GraphError(ValueError):
    """Raised for graphs that cannot even be classified (e.g. disconnected)."""


@dataclass(frozen=True)
class ConfGraph:
    """A vertex-labelled multigraph; loops and multiple edges are allowed."""

    kinds: tuple[str, ...]
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        object.__setattr__(self, "kinds", tuple(self.kinds))
        object.__setattr__(self, "edges", tuple((int(u), int(v)) for u, v in self.edges))
        for k in self.kinds:
            if k not in KINDS:
                raise GraphError("unknown vertex kind %r" % (k,))
        n = len(self.kinds)
        for u, v in self.edges:
            if not (0 <= u < n and 0 <= v < n):
                raise GraphError("edge (%d,%d) has an endpoint out of range" % (u, v))

    @property
    def num_vertices(self) -> int:
        return len(self.kinds)

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    def vertex_of(self, end: End) -> int:
        return self.edges[end[0]][end[1]]

    def ends_at(self, v: int) -> list[End]:
        """Edge ends at ``v`` in lexicographic order."""
        return [(e, i) for e, uv in enumerate(self.edges) for i in (0, 1) if uv[i] == v]

    def all_ends(self) -> list[End]:
        return [(e, i) for e in range(len(self.edges)) for i in (0, 1)]

    def valence(self, v: int) -> int:
        return len(self.ends_at(v))

    def neighbours(self, v: int) -> list[int]:
        return [self.edges[e][1 - i] for e, i in self.ends_at(v)]

    def betti_number(self) -> int:
        return len(self.edges) - len(self.kinds) + self.num_components()

    def num_components(self, removed_vertex: int | None = None,
                       removed_edge: int | None = None) -> int:
        return len(self._components(removed_vertex, removed_edge))

    def _components(self, removed_vertex=None, removed_edge=None) -> list[set[int]]:
        parent = list(range(len(self.kinds)))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        for e, (u, v) in enumerate(self.edges):
            if e == removed_edge or removed_vertex in (u, v):
                continue
            parent[find(u)] = find(v)
        groups: dict[int, set[int]] = {}
        for x in range(len(self.kinds)):
            if x == removed_vertex:
                continue
            groups.setdefault(find(x), set()).add(x)
        return list(groups.values())

    def is_connected(self) -> bool:
        return len(self.kinds) > 0 and self.num_components() == 1

    def is_bridge(self, edge: int) -> bool:
        u, v = self.edges[edge]
        if u == v:
            return False
        return self.num_components(removed_edge=edge) > self.num_components()

    def cycle_groups(self, v: int) -> list[list[End]]:
        """Group the ends at ``v`` by the cycle (or chain) they belong to.

        Two ends are grouped together when they are the two ends of a loop
        at ``v`` or when their far endpoints stay connected after ``v`` is
        deleted.  Groups are returned in order of their least end.
        """
        comps = self._components(removed_vertex=v)
        where = {}
        for idx, comp in enumerate(comps):
            for x in comp:
                where[x] = idx
        groups: dict[object, list[End]] = {}
        for e, i in self.ends_at(v):
            far = self.edges[e][1 - i]
            key = ("loop", e) if far == v else ("comp", where[far])
            groups.setdefault(key, []).append((e, i))
        return sorted(groups.values())

    def text(self) -> str:
        """Text form ``vertices: +,-,o`` / ``edges: (0,1) (1,2)``."""
        return "vertices: %s\nedges: %s" % (
            ",".join(self.kinds), " ".join("(%d,%d)" % uv for uv in self.edges))

    @classmethod
    def from_text(cls, text: str) -> "ConfGraph":
        kinds: tuple[str, ...] = ()
        edges: list[tuple[int, int]] = []
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("vertices:"):
                body = line.split(":", 1)[1].strip()
                kinds = tuple(k.strip() for k in body.split(",") if k.strip())
            elif line.startswith("edges:"):
                body = line.split(":", 1)[1]
                for token in body.replace(")", ") ").split():
                    token = token.strip("()")
                    if token:
                        a, b = token.split(",")
                        edges.append((int(a), int(b)))
        return cls(kinds, tuple(edges))


def _classify(g: ConfGraph) -> tuple[str, str]:
    """Return ``(base type, reason)``; the reason is empty for valid graphs."""
    if not g.is_connected():
        raise GraphError("graph is not connected")
    if not g.edges:
        return INVALID, "graph has no edges"
    val = [g.valence(v) for v in range(g.num_vertices)]
    if max(val) > 4:
        return INVALID, "a vertex has valence above four"
    betti = g.betti_number()
    if betti > 2:
        return INVALID, "graph has more than two independent cycles"
    minus = [v for v, k in enumerate(g.kinds) if k == MINUS]
    for v, k in enumerate(g.kinds):
        if k == MINUS and val[v] > 2:
            return INVALID, "a '-' vertex has valence above two"
        if k != MINUS and val[v] < 2:
            return INVALID, "a '%s' vertex has valence one" % k
    leaves = [v for v in range(g.num_vertices) if val[v] == 1]
    branch = [v for v in range(g.num_vertices) if val[v] >= 3]

    base = None
    if betti == 0:
        if not branch and len(leaves) == 2 and sorted(minus) == sorted(leaves):
            base = "a"
        else:
            return INVALID, "a tree must be a chain between two '-' vertices"
    elif betti == 1:
        if not branch and not leaves:
            if len(minus) != 1:
                return INVALID, "a cycle must carry exactly one '-' vertex"
            base = "b"
        elif len(branch) == 1 and val[branch[0]] == 3 and len(leaves) == 1:
            if minus != leaves:
                return INVALID, "the chain of a cycle-with-tail graph must end at its only '-' vertex"
            base = "c"
        else:
            return INVALID, "unicyclic graph is neither a cycle nor a cycle with one tail"
    else:
        if minus:
            return INVALID, "graphs with two cycles carry no '-' vertex"
        if leaves:
            return INVALID, "graph with two cycles has a vertex of valence one"
        if len(branch) == 1 and val[branch[0]] == 4:
            base = "e"
        elif len(branch) == 2 and all(val[v] == 3 for v in branch):
            bridges = [e for e in range(g.num_edges) if g.is_bridge(e)]
            if not bridges:
                return INVALID, "two cycles sharing two valence-three vertices (banned shape)"
            base = "d"
            if all(g.kinds[v] == CYL for v in branch):
                chain_vertices = {x for e in bridges for x in g.edges[e]} - set(branch)
                if not any(g.kinds[x] == PLUS for x in chain_vertices):
                    return INVALID, ("the chain joining two valence-three cylinder vertices "
                                     "must contain a '+' vertex")
        else:
            return INVALID, "graph with two cycles is neither a figure-eight nor a dumbbell"

    # cylinder vertices inserted on edges
    for v, k in enumerate(g.kinds):
        if k != CYL or val[v] != 2:
            continue
        for e, i in g.ends_at(v):
            w = g.edges[e][1 - i]
            if w == v:
                return INVALID, "a cylinder vertex of valence two carries a loop"
            if g.kinds[w] == CYL and val[w] == 2:
                return INVALID, "two cylinder vertices of valence two are adjacent"
            if g.kinds[w] == CYL and val[w] == 3 and g.is_bridge(e):
                return INVALID, ("a cylinder vertex sits on the separating edge next to a "
                                 "valence-three cylinder vertex")
    return base, ""


def classify_base_type(g: ConfGraph) -> str:
    """One of ``'a'`` ... ``'e'``, or ``'invalid'``.

    Raises :class:`GraphError` when the graph is disconnected.
    """
    return _classify(g)[0]


def invalid_reason(g: ConfGraph) -> str:
    """Human-readable reason why :func:`classify_base_type` rejects ``g``."""
    return _classify(g)[1]


def assign_weights(g: ConfGraph) -> tuple[int, ...]:
    """Normalised lengths of the saddle connections, one per edge.

    Chain edges of the cycle-with-tail and dumbbell shapes have weight 2,
    every other edge has weight 1.
    """
    base = classify_base_type(g)
    if base == INVALID:
        raise GraphError("cannot weight an invalid graph: %s" % invalid_reason(g))
    if base in ("c", "d"):
        return tuple(2 if g.is_bridge(e) else 1 for e in range(g.num_edges))
    return tuple(1 for _ in g.edges)


def signed_weights_at(g: ConfGraph, v: int) -> dict[End, int]:
    """Signed weights of the ends at a ``+`` or ``o`` vertex.

    The global sign is fixed by giving the lexicographically least end a
    positive weight.  The weights at a vertex always sum to zero.
    """
    if g.kinds[v] == MINUS:
        raise GraphError("signed weights are undefined at '-' vertices")
    weights = assign_weights(g)
    ends = g.ends_at(v)
    if len(ends) == 2:
        w = weights[ends[0][0]]
        return {ends[0]: w, ends[1]: -w}
    groups = g.cycle_groups(v)
    if len(ends) == 3:
        signed = {}
        for grp in groups:
            for end in grp:
                signed[end] = 1 if len(grp) == 2 else -2
    elif len(ends) == 4:
        if len(groups) != 2:
            raise GraphError("valence-four vertex is not the centre of a figure-eight")
        signed = {end: (1 if idx == 0 else -1) for idx, grp in enumerate(groups) for end in grp}
    else:
        raise GraphError("unexpected valence %d" % len(ends))
    if signed[ends[0]] < 0:
        signed = {end: -w for end, w in signed.items()}
    return signed

