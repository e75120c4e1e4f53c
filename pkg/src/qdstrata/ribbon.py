r"""
Local ribbon graphs.

The boundary of the closure of a component is a disjoint union of closed
chains of saddle connections.  At a vertex of the component graph this is
recorded as a partition of the edge ends into *boundary components*, each
with a cyclic order.  Two consecutive ends ``s -> t`` of a component meet at a
*corner* (a boundary singularity) of angle ``(k + 1) pi``; the integer ``k``
is the order of the corner.

Equivalently the structure is a permutation ``next`` of the ends at the
vertex whose cycles are the boundary components; a corner is labelled by its
first end ``s`` and joins ``s`` to ``next(s)``.

Which partitions may occur depends on the vertex kind.  The admissible
patterns carry codes such as ``+4.2c``: the symbol is the vertex kind, then
the valence, and after the dot the number of boundary components.  Letters
tell apart patterns with the same counts by how the ends sit on the cycles
of the graph.

At ``+`` vertices the parity of each corner is forced.  It is even exactly
when the signed weights of the two ends meeting at the corner have the same
sign::

    >>> model_parities("+2.1")
    (('odd', 'odd'),)
    >>> model_parities("+4.2c")
    (('even',), ('even', 'odd', 'odd'))
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import permutations
from typing import Hashable, Iterable, Mapping, Sequence

from .confgraph import CYL, MINUS, PLUS

EVEN = "even"
ODD = "odd"

BOUNDARY_TYPES = (
    "-1.1", "-2.1", "-2.2",
    "o2.2", "o3.2", "o4.2",
    "+2.1", "+2.2",
    "+3.1", "+3.2a", "+3.2b", "+3.3",
    "+4.1a", "+4.1b", "+4.2a", "+4.2b", "+4.2c", "+4.3a", "+4.3b", "+4.4",
)


class RibbonError(ValueError):
    """Raised when a local ribbon graph matches none of the admissible patterns."""


def canonical_cycle(seq: Sequence) -> tuple:
    """Rotate a cyclic sequence to its lexicographically least form."""
    seq = tuple(seq)
    if not seq:
        return seq
    return min(seq[i:] + seq[:i] for i in range(len(seq)))


def cycles_of(nxt: Mapping) -> list[tuple]:
    """Cycles of a permutation given as a mapping, each starting at its least element."""
    seen = set()
    out = []
    for start in sorted(nxt):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = nxt[start]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = nxt[x]
        out.append(tuple(cyc))
    return out


@dataclass(frozen=True)
class LocalRibbonGraph:
    """Boundary components at one vertex with the orders of their corners.

    ``components[i]`` is a tuple of ``(end, k)`` pairs in cyclic order where
    ``k`` is the order of the corner from ``end`` to the following end.
    """

    vertex: int
    kind: str
    components: tuple[tuple[tuple[Hashable, int], ...], ...]

    @property
    def ends(self) -> list:
        return [end for comp in self.components for end, _ in comp]

    def next_map(self) -> dict:
        nxt = {}
        for comp in self.components:
            for idx, (end, _) in enumerate(comp):
                nxt[end] = comp[(idx + 1) % len(comp)][0]
        return nxt

    def orders(self) -> dict:
        return {end: k for comp in self.components for end, k in comp}

    def boundary_sums(self) -> list[int]:
        """``D_i + 2``: the sum of corner orders along each component."""
        return [sum(k for _, k in comp) for comp in self.components]

    def d_values(self) -> list[int]:
        return [s - 2 for s in self.boundary_sums()]


def _same_group(groups: Iterable[Iterable[Hashable]]) -> dict:
    index = {}
    for idx, grp in enumerate(groups):
        for end in grp:
            index[end] = idx
    return index


def classify_boundary_type(kind: str, components: Sequence[Sequence[Hashable]],
                           groups: Sequence[Sequence[Hashable]] = ()) -> str:
    """Code of the boundary pattern formed by ``components``.

    ``components`` lists the ends of each boundary component in cyclic
    order.  ``groups`` is the cycle membership of the ends at valence three
    or four: the two ends of each cycle form a group, a chain end forms a
    group on its own.  Valence one and two vertices need no groups.
    """
    comps = [tuple(c) for c in components]
    valence = sum(len(c) for c in comps)
    ncomp = len(comps)
    if valence > 4 or valence < 1:
        raise RibbonError("valence %d is not admissible" % valence)
    group_of = _same_group(groups)
    if valence >= 3:
        missing = [end for c in comps for end in c if end not in group_of]
        if missing:
            raise RibbonError("cycle membership unknown for ends %r" % (missing,))
    sizes = sorted(len(c) for c in comps)

    if kind == MINUS:
        if valence == 1:
            return "-1.1"
        if valence == 2:
            return "-2.1" if ncomp == 1 else "-2.2"
        raise RibbonError("'-' vertices have valence one or two")

    if kind == CYL:
        if valence == 2 and sizes == [1, 1]:
            return "o2.2"
        if valence == 3 and sizes == [1, 2]:
            pair = next(c for c in comps if len(c) == 2)
            if group_of[pair[0]] == group_of[pair[1]]:
                return "o3.2"
        if valence == 4 and sizes == [2, 2]:
            if all(group_of[c[0]] == group_of[c[1]] for c in comps):
                return "o4.2"
        raise RibbonError("pattern %r is not admissible at a cylinder vertex" % (comps,))

    if kind != PLUS:
        raise RibbonError("unknown vertex kind %r" % (kind,))
    if valence == 1:
        raise RibbonError("'+' vertices have valence at least two")
    if valence == 2:
        return "+2.1" if ncomp == 1 else "+2.2"
    if valence == 3:
        if ncomp == 1:
            return "+3.1"
        if ncomp == 3:
            return "+3.3"
        single = next(c for c in comps if len(c) == 1)[0]
        group_size = sum(1 for x in group_of if group_of[x] == group_of[single])
        return "+3.2a" if group_size == 1 else "+3.2b"
    # valence four
    if ncomp == 1:
        cyc = comps[0]
        mixed = all(group_of[cyc[i]] != group_of[cyc[(i + 1) % 4]] for i in range(4))
        return "+4.1b" if mixed else "+4.1a"
    if ncomp == 2:
        if sizes == [1, 3]:
            return "+4.2c"
        same = all(group_of[c[0]] == group_of[c[1]] for c in comps)
        return "+4.2b" if same else "+4.2a"
    if ncomp == 3:
        pair = next(c for c in comps if len(c) == 2)
        return "+4.3b" if group_of[pair[0]] == group_of[pair[1]] else "+4.3a"
    return "+4.4"


def compute_parities(components: Sequence[Sequence[Hashable]],
                     signed: Mapping[Hashable, int]) -> dict:
    """Parity of every corner, keyed by the first end of the corner.

    A corner is even when the two ends meeting there have signed weights of
    the same sign.  A component with a single end has one corner joining the
    end to itself, which is therefore even.
    """
    out = {}
    for comp in components:
        comp = tuple(comp)
        for idx, end in enumerate(comp):
            nxt = comp[(idx + 1) % len(comp)]
            out[end] = EVEN if (signed[end] > 0) == (signed[nxt] > 0) else ODD
    return out


# Abstract ends of a model vertex.  ``x`` ends sit on a chain or cycle
# through a valence-two vertex; ``l`` ends bound the cycle and ``c`` is the
# chain end at a valence-three vertex; ``a`` and ``b`` ends bound the two
# cycles at a valence-four vertex.
_MODEL_SIGNS = {
    2: {"x0": 1, "x1": -1},
    3: {"l0": 1, "l1": 1, "c": -2},
    4: {"a0": 1, "a1": 1, "b0": -1, "b1": -1},
}
_MODEL_GROUPS = {
    1: [["x0"]],
    2: [["x0"], ["x1"]],
    3: [["l0", "l1"], ["c"]],
    4: [["a0", "a1"], ["b0", "b1"]],
}
_MODEL_COMPONENTS = {
    "-1.1": [("x0",)],
    "-2.1": [("x0", "x1")],
    "-2.2": [("x0",), ("x1",)],
    "o2.2": [("x0",), ("x1",)],
    "o3.2": [("l0", "l1"), ("c",)],
    "o4.2": [("a0", "a1"), ("b0", "b1")],
    "+2.1": [("x0", "x1")],
    "+2.2": [("x0",), ("x1",)],
    "+3.1": [("l0", "l1", "c")],
    "+3.2a": [("c",), ("l0", "l1")],
    "+3.2b": [("l0",), ("l1", "c")],
    "+3.3": [("l0",), ("l1",), ("c",)],
    "+4.1a": [("a0", "a1", "b0", "b1")],
    "+4.1b": [("a0", "b0", "a1", "b1")],
    "+4.2a": [("a0", "b0"), ("a1", "b1")],
    "+4.2b": [("a0", "a1"), ("b0", "b1")],
    "+4.2c": [("a0", "a1", "b0"), ("b1",)],
    "+4.3a": [("a0", "b0"), ("a1",), ("b1",)],
    "+4.3b": [("a0", "a1"), ("b0",), ("b1",)],
    "+4.4": [("a0",), ("a1",), ("b0",), ("b1",)],
}


def model_components(code: str) -> list[tuple[str, ...]]:
    """A representative local ribbon graph (on abstract ends) for ``code``."""
    return list(_MODEL_COMPONENTS[code])


def model_groups(code: str) -> list[list[str]]:
    valence = sum(len(c) for c in _MODEL_COMPONENTS[code])
    return _MODEL_GROUPS[valence]


def _pattern_key(pattern):
    return tuple(sorted(canonical_cycle(p) for p in pattern))


def model_parities(code: str):
    """Parity pattern of ``code``: one cyclic tuple per boundary component.

    ``None`` entries mark corners whose parity is not restricted (``-``
    vertices).  Corners of cylinder vertices are ``'even'``.  Components
    are rotated to their least form and sorted.
    """
    comps = _MODEL_COMPONENTS[code]
    kind = code[0]
    if kind == MINUS:
        return tuple(tuple(None for _ in c) for c in comps)
    valence = sum(len(c) for c in comps)
    par = compute_parities(comps, _MODEL_SIGNS[valence])
    return _pattern_key(tuple(par[e] for e in c) for c in comps)


def admissible_codes(kind: str, valence: int) -> list[str]:
    return [c for c in BOUNDARY_TYPES if c[0] == kind and int(c[1]) == valence]


def min_component_sum(kind: str) -> int:
    """Least value of ``D_i + 2`` allowed on a boundary component."""
    return 2 if kind == PLUS else 1 if kind == MINUS else 0


def check_orders_against_type(code: str, orders: Sequence[Sequence[int]]) -> bool:
    """Whether corner orders fit the boundary pattern ``code``.

    ``orders`` lists, for each boundary component, the corner orders in
    cyclic order.  Components may be given in any order and each may start
    at any corner.  Parities must match, orders are nonnegative, cylinder
    corners vanish and every component satisfies the bound on ``D_i``.
    """
    if code not in _MODEL_COMPONENTS:
        return False
    model = _MODEL_COMPONENTS[code]
    orders = [tuple(int(k) for k in c) for c in orders]
    if sorted(len(c) for c in orders) != sorted(len(c) for c in model):
        return False
    if any(k < 0 for c in orders for k in c):
        return False
    kind = code[0]
    if kind == CYL:
        return all(k == 0 for c in orders for k in c)
    floor = min_component_sum(kind)
    if any(sum(c) < floor for c in orders):
        return False
    if kind == MINUS:
        return True
    pattern = model_parities(code)
    observed = _pattern_key(tuple(EVEN if k % 2 == 0 else ODD for k in c) for c in orders)
    return observed == pattern


def ribbon_structures(kind: str, ends: Sequence[Hashable],
                      groups: Sequence[Sequence[Hashable]] = ()) -> list[dict]:
    """All admissible ``next`` permutations of ``ends`` at a vertex of ``kind``."""
    ends = list(ends)
    out = []
    for image in permutations(ends):
        nxt = dict(zip(ends, image))
        comps = cycles_of(nxt)
        try:
            classify_boundary_type(kind, comps, groups)
        except RibbonError:
            continue
        out.append(nxt)
    return out
