r"""
Polygonal half-translation surfaces.

A surface is given by convex polygons with rational vertices (listed
counterclockwise, straight angles allowed) and a perfect matching of their
edges.  Matched edges are identified either by a translation or by a *flip*
``z -> -z + c``.  Edge ``i`` of a polygon runs from vertex ``i`` to vertex
``i + 1``.

The text format has one statement per line::

    # three unit squares
    polygon R (0,0) (1,0) (2,0) (2,1) (1,1) (0,1)
    polygon T (0,0) (1,0) (1,1) (0,1)
    glue R.2 R.5
    glue R.0 R.1 flip
    glue T.1 T.3
    glue T.0 R.4
    glue T.2 R.3 flip

Such a file describes a torus with two poles and one zero of order two::

    >>> s = FlatSurface.from_text(EXAMPLE_TEXT)
    >>> sorted(s.cone_angles())
    [1, 1, 4]
    >>> s.singularity_data()
    Q(2,-1,-1)
    >>> s.holonomy_trivial()
    False

Angles are integers counting multiples of ``pi``.  All geometry is exact:
coordinates are scaled once to integers and points met by a straight line
are kept as integer triples ``(X, Y, D)`` standing for ``(X/D, Y/D)``.

Straight lines in a fixed direction ``v`` (a primitive integer vector) are
traced from the singular points.  A trace that reaches a singular point is a
saddle connection::

    >>> horizontal = s.saddle_connections((1, 0), 1)
    >>> len(horizontal)
    3
    >>> sorted(c.length_squared for c in horizontal)
    [Fraction(1, 1), Fraction(1, 1), Fraction(1, 1)]
    >>> all(are_homologous_hat(s, a, b) for a in horizontal for b in horizontal if a != b)
    True

Cutting along parallel saddle connections splits each polygon into strips
bounded by the chords the saddle connections leave inside it.  Components
of the complement are unions of strips.  The cut records which component lies
on each side of every saddle connection and the corners of the boundary.
"""

from __future__ import annotations

import math
import re
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from pathlib import Path
from typing import Iterable, NamedTuple, Sequence

from .confgraph import CYL, MINUS, PLUS, ConfGraph
from .configuration import Configuration, validate
from .strata import QSingularityData

Vec = tuple[int, int]
Corner = tuple[int, int]
HPoint = tuple[int, int, int]

EXAMPLE_TEXT = """\
polygon R (0,0) (1,0) (2,0) (2,1) (1,1) (0,1)
polygon T (0,0) (1,0) (1,1) (0,1)
glue R.2 R.5
glue R.0 R.1 flip
glue T.1 T.3
glue T.0 R.4
glue T.2 R.3 flip
"""


class SurfaceError(ValueError):
    """Malformed surface description or violated precondition."""


class ExtractionError(ValueError):
    """A collection of saddle connections does not yield a valid configuration."""


# ---------------------------------------------------------------------------
# integer plane geometry


def cross(a: Vec, b: Vec) -> int:
    return a[0] * b[1] - a[1] * b[0]


def dot(a: Vec, b: Vec) -> int:
    return a[0] * b[0] + a[1] * b[1]


def _turn_key(a: Vec, x: Vec):
    """Sort key for the counterclockwise angle from ``a`` to ``x`` in ``[0, 2 pi)``."""
    c = cross(a, x)
    d = dot(a, x)
    if c == 0:
        return (0, 0) if d > 0 else (2, 0)
    return (1 if c > 0 else 3, Fraction(-d, c))


def _same_direction(a: Vec, b: Vec) -> bool:
    return cross(a, b) == 0 and dot(a, b) > 0


def primitive(v: Sequence[int]) -> Vec:
    x, y = int(v[0]), int(v[1])
    g = math.gcd(x, y)
    if g == 0:
        raise SurfaceError("direction must be nonzero")
    return x // g, y // g


def canonical_direction(v: Sequence[int]) -> Vec:
    """Primitive representative of the line through ``v`` with positive sign."""
    x, y = primitive(v)
    if x < 0 or (x == 0 and y < 0):
        x, y = -x, -y
    return x, y


def _hreduce(x: int, y: int, d: int) -> HPoint:
    if d < 0:
        x, y, d = -x, -y, -d
    g = math.gcd(math.gcd(x, y), d)
    return x // g, y // g, d // g


def _hfrac(p: HPoint, scale: int) -> tuple[Fraction, Fraction]:
    return Fraction(p[0], p[2] * scale), Fraction(p[1], p[2] * scale)


# ---------------------------------------------------------------------------
# records


class Ray(NamedTuple):
    """A direction leaving a singular point, seen inside the corner that contains it."""

    point: int
    corner: Corner
    direction: Vec


class Piece(NamedTuple):
    """The part of a trace inside one polygon.

    ``edge`` is the index of the polygon edge the piece runs along, or
    ``None`` for a chord through the interior.  ``sign`` compares the
    polygon's frame with the frame at the start of the trace.
    """

    polygon: int
    start: HPoint
    end: HPoint
    direction: Vec
    edge: int | None
    sign: int


@dataclass(frozen=True)
class SaddleConnection:
    """A straight segment between singular points with no singular point inside.

    The holonomy in the frame of the starting polygon is ``param`` times
    ``start.direction`` (in the surface's internal integer scale).
    """

    start: Ray
    end: Ray
    pieces: tuple[Piece, ...]
    param: Fraction
    scale: int = 1

    @property
    def direction(self) -> Vec:
        return canonical_direction(self.start.direction)

    @property
    def holonomy(self) -> tuple[Fraction, Fraction]:
        """Holonomy vector, with the sign fixed to be lexicographically positive."""
        d = self.start.direction
        h = (self.param * d[0] / self.scale, self.param * d[1] / self.scale)
        if h[0] < 0 or (h[0] == 0 and h[1] < 0):
            h = (-h[0], -h[1])
        return h

    @property
    def length_squared(self) -> Fraction:
        d = self.start.direction
        return self.param * self.param * dot(d, d) / (self.scale * self.scale)

    @property
    def endpoints(self) -> tuple[int, int]:
        return self.start.point, self.end.point

    @property
    def is_loop(self) -> bool:
        return self.start.point == self.end.point

    @property
    def key(self) -> frozenset:
        """Identity of the unoriented segment: its two end rays."""
        return frozenset((self.start, self.end))

    def reversed(self) -> "SaddleConnection":
        flipped = tuple(Piece(p.polygon, p.end, p.start, (-p.direction[0], -p.direction[1]),
                              p.edge, p.sign) for p in reversed(self.pieces))
        # the frame of the new start is the frame of the old end
        last = self.pieces[-1].sign
        flipped = tuple(p._replace(sign=p.sign * last) for p in flipped)
        return SaddleConnection(self.end, self.start, flipped, self.param, self.scale)

    def __hash__(self):
        return hash(self.key)

    def __eq__(self, other):
        return isinstance(other, SaddleConnection) and self.key == other.key

    def describe(self) -> str:
        hx, hy = self.holonomy
        return "P%d -> P%d holonomy (%s,%s)" % (self.start.point, self.end.point, hx, hy)


# ---------------------------------------------------------------------------
# the surface


_NUM = r"[+-]?\d+(?:/\d+)?"
_POINT_RE = re.compile(r"\(\s*(%s)\s*,\s*(%s)\s*\)" % (_NUM, _NUM))


class FlatSurface:
    """A closed half-translation surface glued from convex rational polygons.

    ``gluings`` maps ``(polygon, edge)`` to ``(polygon, edge, flip)``; each
    pair may be given once.  ``marked`` lists corners whose vertex is to be
    treated as a singular point even when its angle is ``2 pi``.
    """

    def __init__(self, polygons: Sequence[tuple[str, Sequence[Sequence]]],
                 gluings: Iterable[tuple[Corner, Corner, bool]],
                 marked_corners: Iterable[Corner] = ()):
        self.names = tuple(name for name, _ in polygons)
        if len(set(self.names)) != len(self.names):
            raise SurfaceError("polygon names must be distinct")
        self.rational = tuple(tuple((Fraction(x), Fraction(y)) for x, y in pts)
                              for _, pts in polygons)
        dens = [q.denominator for pts in self.rational for pt in pts for q in pt]
        self.scale = math.lcm(*dens) if dens else 1
        self.verts = tuple(tuple((int(x * self.scale), int(y * self.scale)) for x, y in pts)
                           for pts in self.rational)
        for idx, pts in enumerate(self.verts):
            self._check_polygon(idx, pts)
        self.glue: dict[Corner, tuple[int, int, bool]] = {}
        for (p, i), (q, j), flip in gluings:
            if (p, i) == (q, j):
                raise SurfaceError("edge %s.%d is glued to itself" % (self.names[p], i))
            for a, b in (((p, i), (q, j)), ((q, j), (p, i))):
                if a in self.glue:
                    raise SurfaceError("edge %s.%d is glued twice" % (self.names[a[0]], a[1]))
                self.glue[a] = (b[0], b[1], bool(flip))
        for p, pts in enumerate(self.verts):
            for i in range(len(pts)):
                if (p, i) not in self.glue:
                    raise SurfaceError("edge %s.%d is not glued" % (self.names[p], i))
        for (p, i), (q, j, flip) in self.glue.items():
            self._check_gluing(p, i, q, j, flip)
        if not self._connected():
            raise SurfaceError("surface is not connected")
        self._ray_cache: dict = {}
        self._build_classes()
        marked = set()
        for corner in marked_corners:
            if corner not in self.class_of:
                raise SurfaceError("unknown corner %r" % (corner,))
            marked.add(self.class_of[corner])
        self.marked = frozenset(marked)

    # -- construction checks --------------------------------------------
    def _check_polygon(self, idx: int, pts) -> None:
        n = len(pts)
        name = self.names[idx]
        if n < 3:
            raise SurfaceError("polygon %s has fewer than three vertices" % name)
        area2 = sum(cross(pts[k], pts[(k + 1) % n]) for k in range(n))
        if area2 <= 0:
            raise SurfaceError("polygon %s is not counterclockwise" % name)
        for k in range(n):
            e0 = self.edge_vector(idx, k - 1, pts)
            e1 = self.edge_vector(idx, k, pts)
            if e1 == (0, 0):
                raise SurfaceError("polygon %s has a zero-length edge" % name)
            c = cross(e0, e1)
            if c < 0 or (c == 0 and dot(e0, e1) < 0):
                raise SurfaceError("polygon %s is not convex at vertex %d" % (name, k))

    def _check_gluing(self, p, i, q, j, flip) -> None:
        if (p, i) == (q, j):
            raise SurfaceError("edge %s.%d is glued to itself" % (self.names[p], i))
        ep = self.edge_vector(p, i)
        eq = self.edge_vector(q, j)
        want = ep if flip else (-ep[0], -ep[1])
        if eq != want:
            kind = "flip" if flip else "translation"
            raise SurfaceError("edges %s.%d and %s.%d cannot be matched by a %s"
                               % (self.names[p], i, self.names[q], j, kind))

    def _connected(self) -> bool:
        seen = {0}
        stack = [0]
        while stack:
            p = stack.pop()
            for i in range(len(self.verts[p])):
                q = self.glue[(p, i)][0]
                if q not in seen:
                    seen.add(q)
                    stack.append(q)
        return len(seen) == len(self.verts)

    def _build_classes(self) -> None:
        self.classes: list[tuple[Corner, ...]] = []
        self.class_of: dict[Corner, int] = {}
        self.corner_parity: dict[Corner, int] = {}
        for p, pts in enumerate(self.verts):
            for i in range(len(pts)):
                if (p, i) in self.class_of:
                    continue
                cls = len(self.classes)
                corners = []
                parity = 0
                c = (p, i)
                while c not in self.class_of:
                    self.class_of[c] = cls
                    self.corner_parity[c] = parity
                    corners.append(c)
                    q, j, flip = self.glue[(c[0], (c[1] - 1) % len(self.verts[c[0]]))]
                    parity ^= int(flip)
                    c = (q, j)
                if c != (p, i):
                    raise SurfaceError("malformed gluing around vertex %s.%d" % (self.names[p], i))
                self.classes.append(tuple(corners))
        self.angles = tuple(len(self.rays_at(cls, (1, 0))) for cls in range(len(self.classes)))
        for cls, corners in enumerate(self.classes):
            parity = self.corner_parity[corners[-1]]
            last = corners[-1]
            q, j, flip = self.glue[(last[0], (last[1] - 1) % len(self.verts[last[0]]))]
            if (parity ^ int(flip)) != self.angles[cls] % 2:
                raise SurfaceError("inconsistent holonomy around vertex class %d" % cls)

    # -- parsing ----------------------------------------------------------
    @classmethod
    def from_text(cls, text: str) -> "FlatSurface":
        polygons: list[tuple[str, list]] = []
        index: dict[str, int] = {}
        glue_lines = []
        for lineno, raw in enumerate(text.splitlines(), 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            words = line.split(None, 2)
            if words[0] == "polygon" and len(words) == 3:
                name = words[1]
                pts = [(Fraction(a), Fraction(b)) for a, b in _POINT_RE.findall(words[2])]
                leftover = _POINT_RE.sub("", words[2]).strip()
                if leftover or not pts:
                    raise SurfaceError("line %d: cannot read polygon vertices" % lineno)
                if name in index:
                    raise SurfaceError("line %d: polygon %s defined twice" % (lineno, name))
                index[name] = len(polygons)
                polygons.append((name, pts))
            elif words[0] == "glue":
                parts = line.split()
                if len(parts) not in (3, 4) or (len(parts) == 4 and parts[3] != "flip"):
                    raise SurfaceError("line %d: expected 'glue A.i B.j [flip]'" % lineno)
                glue_lines.append((lineno, parts[1], parts[2], len(parts) == 4))
            else:
                raise SurfaceError("line %d: unknown statement %r" % (lineno, words[0]))

        def edge_ref(lineno, token):
            name, _, num = token.rpartition(".")
            if name not in index or not num.isdigit():
                raise SurfaceError("line %d: bad edge reference %r" % (lineno, token))
            p = index[name]
            i = int(num)
            if i >= len(polygons[p][1]):
                raise SurfaceError("line %d: polygon %s has no edge %d" % (lineno, name, i))
            return p, i

        gluings = [(edge_ref(n, a), edge_ref(n, b), flip) for n, a, b, flip in glue_lines]
        return cls(polygons, gluings)

    @classmethod
    def load(cls, path) -> "FlatSurface":
        try:
            text = Path(path).read_text()
        except OSError as exc:
            raise SurfaceError("cannot read %s: %s" % (path, exc)) from exc
        return cls.from_text(text)

    def to_text(self) -> str:
        lines = []
        for name, pts in zip(self.names, self.rational):
            lines.append("polygon %s %s" % (name, " ".join("(%s,%s)" % pt for pt in pts)))
        done = set()
        for (p, i), (q, j, flip) in sorted(self.glue.items()):
            if (q, j) in done:
                continue
            done.add((p, i))
            lines.append("glue %s.%d %s.%d%s" % (self.names[p], i, self.names[q], j,
                                                  " flip" if flip else ""))
        return "\n".join(lines) + "\n"

    # -- basic geometry ---------------------------------------------------
    def edge_vector(self, p: int, i: int, pts=None) -> Vec:
        pts = self.verts[p] if pts is None else pts
        n = len(pts)
        a = pts[i % n]
        b = pts[(i + 1) % n]
        return b[0] - a[0], b[1] - a[1]

    def corner_arc(self, corner: Corner) -> tuple[Vec, Vec]:
        """Directions bounding a corner counterclockwise: along the outgoing edge,
        then back along the incoming edge."""
        p, i = corner
        pts = self.verts[p]
        n = len(pts)
        x = pts[i]
        a = (pts[(i + 1) % n][0] - x[0], pts[(i + 1) % n][1] - x[1])
        b = (pts[(i - 1) % n][0] - x[0], pts[(i - 1) % n][1] - x[1])
        return a, b

    def in_corner(self, corner: Corner, d: Vec) -> bool:
        a, b = self.corner_arc(corner)
        return _turn_key(a, d) < _turn_key(a, b)

    @property
    def num_polygons(self) -> int:
        return len(self.verts)

    def area(self) -> Fraction:
        total = 0
        for pts in self.verts:
            n = len(pts)
            total += sum(cross(pts[k], pts[(k + 1) % n]) for k in range(n))
        return Fraction(total, 2 * self.scale * self.scale)

    def cone_angles(self) -> list[int]:
        """Total angle of every vertex class, in multiples of ``pi``."""
        return list(self.angles)

    def is_singular(self, cls: int) -> bool:
        return self.angles[cls] != 2 or cls in self.marked

    def singular_points(self) -> list[int]:
        return [c for c in range(len(self.classes)) if self.is_singular(c)]

    def singularity_data(self) -> QSingularityData:
        """Orders ``angle/pi - 2`` of the points with angle other than ``2 pi``."""
        return QSingularityData(tuple(a - 2 for a in self.angles if a != 2))

    def genus(self) -> int:
        total = sum(a - 2 for a in self.angles)
        if total % 4:
            raise SurfaceError("cone angles do not add up to a closed surface")
        return total // 4 + 1

    def holonomy_trivial(self) -> bool:
        """Whether the flip flags can be absorbed by rotating polygons by ``pi``."""
        color = {0: 0}
        stack = [0]
        while stack:
            p = stack.pop()
            for i in range(len(self.verts[p])):
                q, _, flip = self.glue[(p, i)]
                want = color[p] ^ int(flip)
                if q not in color:
                    color[q] = want
                    stack.append(q)
                elif color[q] != want:
                    return False
        return True

    # -- rays ---------------------------------------------------------------
    def rays_at(self, cls: int, v: Sequence[int]) -> tuple[tuple[Corner, Vec, int], ...]:
        """Directions ``+v`` and ``-v`` leaving the point ``cls``, counterclockwise.

        Each entry is ``(corner, direction in that polygon, frame parity)``.
        Their number is the cone angle in multiples of ``pi``.
        """
        v = primitive(v)
        key = (cls, v)
        hit = self._ray_cache.get(key)
        if hit is not None:
            return hit
        out = []
        for corner in self.classes[cls]:
            a, b = self.corner_arc(corner)
            kb = _turn_key(a, b)
            found = []
            for d in (v, (-v[0], -v[1])):
                kd = _turn_key(a, d)
                if kd < kb:
                    found.append((kd, d))
            for _, d in sorted(found):
                out.append((corner, d, self.corner_parity[corner]))
        hit = tuple(out)
        self._ray_cache[key] = hit
        return hit

    def ray_index(self, cls: int, corner: Corner, d: Vec) -> int:
        for idx, (c, dd, _) in enumerate(self.rays_at(cls, d)):
            if c == corner and dd == d:
                return idx
        raise SurfaceError("no ray %r at corner %r" % (d, corner))

    def _normalise_ray(self, corner: Corner, d: Vec) -> tuple[Corner, Vec]:
        """Move a direction lying on the closing edge of a corner into the next corner."""
        a, b = self.corner_arc(corner)
        if _same_direction(d, b):
            p, i = corner
            q, j, flip = self.glue[(p, (i - 1) % len(self.verts[p]))]
            return (q, j), ((-d[0], -d[1]) if flip else d)
        return corner, d

    # -- tracing ------------------------------------------------------------
    def trace(self, cls: int, index: int, v: Sequence[int], max_param=None,
              max_length_squared=None) -> SaddleConnection | None:
        """Follow the ``index``-th ray of :meth:`rays_at` until a singular point.

        Returns ``None`` when the segment would exceed the bound: ``max_param``
        bounds the multiple of ``v`` travelled, ``max_length_squared`` the
        squared length in the surface's own units.
        """
        rays = self.rays_at(cls, v)
        corner, d, _ = rays[index]
        v = primitive(v)
        bound = None
        if max_param is not None:
            bound = Fraction(max_param)
        if max_length_squared is not None:
            scaled = Fraction(max_length_squared) * self.scale * self.scale / dot(v, v)
            bound = scaled if bound is None else min(bound, scaled)
            return self._trace(Ray(cls, corner, d), bound, squared=True)
        return self._trace(Ray(cls, corner, d), bound, squared=False)

    def _trace(self, start: Ray, bound, squared: bool) -> SaddleConnection | None:
        p, i = start.corner
        x0, y0 = self.verts[p][i]
        point: HPoint = (x0, y0, 1)
        w = start.direction
        sign = 1
        total = Fraction(0)
        pieces = []
        if bound is not None and bound <= 0:
            return None
        while True:
            pts = self.verts[p]
            n = len(pts)
            X, Y, D = point
            edge = self._running_edge(p, point, w)
            if edge is not None:
                e = self.edge_vector(p, edge)
                k = (edge + 1) % n if dot(e, w) > 0 else edge
                ex, ey = pts[k]
                # parameter along w from point to vertex k
                t = Fraction(ex * D - X, D * w[0]) if w[0] else Fraction(ey * D - Y, D * w[1])
                new = (ex, ey, 1)
                vertex = k
                exit_edge = None
            else:
                best_num = best_den = None
                exit_edge = None
                for j in range(n):
                    e = self.edge_vector(p, j)
                    nx_, ny_ = e[1], -e[0]
                    nw = nx_ * w[0] + ny_ * w[1]
                    if nw <= 0:
                        continue
                    px, py = pts[j]
                    num = nx_ * (px * D - X) + ny_ * (py * D - Y)
                    if best_num is None or num * best_den < best_num * nw:
                        best_num, best_den, exit_edge = num, nw, j
                if exit_edge is None:
                    raise SurfaceError("trace left polygon %s" % self.names[p])
                t = Fraction(best_num, D * best_den)
                new = _hreduce(X * best_den + best_num * w[0], Y * best_den + best_num * w[1],
                               D * best_den)
                vertex = next((k for k in range(n)
                               if pts[k][0] * new[2] == new[0] and pts[k][1] * new[2] == new[1]),
                              None)
                if vertex is None:
                    # collinear edges tie; take the one whose segment holds the point
                    exit_edge = next(j for j in range(n)
                                     if self._segment_param(p, j, new) is not None)
            if t <= 0:
                raise SurfaceError("trace did not advance")
            total += t
            if bound is not None and (total * total > bound if squared else total > bound):
                return None
            pieces.append(Piece(p, point, new, w, edge, sign))
            if vertex is not None:
                corner, r = self._normalise_ray((p, vertex), (-w[0], -w[1]))
                cls = self.class_of[corner]
                if self.is_singular(cls):
                    end = Ray(cls, corner, r)
                    return SaddleConnection(start, end, tuple(pieces), total, self.scale)
                rays = self.rays_at(cls, r)
                idx = next(k for k, (c, dd, _) in enumerate(rays) if c == corner and dd == r)
                c2, d2, par2 = rays[1 - idx]
                _, _, par1 = rays[idx]
                if par1 != par2:
                    sign = -sign
                p = c2[0]
                x0, y0 = self.verts[p][c2[1]]
                point = (x0, y0, 1)
                w = d2
            else:
                q, j, flip = self.glue[(p, exit_edge)]
                qx, qy = self.verts[q][(j + 1) % len(self.verts[q])]
                ax, ay = pts[exit_edge]
                X, Y, D = new
                if flip:
                    point = _hreduce(-X + (qx + ax) * D, -Y + (qy + ay) * D, D)
                    w = (-w[0], -w[1])
                    sign = -sign
                else:
                    point = _hreduce(X + (qx - ax) * D, Y + (qy - ay) * D, D)
                p = q

    def _segment_param(self, p: int, j: int, pt: HPoint) -> Fraction | None:
        """Position of ``pt`` along edge ``j`` of ``p`` in ``[0, 1]``, or ``None``."""
        ax, ay = self.verts[p][j]
        e = self.edge_vector(p, j)
        rel = (pt[0] - ax * pt[2], pt[1] - ay * pt[2])
        if cross(e, rel) != 0:
            return None
        s_num = dot(e, rel)
        full = dot(e, e) * pt[2]
        return Fraction(s_num, full) if 0 <= s_num <= full else None

    def _running_edge(self, p: int, point: HPoint, w: Vec) -> int | None:
        """Edge of ``p`` along which a trace from ``point`` in direction ``w`` runs."""
        pts = self.verts[p]
        n = len(pts)
        X, Y, D = point
        for j in range(n):
            e = self.edge_vector(p, j)
            if cross(e, w) != 0:
                continue
            ax, ay = pts[j]
            if cross(e, (X - ax * D, Y - ay * D)) != 0:
                continue
            # on the line of edge j; check that moving along w stays on the segment
            s_num = dot(e, (X - ax * D, Y - ay * D))   # parameter times D*|e|^2
            full = dot(e, e) * D
            if dot(e, w) > 0 and 0 <= s_num < full:
                return j
            if dot(e, w) < 0 and 0 < s_num <= full:
                return j
        return None

    def saddle_connections(self, v: Sequence[int], max_length, *, squared: bool = False
                           ) -> list[SaddleConnection]:
        """All saddle connections parallel to ``v`` of length at most ``max_length``.

        With ``squared=True`` the bound is read as a squared length.
        """
        v = primitive(v)
        bound2 = Fraction(max_length) if squared else Fraction(max_length) ** 2
        found: dict[frozenset, SaddleConnection] = {}
        done: set[Ray] = set()
        for cls in self.singular_points():
            for idx, (corner, d, _) in enumerate(self.rays_at(cls, v)):
                ray = Ray(cls, corner, d)
                if ray in done:
                    continue
                sc = self.trace(cls, idx, v, max_length_squared=bound2)
                done.add(ray)
                if sc is None:
                    continue
                done.add(sc.end)
                found.setdefault(sc.key, sc)
        return sorted(found.values(), key=_connection_sort_key)

    # -- double cover ----------------------------------------------------------
    @cached_property
    def double_cover(self) -> "FlatSurface":
        return double_cover(self)


def _connection_sort_key(sc: SaddleConnection):
    return (sc.length_squared, sc.start, sc.end)


def double_cover(s: FlatSurface) -> FlatSurface:
    """The canonical double cover on which the flat structure has trivial holonomy.

    Polygon ``k`` of sheet 1 is polygon ``k`` rotated by ``pi`` and gets the
    index ``k + n``.  Translations stay on a sheet and flips swap sheets.
    Preimages of singular points are marked, so poles lift to marked regular
    points.
    """
    if s.holonomy_trivial():
        raise SurfaceError("the surface already has trivial linear holonomy")
    n = s.num_polygons
    polys = []
    for sheet in (0, 1):
        for name, pts in zip(s.names, s.rational):
            if sheet:
                polys.append((name + "'", [(-x, -y) for x, y in pts]))
            else:
                polys.append((name, list(pts)))
    gluings = []
    for (p, i), (q, j, flip) in s.glue.items():
        if (p, i) > (q, j):
            continue
        for sheet in (0, 1):
            other = 1 - sheet if flip else sheet
            gluings.append(((p + sheet * n, i), (q + other * n, j), False))
    marked = [(p + sheet * n, i) for sheet in (0, 1) for p in range(n)
              for i in range(len(s.verts[p])) if s.is_singular(s.class_of[(p, i)])]
    cover = FlatSurface(polys, gluings, marked)
    cover.base = s
    return cover


# ---------------------------------------------------------------------------
# cutting


@dataclass
class CutComponent:
    index: int
    regions: list[tuple[int, int]]
    trivial_holonomy: bool
    boundary: list[tuple[tuple[tuple[int, int], int], ...]] = field(default_factory=list)
    interior_points: list[int] = field(default_factory=list)
    interior_orders: list[int] = field(default_factory=list)

    @property
    def is_cylinder(self) -> bool:
        return (self.trivial_holonomy and len(self.boundary) == 2 and not self.interior_orders
                and all(k == 0 for comp in self.boundary for _, k in comp))


class CutResult:
    """Complement of a family of parallel saddle connections.

    Saddle connection ``e`` has the side ``(e, 0)`` on its left (looking
    from its start) and ``(e, 1)`` on its right.  ``left[e]`` and
    ``right[e]`` are the components on those sides.
    """

    def __init__(self, surface: FlatSurface, conns: Sequence[SaddleConnection]):
        if not conns:
            raise SurfaceError("nothing to cut along")
        self.surface = s = surface
        self.conns = list(conns)
        keys = [c.key for c in self.conns]
        if len(set(keys)) != len(keys):
            raise SurfaceError("saddle connections to cut along must be distinct")
        v = self.conns[0].direction
        if any(c.direction != v for c in self.conns):
            raise SurfaceError("cuts are supported along parallel saddle connections only")
        self.v = v
        self._strips(s)
        self._glue_strips(s)
        self._sides(s)
        self._components(s)

    # strips inside each polygon
    def _offset(self, pt: HPoint) -> Fraction:
        return Fraction(cross(self.v, (pt[0], pt[1])), pt[2])

    def _strips(self, s: FlatSurface) -> None:
        v = self.v
        self.chords: list[list[Fraction]] = [[] for _ in range(s.num_polygons)]
        self.runs: dict[tuple[int, int], list[tuple[Fraction, Fraction]]] = {}
        self.ends: dict[int, set[HPoint]] = {p: set() for p in range(s.num_polygons)}
        self.bounds = []
        for pts in s.verts:
            offs = [cross(v, pt) for pt in pts]
            self.bounds.append((min(offs), max(offs)))
        for conn in self.conns:
            for pc in conn.pieces:
                self.ends[pc.polygon].add(pc.start)
                self.ends[pc.polygon].add(pc.end)
                if pc.edge is None:
                    self.chords[pc.polygon].append(self._offset(pc.start))
                else:
                    s0 = self._edge_param(s, pc.polygon, pc.edge, pc.start)
                    s1 = self._edge_param(s, pc.polygon, pc.edge, pc.end)
                    self.runs.setdefault((pc.polygon, pc.edge), []).append((min(s0, s1), max(s0, s1)))
        self.chords = [sorted(set(c)) for c in self.chords]

    @staticmethod
    def _edge_param(s: FlatSurface, p: int, i: int, pt: HPoint) -> Fraction:
        ax, ay = s.verts[p][i]
        e = s.edge_vector(p, i)
        return Fraction(dot(e, (pt[0] - ax * pt[2], pt[1] - ay * pt[2])), dot(e, e) * pt[2])

    def region_at(self, p: int, offset: Fraction, above: bool | None) -> int:
        """Strip of polygon ``p`` containing points at ``offset`` (nudged up or down)."""
        chords = self.chords[p]
        if above is None:
            k = bisect_left(chords, offset)
            if k < len(chords) and chords[k] == offset:
                raise SurfaceError("point lies on a cut")
            return bisect_left(chords, offset)
        if above:
            return bisect_right(chords, offset)
        return bisect_left(chords, offset)

    def _edge_region(self, p: int, i: int, param: Fraction) -> int:
        s = self.surface
        e = s.edge_vector(p, i)
        lo, hi = self.bounds[p]
        if cross(self.v, e) == 0:
            off = cross(self.v, s.verts[p][i])
            return 0 if off == lo else len(self.chords[p])
        ax, ay = s.verts[p][i]
        x = (ax + param * e[0], ay + param * e[1])
        off = self.v[0] * x[1] - self.v[1] * x[0]
        return self.region_at(p, off, None)

    def _glue_strips(self, s: FlatSurface) -> None:
        self.region_ids: dict[tuple[int, int], int] = {}
        for p in range(s.num_polygons):
            for k in range(len(self.chords[p]) + 1):
                self.region_ids[(p, k)] = len(self.region_ids)
        self.regions = list(self.region_ids)
        nreg = len(self.regions)
        self._parent = list(range(nreg))
        self._par = [0] * nreg
        self._bad = [False] * nreg
        for (p, i), (q, j, flip) in s.glue.items():
            if (p, i) > (q, j):
                continue
            params = {Fraction(0), Fraction(1)}
            for pt in self.ends[p]:
                t = self._on_edge(s, p, i, pt)
                if t is not None:
                    params.add(t)
            for pt in self.ends[q]:
                t = self._on_edge(s, q, j, pt)
                if t is not None:
                    params.add(1 - t)
            for a, b in (self.runs.get((p, i), [])):
                params.update((a, b))
            for a, b in (self.runs.get((q, j), [])):
                params.update((1 - b, 1 - a))
            cuts = self.runs.get((p, i), []) + [(1 - b, 1 - a) for a, b in self.runs.get((q, j), [])]
            ordered = sorted(params)
            for a, b in zip(ordered, ordered[1:]):
                mid = (a + b) / 2
                if any(lo <= mid <= hi for lo, hi in cuts):
                    continue
                ra = self.region_ids[(p, self._edge_region(p, i, mid))]
                rb = self.region_ids[(q, self._edge_region(q, j, 1 - mid))]
                self._union(ra, rb, int(flip))

    def _on_edge(self, s: FlatSurface, p: int, i: int, pt: HPoint) -> Fraction | None:
        ax, ay = s.verts[p][i]
        e = s.edge_vector(p, i)
        rel = (pt[0] - ax * pt[2], pt[1] - ay * pt[2])
        if cross(e, rel) != 0:
            return None
        t = Fraction(dot(e, rel), dot(e, e) * pt[2])
        return t if 0 <= t <= 1 else None

    def _find(self, x: int) -> tuple[int, int]:
        par = 0
        root = x
        while self._parent[root] != root:
            par ^= self._par[root]
            root = self._parent[root]
        # path compression
        cur, cur_par = x, par
        while self._parent[cur] != cur:
            nxt = self._parent[cur]
            nxt_par = cur_par ^ self._par[cur]
            self._parent[cur] = root
            self._par[cur] = cur_par
            cur, cur_par = nxt, nxt_par
        return root, par

    def _union(self, a: int, b: int, flip: int) -> None:
        ra, pa = self._find(a)
        rb, pb = self._find(b)
        if ra == rb:
            if pa ^ pb != flip:
                self._bad[ra] = True
            return
        self._parent[rb] = ra
        self._par[rb] = pa ^ pb ^ flip
        self._bad[ra] = self._bad[ra] or self._bad[rb]

    # sides of every saddle connection
    def _piece_sides(self, pc: Piece) -> tuple[int, int, int]:
        """Regions on the left and right of a piece and the flip between them."""
        s = self.surface
        up = dot(self.v, pc.direction) > 0     # left side lies at larger offsets
        if pc.edge is None:
            off = self._offset(pc.start)
            above = self.region_ids[(pc.polygon, self.region_at(pc.polygon, off, True))]
            below = self.region_ids[(pc.polygon, self.region_at(pc.polygon, off, False))]
            return (above, below, 0) if up else (below, above, 0)
        p, i = pc.polygon, pc.edge
        q, j, flip = s.glue[(p, i)]
        mid = (self._edge_param(s, p, i, pc.start) + self._edge_param(s, p, i, pc.end)) / 2
        inside = self.region_ids[(p, self._edge_region(p, i, mid))]
        across = self.region_ids[(q, self._edge_region(q, j, 1 - mid))]
        e = s.edge_vector(p, i)
        if dot(e, pc.direction) > 0:      # polygon interior on the left
            return inside, across, int(flip)
        return across, inside, int(flip)

    def _sides(self, s: FlatSurface) -> None:
        self._side_regions = []
        for conn in self.conns:
            self._side_regions.append(self._piece_sides(conn.pieces[0]))

    def _components(self, s: FlatSurface) -> None:
        roots: dict[int, int] = {}
        self.region_component: dict[int, int] = {}
        for rid in range(len(self.regions)):
            root, _ = self._find(rid)
            if root not in roots:
                roots[root] = len(roots)
            self.region_component[rid] = roots[root]
        comps = [CutComponent(k, [], True) for k in range(len(roots))]
        for rid, key in enumerate(self.regions):
            comps[self.region_component[rid]].regions.append(key)
        for root, k in roots.items():
            comps[k].trivial_holonomy = not self._bad[root]
        self.components = comps
        self.left = []
        self.right = []
        self.crossing = []
        for lreg, rreg, flip in self._side_regions:
            self.left.append(self.region_component[lreg])
            self.right.append(self.region_component[rreg])
            self.crossing.append(self._find(lreg)[1] ^ self._find(rreg)[1] ^ flip)
        # interior singular points
        on_cut = {c.start.point for c in self.conns} | {c.end.point for c in self.conns}
        for cls in s.singular_points():
            if cls in on_cut:
                continue
            p, i = s.classes[cls][0]
            off = Fraction(cross(self.v, s.verts[p][i]))
            rid = self.region_ids[(p, self.region_at(p, off, None))]
            comp = comps[self.region_component[rid]]
            comp.interior_points.append(cls)
            if s.angles[cls] != 2:
                comp.interior_orders.append(s.angles[cls] - 2)
        # corners at the singular points on the cut
        nxt: dict[tuple[int, int], tuple[tuple[int, int], int]] = {}
        for cls in sorted(on_cut):
            rays = s.rays_at(cls, self.v)
            marks = []
            for pos, (corner, d, _) in enumerate(rays):
                for e, conn in enumerate(self.conns):
                    if conn.start.point == cls and conn.start.corner == corner \
                            and conn.start.direction == d:
                        marks.append((pos, (e, 0), (e, 1)))     # (position, ccw side, cw side)
                    if conn.end.point == cls and conn.end.corner == corner \
                            and conn.end.direction == d:
                        marks.append((pos, (e, 1), (e, 0)))
            marks.sort()
            n = len(rays)
            for idx, (pos, ccw, _) in enumerate(marks):
                npos, _, cw_next = marks[(idx + 1) % len(marks)]
                gap = (npos - pos) % n or n
                nxt[ccw] = (cw_next, gap - 1)
        self.next_side = {side: t for side, (t, _) in nxt.items()}
        self.corner_order = {side: k for side, (_, k) in nxt.items()}
        seen = set()
        for side in sorted(nxt):
            if side in seen:
                continue
            cyc = []
            cur = side
            while cur not in seen:
                seen.add(cur)
                cyc.append((cur, self.corner_order[cur]))
                cur = self.next_side[cur]
            comps[self.side_component(side)].boundary.append(tuple(cyc))

    def side_component(self, side: tuple[int, int]) -> int:
        e, i = side
        return self.left[e] if i == 0 else self.right[e]

    @property
    def num_components(self) -> int:
        return len(self.components)

    # coarser cuts ---------------------------------------------------------
    def reglue(self, keep: Iterable[int]) -> "CoarseCut":
        """Components left when only the saddle connections ``keep`` stay cut."""
        return CoarseCut(self, set(keep))

    def area(self, comp: int) -> Fraction:
        s = self.surface
        total = Fraction(0)
        for p, k in self.components[comp].regions:
            total += _strip_area(s.verts[p], self.v, self.chords[p], k)
        return total / (s.scale * s.scale)


class CoarseCut:
    """Components of the complement of a subfamily, derived from a finer cut."""

    def __init__(self, fine: CutResult, keep: set[int]):
        n = fine.num_components
        parent = list(range(n))
        par = [0] * n
        bad = [not c.trivial_holonomy for c in fine.components]

        def find(x):
            p = 0
            while parent[x] != x:
                p ^= par[x]
                x = parent[x]
            return x, p

        for e in range(len(fine.conns)):
            if e in keep:
                continue
            (ra, pa), (rb, pb) = find(fine.left[e]), find(fine.right[e])
            if ra == rb:
                if pa ^ pb != fine.crossing[e]:
                    bad[ra] = True
                continue
            parent[rb] = ra
            par[rb] = pa ^ pb ^ fine.crossing[e]
            bad[ra] = bad[ra] or bad[rb]
        roots: dict[int, int] = {}
        self.component_of = []
        for x in range(n):
            r, _ = find(x)
            roots.setdefault(r, len(roots))
            self.component_of.append(roots[r])
        self.num_components = len(roots)
        self.trivial = [True] * self.num_components
        for x in range(n):
            r, _ = find(x)
            if bad[r]:
                self.trivial[roots[r]] = False
        self.keep = keep
        self.fine = fine

    def boundary_edges(self, comp: int) -> set[int]:
        """Saddle connections (among the kept ones) with a side on ``comp``."""
        out = set()
        for e in self.keep:
            if self.component_of[self.fine.left[e]] == comp or \
                    self.component_of[self.fine.right[e]] == comp:
                out.add(e)
        return out


def _strip_area(pts, v: Vec, chords: Sequence[Fraction], k: int) -> Fraction:
    """Twice... no: the area of strip ``k`` of a convex polygon (integer units)."""
    poly = [(Fraction(x), Fraction(y)) for x, y in pts]
    lo = chords[k - 1] if k > 0 else None
    hi = chords[k] if k < len(chords) else None

    def off(pt):
        return v[0] * pt[1] - v[1] * pt[0]

    def clip(poly, level, keep_above):
        out = []
        n = len(poly)
        for idx in range(n):
            a, b = poly[idx], poly[(idx + 1) % n]
            fa, fb = off(a) - level, off(b) - level
            ina = fa >= 0 if keep_above else fa <= 0
            inb = fb >= 0 if keep_above else fb <= 0
            if ina:
                out.append(a)
            if ina != inb:
                t = fa / (fa - fb)
                out.append((a[0] + t * (b[0] - a[0]), a[1] + t * (b[1] - a[1])))
        return out

    if lo is not None:
        poly = clip(poly, lo, True)
    if hi is not None:
        poly = clip(poly, hi, False)
    n = len(poly)
    return sum((poly[i][0] * poly[(i + 1) % n][1] - poly[(i + 1) % n][0] * poly[i][1])
               for i in range(n)) / 2


def cut(s: FlatSurface, conns: Sequence[SaddleConnection]) -> CutResult:
    """Cut ``s`` along parallel saddle connections."""
    return CutResult(s, conns)


# ---------------------------------------------------------------------------
# the test for hat-homologous pairs


def _parallel(a: SaddleConnection, b: SaddleConnection) -> bool:
    return a.direction == b.direction


def _pair_case(fine: CutResult, i: int, j: int) -> bool:
    """Whether the connections ``i`` and ``j`` of a cut pass the four-case test."""
    li, lj = fine.conns[i].length_squared, fine.conns[j].length_squared
    both = fine.reglue({i, j})
    alone_i = fine.reglue({i})
    alone_j = fine.reglue({j})
    sep_i = alone_i.num_components == 2
    sep_j = alone_j.num_components == 2
    n = both.num_components
    triv = both.trivial
    if not sep_i and not sep_j:
        if n == 1:
            return triv[0] and li == lj
        if n == 2:
            return sorted(triv) == [False, True] and li == lj
        return False
    if sep_i != sep_j:
        sep, other = (i, j) if sep_i else (j, i)
        if n != 2 or sorted(triv) != [False, True]:
            return False
        bad = triv.index(False)
        if both.boundary_edges(bad) != {sep}:
            return False
        return fine.conns[sep].length_squared == 4 * fine.conns[other].length_squared
    if n != 3 or triv.count(True) != 1:
        return False
    good = triv.index(True)
    return both.boundary_edges(good) == {i, j} and li == lj


def are_homologous_hat(s: FlatSurface, g1: SaddleConnection, g2: SaddleConnection,
                       fine: CutResult | None = None) -> bool:
    """Test whether two saddle connections are hat-homologous by cutting ``s``.

    The pair must be parallel; the complement of their union (and of each of
    them alone) is then compared with the four admissible patterns: number
    of components, which of them have trivial linear holonomy, which
    saddle connections bound them and the ratio of the lengths.
    """
    if s.holonomy_trivial():
        raise SurfaceError("surfaces with trivial linear holonomy are not supported")
    if g1 == g2:
        raise SurfaceError("the two saddle connections coincide")
    if not _parallel(g1, g2):
        return False
    if fine is None:
        fine = cut(s, [g1, g2])
        return _pair_case(fine, 0, 1)
    idx = {c.key: k for k, c in enumerate(fine.conns)}
    return _pair_case(fine, idx[g1.key], idx[g2.key])


def hat_homology_classes(s: FlatSurface, conns: Sequence[SaddleConnection]
                         ) -> list[list[SaddleConnection]]:
    """Split parallel saddle connections into maximal hat-homologous collections."""
    if not conns:
        return []
    fine = cut(s, conns)
    n = len(conns)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if find(i) != find(j) and _pair_case(fine, i, j):
                parent[find(j)] = find(i)
    groups: dict[int, list[SaddleConnection]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(conns[i])
    return list(groups.values())


# ---------------------------------------------------------------------------
# independent check on the double cover


def lift(s: FlatSurface, g: SaddleConnection, sheet: int) -> SaddleConnection:
    """The lift of ``g`` to the double cover starting on ``sheet``."""
    cover = s.double_cover
    n = s.num_polygons
    p, i = g.start.corner
    d = g.start.direction
    corner = (p + sheet * n, i)
    dd = d if sheet == 0 else (-d[0], -d[1])
    cls = cover.class_of[corner]
    idx = cover.ray_index(cls, corner, dd)
    up = cover.trace(cls, idx, dd, max_param=g.param)
    if up is None or up.param != g.param:
        raise SurfaceError("lift of a saddle connection does not close up")
    q, j = up.end.corner
    if s.class_of[(q % n, j)] != g.end.point:
        raise SurfaceError("lift of a saddle connection ends over the wrong point")
    return up


def _potential_exists(edges: Sequence[tuple[int, int, int]], nodes: int) -> bool:
    """Is there ``f`` with ``f(a) - f(b) = c`` for every ``(a, b, c)``?"""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(nodes)]
    for a, b, c in edges:
        adj[a].append((b, -c))
        adj[b].append((a, c))
    value: dict[int, int] = {}
    for start in range(nodes):
        if start in value:
            continue
        value[start] = 0
        stack = [start]
        while stack:
            x = stack.pop()
            for y, delta in adj[x]:
                want = value[x] + delta
                if y not in value:
                    value[y] = want
                    stack.append(y)
                elif value[y] != want:
                    return False
    return True


def homologous_on_double_cover(s: FlatSurface, g1: SaddleConnection,
                               g2: SaddleConnection) -> bool:
    """Decide hat-homology from relative homology classes on the double cover.

    A combination of lifts is null-homologous relative to the singular points
    exactly when it is the boundary of an integer combination of components
    of the complement of the lifts.  This is checked for ``[g'] + [g'']`` of
    each connection (which selects its hat class) and then for the
    difference or sum of the two hat classes.
    """
    if g1 == g2:
        raise SurfaceError("the two saddle connections coincide")
    if not _parallel(g1, g2):
        # the classes integrate omega to parallel vectors only for parallel connections
        return False
    cover = s.double_cover
    lifts = [lift(s, g1, 0), lift(s, g1, 1), lift(s, g2, 0), lift(s, g2, 1)]
    fine = cut(cover, lifts)
    nodes = fine.num_components

    def null(coeffs):
        return _potential_exists(
            [(fine.left[e], fine.right[e], c) for e, c in enumerate(coeffs)], nodes)

    hat1 = (1, 0) if null((1, 1, 0, 0)) else (1, -1)
    hat2 = (1, 0) if null((0, 0, 1, 1)) else (1, -1)
    return any(null(hat1 + tuple(sign * c for c in hat2)) for sign in (1, -1))


# ---------------------------------------------------------------------------
# configurations of collections


def extract_configuration(s: FlatSurface, conns: Sequence[SaddleConnection],
                          check: bool = True) -> Configuration:
    """The configuration of a collection of hat-homologous saddle connections.

    Vertices are the components of the complement, in the order in which
    the cut numbers them; the edge for ``conns[e]`` joins the component on
    its left to the one on its right.  With ``check=False`` the pairwise
    hat-homology of ``conns`` is assumed rather than tested.
    """
    if s.holonomy_trivial():
        raise SurfaceError("surfaces with trivial linear holonomy are not supported")
    conns = list(conns)
    for a in range(len(conns) if check else 0):
        for b in range(a + 1, len(conns)):
            if not are_homologous_hat(s, conns[a], conns[b]):
                raise ExtractionError("saddle connections %d and %d are not hat-homologous"
                                      % (a, b))
    fine = cut(s, conns)
    kinds = []
    for comp in fine.components:
        if comp.is_cylinder:
            kinds.append(CYL)
        elif comp.trivial_holonomy:
            kinds.append(PLUS)
        else:
            kinds.append(MINUS)
    graph = ConfGraph(tuple(kinds), tuple((fine.left[e], fine.right[e])
                                          for e in range(len(conns))))
    interior = tuple(tuple(comp.interior_orders) for comp in fine.components)
    ribbon = tuple(tuple(comp.boundary) for comp in fine.components)
    config = Configuration(graph, interior, ribbon)
    res = validate(config)
    if not res.ok:
        raise ExtractionError("extracted configuration is not valid:\n%s" % res)
    return config


def bundled_surface(name: str) -> FlatSurface:
    """Load one of the surfaces shipped with the package (``threesquare`` ...)."""
    from importlib import resources

    if not name.endswith(".surf"):
        name += ".surf"
    text = resources.files("qdstrata").joinpath("data").joinpath(name).read_text()
    return FlatSurface.from_text(text)


BUNDLED_SURFACES = ("threesquare", "pillowcase", "foursquare_q22", "foursquare_q11", "fivesquare_q3", "square")
