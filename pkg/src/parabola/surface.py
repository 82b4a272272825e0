"""Geometry of the parabola surface.

Vertex positions are polynomial in ``c``; everything metric (segments,
tracing, cylinders) is realized only at ``c = 1``, where the two polygons are

* ``Q+`` -- the convex hull of ``{(k, k^2)}``, lying above its boundary, and
* ``Q-`` -- its rotation by pi, the hull of ``{(k, -k^2)}``, lying below.

Boundary edge ``k`` of a polygon joins its corners ``k`` and ``k + 1``. Edge
``j`` of ``Q+`` (the saddle connection sigma_j) is glued by translation to
edge ``-j-1`` of ``Q-``, which is its image under the rotation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import HitsVertexInterior, NotClosingAtSingularity, NotTransverse
from .exact import ONE, ZERO, C, PolyMatrix, PolyVec, as_fraction, rat_str

PLUS = "+"
MINUS = "-"

# T_c(v) = M v + (1, 1); det M = 1
_M = PolyMatrix(C, C - ONE, C + ONE, C)
_M_INV = _M.inverse()
_SHIFT = PolyVec(ONE, ONE)


@dataclass(frozen=True)
class Vertex:
    index: int
    position: PolyVec

    @property
    def singularity(self) -> int:
        """0 for s0 (even index), 1 for s1."""
        return self.index % 2


def T(v: PolyVec) -> PolyVec:
    return _M @ v + _SHIFT


def T_inverse(v: PolyVec) -> PolyVec:
    return _M_INV @ (v - _SHIFT)


@lru_cache(maxsize=None)
def _position(n: int) -> PolyVec:
    if n == 0:
        return PolyVec(ZERO, ZERO)
    if n > 0:
        return T(_position(n - 1))
    return T_inverse(_position(n + 1))


def vertex(n: int) -> Vertex:
    # build the cache outward from 0 so deep indices do not recurse deeply
    step = 1 if n >= 0 else -1
    for k in range(0, n, step * 64):
        _position(k)
    return Vertex(n, _position(n))


# ---------------------------------------------------------------------------
# c = 1 polygons

Point = tuple  # (Fraction, Fraction)


def corner(tag: str, k: int) -> Point:
    y = Fraction(k * k)
    return (Fraction(k), y if tag == PLUS else -y)


def _side(tag: str) -> int:
    return 1 if tag == PLUS else -1


def _edge_vector(tag: str, k: int) -> Point:
    a, b = corner(tag, k), corner(tag, k + 1)
    return (b[0] - a[0], b[1] - a[1])


def _cross(u, v):
    return u[0] * v[1] - u[1] * v[0]


def _sub(u, v):
    return (u[0] - v[0], u[1] - v[1])


def _add(u, v):
    return (u[0] + v[0], u[1] + v[1])


def _scale(u, s):
    return (u[0] * s, u[1] * s)


def partner(tag: str, k: int):
    """Glued edge of edge ``k`` of ``tag`` and the translation carrying it there."""
    if tag == PLUS:
        other, j = MINUS, -k - 1
    else:
        other, j = PLUS, -k - 1
    # lower corners correspond: both edges are traversed in the same direction
    shift = _sub(corner(other, j), corner(tag, k))
    return other, j, shift


def singularity_of(tag: str, k: int) -> int:
    """Which of s0/s1 the corner ``k`` of ``tag`` represents."""
    return k % 2 if tag == PLUS else (k + 1) % 2


def boundary_fn(x: Fraction) -> Fraction:
    """Height of the boundary of Q+ over ``x``."""
    k = math.floor(x)
    return k * k + (x - k) * (2 * k + 1)


def on_boundary(tag: str, q: Point) -> bool:
    y = boundary_fn(q[0])
    return q[1] == (y if tag == PLUS else -y)


def corner_at(tag: str, q: Point) -> Optional[int]:
    x = q[0]
    if x.denominator == 1 and q == corner(tag, int(x)):
        return int(x)
    return None


def edge_at(tag: str, q: Point) -> Optional[int]:
    """Index of the boundary edge containing ``q`` (lower corner if a vertex)."""
    if not on_boundary(tag, q):
        return None
    return math.floor(q[0])


def in_cone(tag: str, k: int, d: Point) -> bool:
    s = _side(tag)
    return s * _cross(_edge_vector(tag, k - 1), d) >= 0 and s * _cross(_edge_vector(tag, k), d) >= 0


def _exit(tag: str, pos: Point, R: Point):
    """First boundary hit of ``pos + s*R`` for ``0 < s <= 1``.

    Returns ``(s, edges)`` or ``None`` if the segment stays inside. Only edges
    spanning the segment's x-range can be hit first, so the search is finite.
    """
    s_sign = _side(tag)
    x0, x1 = pos[0], pos[0] + R[0]
    lo, hi = math.floor(min(x0, x1)) - 1, math.ceil(max(x0, x1)) + 1
    best, edges = None, []
    for k in range(lo, hi + 1):
        e = _edge_vector(tag, k)
        rate = s_sign * _cross(e, R)
        if rate >= 0:
            continue
        f0 = s_sign * _cross(e, _sub(pos, corner(tag, k)))
        if f0 < 0:
            raise ValueError(f"point {pos} lies outside polygon {tag}")
        s = f0 / -rate
        if s == 0 or s > 1:
            continue
        if best is None or s < best:
            best, edges = s, [k]
        elif s == best:
            edges.append(k)
    if best is None:
        return None
    return best, edges


# ---------------------------------------------------------------------------
# Segment chains


@dataclass(frozen=True)
class Segment:
    tag: str
    start: Point
    end: Point

    def to_json(self) -> dict:
        return {
            "polygon": self.tag,
            "start": [rat_str(v) for v in self.start],
            "end": [rat_str(v) for v in self.end],
        }

    @property
    def vector(self) -> Point:
        return _sub(self.end, self.start)


@dataclass(frozen=True)
class Piece:
    """Portion of a chain inside one polygon, with crossing points snapped to
    the lower corner of the edge crossed."""

    tag: str
    start_corner: int
    end_corner: int


def corner_position(tag: str, k: int) -> PolyVec:
    """Deformed position of a polygon corner as polynomials in ``c``."""
    if tag == PLUS:
        return vertex(k).position
    return -vertex(-k).position


def pieces_class(pieces: Sequence[Piece]) -> PolyVec:
    """Deformation holonomy of a chain of pieces.

    Sliding a crossing point along its edge to a corner changes the path by a
    back-and-forth along the same edge, so the class is unchanged; inside a
    polygon a corner-to-corner path is homologous to the boundary path.
    """
    total = PolyVec(ZERO, ZERO)
    for p in pieces:
        total = total + corner_position(p.tag, p.end_corner) - corner_position(p.tag, p.start_corner)
    return total


@dataclass(frozen=True)
class SaddleConnection:
    start: int
    end: int
    segments: tuple
    start_corner: tuple
    end_corner: tuple
    crossings: tuple = field(default=())

    @property
    def displacement(self) -> Point:
        dx = sum((s.vector[0] for s in self.segments), Fraction(0))
        dy = sum((s.vector[1] for s in self.segments), Fraction(0))
        return (dx, dy)

    def pieces(self) -> list:
        out = []
        tag, k = self.start_corner
        for (etag, e) in self.crossings:
            out.append(Piece(tag, k, e))
            tag, k, _ = partner(etag, e)
        out.append(Piece(tag, k, self.end_corner[1]))
        return out

    @property
    def hvec(self) -> PolyVec:
        return pieces_class(self.pieces())

    def to_json(self) -> dict:
        return {
            "start": f"s{self.start}",
            "end": f"s{self.end}",
            "segments": [s.to_json() for s in self.segments],
        }


def _walk(tag: str, pos: Point, R: Point, max_steps: int = 100000):
    """Follow ``pos + R`` across gluings; yield segments and crossed edges."""
    segments, crossings = [], []
    for _ in range(max_steps):
        hit = _exit(tag, pos, R)
        if hit is None or hit[0] == 1:
            end = _add(pos, R)
            segments.append(Segment(tag, pos, end))
            return tag, end, segments, crossings
        s, edges = hit
        q = _add(pos, _scale(R, s))
        if len(edges) > 1 or corner_at(tag, q) is not None:
            raise HitsVertexInterior(f"path passes through corner {q} of {tag}")
        k = edges[0]
        segments.append(Segment(tag, pos, q))
        crossings.append((tag, k))
        tag, _, shift = partner(tag, k)
        pos = _add(q, shift)
        R = _scale(R, 1 - s)
    raise RuntimeError("trace did not terminate")


def candidate_corners(n: int):
    """Corners adjacent around the singular point of vertex ``n``."""
    return [(PLUS, n), (MINUS, -n - 1), (MINUS, 1 - n)]


def trace_geodesic(start, end_displacement, corner_choice=None) -> SaddleConnection:
    """Straight segment from a vertex with the given total displacement.

    ``start`` is a :class:`Vertex` or an index. The outgoing sector is the
    first of :func:`candidate_corners` whose corner cone contains the
    direction, unless ``corner_choice = (tag, k)`` names one explicitly.
    """
    n = start.index if isinstance(start, Vertex) else int(start)
    d = (as_fraction(end_displacement[0]), as_fraction(end_displacement[1]))
    if d == (0, 0):
        raise ValueError("displacement must be nonzero")
    choices = [corner_choice] if corner_choice is not None else candidate_corners(n)
    for tag, k in choices:
        if in_cone(tag, k, d):
            break
    else:
        raise ValueError(f"direction {d} leaves none of the corners {choices}")
    tag_end, end, segments, crossings = _walk(tag, corner(tag, k), d)
    k_end = corner_at(tag_end, end)
    if k_end is None:
        raise NotClosingAtSingularity(f"path ends at regular point {end} of {tag_end}")
    return SaddleConnection(
        start=singularity_of(tag, k),
        end=singularity_of(tag_end, k_end),
        segments=tuple(segments),
        start_corner=(tag, k),
        end_corner=(tag_end, k_end),
        crossings=tuple(crossings),
    )


def sigma_connection(j: int) -> SaddleConnection:
    """The boundary saddle connection sigma_j as a one-segment chain."""
    return trace_geodesic(j, _edge_vector(PLUS, j), corner_choice=(PLUS, j))


# ---------------------------------------------------------------------------
# Crossing counts


def _canonical_point(tag: str, q: Point):
    if tag == MINUS:
        k = edge_at(MINUS, q)
        if k is not None:
            other, _, shift = partner(MINUS, k)
            return (other, _add(q, shift))
    return (tag, q)


def _canonical_segment(seg: Segment) -> Segment:
    """Boundary segments of Q- are moved to their glued copy in Q+."""
    if seg.tag == MINUS:
        mid = _scale(_add(seg.start, seg.end), Fraction(1, 2))
        k = edge_at(MINUS, mid)
        if k is not None and on_boundary(MINUS, seg.start) and on_boundary(MINUS, seg.end):
            _, _, shift = partner(MINUS, k)
            return Segment(PLUS, _add(seg.start, shift), _add(seg.end, shift))
    return seg


def _segment_hits(s1: Segment, s2: Segment):
    p, r = s1.start, s1.vector
    q, u = s2.start, s2.vector
    denom = _cross(r, u)
    qp = _sub(q, p)
    if denom == 0:
        if _cross(qp, r) != 0:
            return []
        rr = r[0] * r[0] + r[1] * r[1]
        t0 = (qp[0] * r[0] + qp[1] * r[1]) / rr
        t1 = t0 + (u[0] * r[0] + u[1] * r[1]) / rr
        lo, hi = max(min(t0, t1), 0), min(max(t0, t1), 1)
        if lo < hi:
            raise NotTransverse("chains share a sub-segment")
        if lo == hi:
            return [_add(p, _scale(r, lo))]
        return []
    t = _cross(qp, u) / denom
    v = _cross(qp, r) / denom
    if 0 <= t <= 1 and 0 <= v <= 1:
        return [_add(p, _scale(r, t))]
    return []


def count_crossings(g1: SaddleConnection, g2: SaddleConnection) -> int:
    """Intersections of two chains away from the singularities."""
    points = set()
    segs1 = [_canonical_segment(s) for s in g1.segments]
    segs2 = [_canonical_segment(s) for s in g2.segments]
    for a in segs1:
        for b in segs2:
            if a.tag != b.tag:
                continue
            for q in _segment_hits(a, b):
                if corner_at(a.tag, q) is not None:
                    continue
                points.add(_canonical_point(a.tag, q))
    return len(points)


# ---------------------------------------------------------------------------
# Horizontal cylinders


@dataclass(frozen=True)
class Cylinder:
    core: PolyVec
    circumference: Fraction
    height: Fraction
    area: Fraction
    index: Optional[int] = None


def trace_closed(tag: str, pos: Point, direction: Point, max_crossings: int = 10000):
    """Follow a straight line from a point on an edge until it returns.

    Returns ``(segments, pieces, crossings)``; the line must close up at the
    starting point.
    """
    start_edge = edge_at(tag, pos)
    if start_edge is None:
        raise ValueError("closed traces start on a boundary edge")
    start = (tag, pos)
    segments, crossings = [], []
    d = (as_fraction(direction[0]), as_fraction(direction[1]))
    for _ in range(max_crossings):
        L = Fraction(1)
        while (hit := _exit(tag, pos, _scale(d, L))) is None:
            L *= 2
            if L > 2 ** 64:
                raise NotClosingAtSingularity("line escapes to infinity")
        s, edges = hit
        q = _add(pos, _scale(d, L * s))
        if len(edges) > 1 or corner_at(tag, q) is not None:
            raise HitsVertexInterior(f"line passes through corner {q}")
        segments.append(Segment(tag, pos, q))
        crossings.append((tag, edges[0]))
        tag, _, shift = partner(tag, edges[0])
        pos = _add(q, shift)
        if (tag, pos) == start:
            break
    else:
        raise NotClosingAtSingularity("line did not close up")
    pieces = []
    t, k = start[0], start_edge
    for etag, e in crossings:
        pieces.append(Piece(t, k, e))
        t, k, _ = partner(etag, e)
    return segments, pieces, crossings


def _horizontal_band(i: int, y: Fraction):
    """Trace the horizontal line at height ``y`` of Q+ from its left edge."""
    k = -i - 1
    a, b = corner(PLUS, k), corner(PLUS, k + 1)
    # left boundary edge sigma_{-i-1} descends from a to b
    x = a[0] + (y - a[1]) * (b[0] - a[0]) / (b[1] - a[1])
    return trace_closed(PLUS, (x, y), (1, 0))


def horizontal_cylinder(i: int) -> Cylinder:
    """The horizontal cylinder through heights ``(i^2, (i+1)^2)`` of Q+."""
    if i < 0:
        raise ValueError("cylinder index must be nonnegative")
    lo_y, hi_y = corner(PLUS, i)[1], corner(PLUS, i + 1)[1]
    y = (lo_y + hi_y) / 2
    segments, pieces, crossings = _horizontal_band(i, y)
    circumference = sum((s.end[0] - s.start[0] for s in segments), Fraction(0))

    # the band is the set of heights for which every crossed edge is still
    # crossed; track heights in the frame of the first polygon
    lower, upper = None, None
    offset = Fraction(0)
    for tag, k in crossings:
        ys = (corner(tag, k)[1] - offset, corner(tag, k + 1)[1] - offset)
        lo, hi = min(ys), max(ys)
        lower = lo if lower is None else max(lower, lo)
        upper = hi if upper is None else min(upper, hi)
        offset += partner(tag, k)[2][1]
    height = upper - lower

    # tracing at a second height must see the same circumference
    y2 = lower + (upper - lower) / 3
    seg2, _, _ = _horizontal_band(i, y2)
    if sum((s.end[0] - s.start[0] for s in seg2), Fraction(0)) != circumference:
        raise AssertionError("circumference varies across the band")

    return Cylinder(
        core=pieces_class(pieces),
        circumference=circumference,
        height=height,
        area=circumference * height,
        index=i,
    )


# ---------------------------------------------------------------------------
# Enumeration


def saddle_connection_label(start: int, displacement: Point, corner_choice) -> str:
    tag, k = corner_choice
    dx, dy = (as_fraction(t) for t in displacement)
    return f"v{start}[Q{tag}{k}]:{dx},{dy}"


def enumerate_saddle_connections(max_index: int, max_dx: int = 6, max_dy: int = 40):
    """Traced saddle connections from vertices ``|n| <= max_index``.

    Integer displacements with ``|dx| <= max_dx``, ``|dy| <= max_dy`` are
    tried from each sector at the vertex; those that close at a singularity
    without meeting a corner are kept. Boundary edges sigma_j are included.
    Returns ``[(label, SaddleConnection)]`` in a fixed order.
    """
    out = []
    for j in range(-max_index, max_index + 1):
        out.append((f"sigma{j}", sigma_connection(j)))
    for n in range(-max_index, max_index + 1):
        for dx in range(-max_dx, max_dx + 1):
            for dy in range(-max_dy, max_dy + 1):
                d = (Fraction(dx), Fraction(dy))
                if d == (0, 0):
                    continue
                for choice in candidate_corners(n):
                    if not in_cone(*choice, d):
                        continue
                    try:
                        g = trace_geodesic(n, d, corner_choice=choice)
                    except (HitsVertexInterior, NotClosingAtSingularity):
                        continue
                    out.append((saddle_connection_label(n, d, choice), g))
    return out
