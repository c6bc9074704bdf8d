"""Steiner hull: convex hull refined by the lune property, plus the 0/1
marker string over the hull vertices.

A '0' marks an interior polygon angle greater than 120 degrees, a '1'
an angle of at most 120 degrees. Runs of '1' bounded by '0's are the
stretches a full Steiner subtree is usually built on.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DegenerateInput, TooFewPoints
from .geometry import Point, angle_at, cross_sign, dist

# Absorbs one-ulp noise so that an exactly-120-degree vertex reliably
# marks '1'; unrelated to the (much larger) junction angle tolerance.
_MARKER_EPS_DEG = 1e-9


@dataclass(frozen=True)
class SteinerHull:
    """Closed polygon of terminal indices with its angle marker string.

    vertex_indices walk the polygon counterclockwise; interior_indices
    are the terminals strictly inside it.
    """

    vertex_indices: tuple[int, ...]
    interior_indices: tuple[int, ...]
    markers: str

    def __post_init__(self):
        if len(self.markers) != len(self.vertex_indices):
            raise ValueError("one marker per hull vertex required")


def convex_hull(pts: list[Point]) -> list[int]:
    """Counterclockwise convex hull as indices into pts.

    Collinear points on hull edges are excluded. Raises DegenerateInput
    when all points are collinear.
    """
    if len(pts) < 3:
        raise TooFewPoints("convex hull needs at least three points")
    order = sorted(range(len(pts)), key=lambda i: (pts[i].x, pts[i].y, i))

    def turn(i: int, j: int, k: int) -> float:
        return cross_sign(pts[j] - pts[i], pts[k] - pts[i])

    lower: list[int] = []
    for i in order:
        while len(lower) >= 2 and turn(lower[-2], lower[-1], i) <= 0:
            lower.pop()
        lower.append(i)
    upper: list[int] = []
    for i in reversed(order):
        while len(upper) >= 2 and turn(upper[-2], upper[-1], i) <= 0:
            upper.pop()
        upper.append(i)
    hull = lower[:-1] + upper[:-1]
    if len(hull) < 3:
        raise DegenerateInput("all points collinear")
    return hull


def _segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Proper interior crossing; touching at an endpoint does not count."""
    d1 = cross_sign(d - c, a - c)
    d2 = cross_sign(d - c, b - c)
    d3 = cross_sign(b - a, c - a)
    d4 = cross_sign(b - a, d - a)
    return d1 * d2 < 0 and d3 * d4 < 0


def _insertion_keeps_simple(pts: list[Point], poly: list[int], e: int, r_i: int) -> bool:
    """Whether replacing edge e by the two edges through r_i leaves the
    polygon free of proper crossings."""
    m = len(poly)
    p, q, r = pts[poly[e]], pts[poly[(e + 1) % m]], pts[r_i]
    for k in range(m):
        if k == e:
            continue
        a, b = pts[poly[k]], pts[poly[(k + 1) % m]]
        if _segments_cross(p, r, a, b) or _segments_cross(r, q, a, b):
            return False
    return True


def lune_refine(pts: list[Point], hull: list[int]) -> list[int]:
    """Refine a polygon by the lune property until a fixed point.

    For an edge (P, Q), the lune is the intersection of the two open
    disks of radius |PQ| centered at P and Q. While some terminal R off
    the polygon lies in an edge's lune, that edge is replaced by
    (P, R), (R, Q); among candidates the one with the smallest detour
    dist(P, R) + dist(R, Q) wins, skipping any whose insertion would make
    the polygon self-intersect (dense interiors can bait the closest
    candidate across the far boundary). Each replacement consumes one
    off-polygon terminal, so the loop terminates.
    """
    poly = list(hull)
    changed = True
    while changed:
        changed = False
        on_poly = set(poly)
        for e in range(len(poly)):
            p_i = poly[e]
            q_i = poly[(e + 1) % len(poly)]
            p, q = pts[p_i], pts[q_i]
            d_pq = dist(p, q)
            candidates: list[tuple[float, int]] = []
            for r_i in range(len(pts)):
                if r_i in on_poly:
                    continue
                r = pts[r_i]
                if dist(r, p) < d_pq and dist(r, q) < d_pq:
                    candidates.append((dist(p, r) + dist(r, q), r_i))
            for _, r_i in sorted(candidates):
                if _insertion_keeps_simple(pts, poly, e, r_i):
                    poly.insert(e + 1, r_i)
                    changed = True
                    break
            if changed:
                break
    return poly


def mark_angles(pts: list[Point], hull_vertices: list[int]) -> str:
    """Marker string over the polygon vertices: '0' for an interior angle
    above 120 degrees, '1' for at most 120 degrees.

    Handles reflex vertices of non-convex (lune-refined) polygons by
    orienting the polygon from its signed area.
    """
    m = len(hull_vertices)
    if m < 3:
        raise TooFewPoints("marking needs a polygon with at least 3 vertices")
    area2 = 0.0
    for i in range(m):
        a = pts[hull_vertices[i]]
        b = pts[hull_vertices[(i + 1) % m]]
        area2 += a.x * b.y - a.y * b.x
    orient = 1.0 if area2 >= 0 else -1.0

    markers = []
    for i in range(m):
        prev = pts[hull_vertices[(i - 1) % m]]
        cur = pts[hull_vertices[i]]
        nxt = pts[hull_vertices[(i + 1) % m]]
        base = angle_at(cur, prev, nxt)
        turn = cross_sign(cur - prev, nxt - cur) * orient
        interior = base if turn > 0 else 360.0 - base
        markers.append("0" if interior > 120.0 + _MARKER_EPS_DEG else "1")
    return "".join(markers)


def build_steiner_hull(pts: list[Point]) -> SteinerHull:
    """Convex hull, lune refinement and angle marking in one step."""
    poly = lune_refine(pts, convex_hull(pts))
    on_poly = set(poly)
    interior = tuple(i for i in range(len(pts)) if i not in on_poly)
    return SteinerHull(
        vertex_indices=tuple(poly),
        interior_indices=interior,
        markers=mark_angles(pts, poly),
    )
