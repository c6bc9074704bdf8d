"""Zigzag ordering of terminal subsets.

rprim_order projects all points onto the diameter and sorts by the
projection; mksaw then rearranges until no four consecutive points form
a convex quadrilateral (the sawtooth shape full trees are built on).
"""

from __future__ import annotations

from .errors import DegeneratePoint, TooFewPoints
from .geometry import Point, diameter, is_convex_quad


def rprim_order(pts: list[Point]) -> list[int]:
    """Order indices by increasing projection onto the diameter line.

    The diameter extreme with the smaller index comes first; equal
    projections fall back to index order.
    """
    if len(pts) < 2:
        raise TooFewPoints("ordering needs at least two points")
    k, h = diameter(pts)
    origin = pts[k]
    ax = pts[h].x - origin.x
    ay = pts[h].y - origin.y

    def proj(i: int) -> float:
        return (pts[i].x - origin.x) * ax + (pts[i].y - origin.y) * ay

    return sorted(range(len(pts)), key=lambda i: (proj(i), i))


def _window_is_convex(pts: list[Point], perm: list[int], i: int) -> bool:
    a, b, c, d = (pts[perm[i + k]] for k in range(4))
    try:
        return is_convex_quad(a, b, c, d)
    except DegeneratePoint:
        # Coincident points cannot form a convex quadrilateral.
        return False


def mksaw(pts: list[Point]) -> list[int]:
    """Sawtooth rearrangement of an (ideally rprim-ordered) point list.

    Slides a 4-point window from the start; a convex window gets its
    middle pair swapped, then the window advances one step. Passes repeat
    until none swaps, which guarantees no convex window remains. Each
    swap replaces two opposite sides of a convex quadrilateral by its
    diagonals and therefore strictly lengthens the traversal polyline,
    so the iteration terminates.
    """
    perm = list(range(len(pts)))
    if len(pts) < 4:
        return perm
    changed = True
    while changed:
        changed = False
        for i in range(len(perm) - 3):
            if _window_is_convex(pts, perm, i):
                perm[i + 1], perm[i + 2] = perm[i + 2], perm[i + 1]
                changed = True
    return perm
