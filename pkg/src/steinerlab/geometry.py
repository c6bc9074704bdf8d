"""Planar primitives: distances, angles, cross-product signs, diameter,
and the quadrilateral convexity test.

Vectors are treated as complex numbers where that shortens the math: the
sign test for convexity uses Im(v1 * conj(v0)), which equals the z
component of the vector product v0 x v1.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegeneratePoint, TooFewPoints


@dataclass(frozen=True)
class Point:
    """A point in the plane with finite coordinates."""

    x: float
    y: float

    def __post_init__(self):
        # Coerce so integer inputs serialize identically to float ones.
        object.__setattr__(self, "x", float(self.x))
        object.__setattr__(self, "y", float(self.y))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite coordinates ({self.x}, {self.y})")

    def as_complex(self) -> complex:
        return complex(self.x, self.y)

    @staticmethod
    def from_complex(z: complex) -> "Point":
        return Point(z.real, z.imag)

    def __sub__(self, other: "Point") -> "Point":
        # Point difference used as a free vector.
        return Point(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class Segment:
    a: Point
    b: Point

    def __post_init__(self):
        if dist(self.a, self.b) < 1e-9:
            raise DegeneratePoint(f"segment endpoints coincide: {self.a}")

    @property
    def length(self) -> float:
        return dist(self.a, self.b)


@dataclass(frozen=True)
class Tolerances:
    """Numeric tolerances used throughout the pipeline.

    angle_tol_deg: allowed deviation from the 120 degree junction angles.
    eps_pt: below this distance two points count as coincident.
    eps_conv: stop threshold for the iterative relaxation.
    """

    angle_tol_deg: float = 2.0
    eps_pt: float = 1e-9
    eps_conv: float = 1e-10

    def __post_init__(self):
        if not (self.angle_tol_deg > 0 and self.eps_pt > 0 and self.eps_conv > 0):
            raise ValueError("tolerances must be strictly positive")
        if self.angle_tol_deg >= 30:
            raise ValueError("angle tolerance must stay below 30 degrees")


DEFAULT_TOLERANCES = Tolerances()


def dist(p: Point, q: Point) -> float:
    """Euclidean distance between two points."""
    return math.hypot(p.x - q.x, p.y - q.y)


def cross_sign(v0: Point, v1: Point) -> float:
    """Im(v1 * conj(v0)) for the vectors read as complex numbers.

    Equals the z component of v0 x v1: positive when v1 lies
    counterclockwise of v0.
    """
    return v0.x * v1.y - v0.y * v1.x


def angle_at(vertex: Point, p: Point, q: Point, eps_pt: float = 1e-9) -> float:
    """Interior angle p-vertex-q in degrees, in [0, 180]."""
    u = p - vertex
    v = q - vertex
    nu = math.hypot(u.x, u.y)
    nv = math.hypot(v.x, v.y)
    if nu < eps_pt or nv < eps_pt:
        raise DegeneratePoint(f"angle leg shorter than {eps_pt}")
    cross = u.x * v.y - u.y * v.x
    dot = u.x * v.x + u.y * v.y
    return math.degrees(math.atan2(abs(cross), dot))


def diameter(pts: list[Point]) -> tuple[int, int]:
    """Indices of a pair of points at maximum distance.

    Ties are broken by the lexicographically smallest index pair (i, j)
    with i < j, so the result is deterministic.
    """
    n = len(pts)
    if n < 2:
        raise TooFewPoints("diameter needs at least two points")
    xy = np.array([(p.x, p.y) for p in pts])
    d2 = np.sum((xy[:, None, :] - xy[None, :, :]) ** 2, axis=-1)
    iu = np.triu_indices(n, k=1)
    upper = d2[iu]
    best = upper.max()
    # np.argmax returns the first maximum; triu_indices enumerates pairs
    # in lexicographic (i, j) order, which is exactly the tie-break.
    k = int(np.argmax(upper == best))
    return int(iu[0][k]), int(iu[1][k])


def is_convex_quad(
    p1: Point, p2: Point, p3: Point, p4: Point, eps_pt: float = 1e-9
) -> bool:
    """Whether the quadrilateral p1 p2 p3 p4 (vertices in traversal order)
    is strictly convex.

    Fans the vertices from p1 and from p4 and requires the middle spoke to
    lie strictly between its neighbours on both ends; any collinear triple
    (a zero cross product) counts as non-convex.
    """
    corners = (p1, p2, p3, p4)
    for i in range(4):
        for j in range(i + 1, 4):
            if dist(corners[i], corners[j]) < eps_pt:
                raise DegeneratePoint("coincident quadrilateral vertices")
    vec0, vec1, vec2 = p2 - p1, p3 - p1, p4 - p1
    w0, w1, w2 = p1 - p4, p2 - p4, p3 - p4
    front = cross_sign(vec0, vec1) * cross_sign(vec2, vec1)
    back = cross_sign(w0, w1) * cross_sign(w2, w1)
    return front < 0.0 and back < 0.0
