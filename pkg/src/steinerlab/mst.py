"""Minimum spanning tree baseline and the interval the conjectured
Steiner ratio puts around it.

The spanning tree length anchors the whole workflow: any Steiner tree
worth keeping should land between sqrt(3)/2 times that length and the
length itself.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import NonPositiveLength, TooFewPoints
from .geometry import Point

STEINER_RATIO = math.sqrt(3.0) / 2.0


@dataclass(frozen=True)
class SpanningTree:
    edges: tuple[tuple[int, int], ...]
    length: float


def prim(pts: list[Point]) -> SpanningTree:
    """Minimum spanning tree under Euclidean weights.

    Grows from index 0; equal-weight alternatives resolve to the smaller
    index pair so the edge list is deterministic.
    """
    n = len(pts)
    if n < 2:
        raise TooFewPoints("a spanning tree needs at least two points")
    xy = np.array([(p.x, p.y) for p in pts])
    d = np.hypot(xy[:, None, 0] - xy[None, :, 0], xy[:, None, 1] - xy[None, :, 1])

    in_tree = np.zeros(n, dtype=bool)
    in_tree[0] = True
    best = d[0].copy()
    parent = np.zeros(n, dtype=int)
    best[0] = np.inf

    edges: list[tuple[int, int]] = []
    total = 0.0
    for _ in range(n - 1):
        j = int(np.argmin(np.where(in_tree, np.inf, best)))
        i = int(parent[j])
        edges.append((min(i, j), max(i, j)))
        total += float(d[i, j])
        in_tree[j] = True
        best[j] = np.inf
        cand = d[j]
        closer = ~in_tree & (cand < best)
        tied = ~in_tree & (cand == best) & (j < parent)
        take = closer | tied
        best[take] = cand[take]
        parent[take] = j
    return SpanningTree(edges=tuple(edges), length=total)


def gp_interval(lprim: float) -> tuple[float, float]:
    """The (sqrt(3)/2 * lprim, lprim) interval around a spanning tree length."""
    if not lprim > 0:
        raise NonPositiveLength(f"spanning tree length must be positive, got {lprim}")
    return (STEINER_RATIO * lprim, lprim)
