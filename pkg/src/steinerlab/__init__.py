"""steinerlab: a supervised workbench for Euclidean Steiner trees.

Pipeline stages are importable individually (geometry, hull, ordering,
mst, fulltree) and compose into interactive sessions (session), with file
formats (fileio), a CLI (cli) and an HTTP service (api) on top.
"""

from .geometry import DEFAULT_TOLERANCES, Point, Segment, Tolerances
from .hull import SteinerHull, build_steiner_hull
from .mst import SpanningTree, gp_interval, prim
from .fulltree import (
    Infeasible,
    SteinerTree,
    Topology,
    best_full_tree,
    enumerate_topologies,
    fermat_point,
    melzak_construct,
    refine_oracle,
    steiner_ray,
    validate_tree,
)
from .session import Session, apply, new_session, total_length

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_TOLERANCES",
    "Infeasible",
    "Point",
    "Segment",
    "Session",
    "SpanningTree",
    "SteinerHull",
    "SteinerTree",
    "Tolerances",
    "Topology",
    "apply",
    "best_full_tree",
    "build_steiner_hull",
    "enumerate_topologies",
    "fermat_point",
    "gp_interval",
    "melzak_construct",
    "new_session",
    "prim",
    "refine_oracle",
    "steiner_ray",
    "total_length",
    "validate_tree",
]
