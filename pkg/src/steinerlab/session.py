"""Supervised construction sessions.

The session loop mirrors the workflow: compute the spanning baseline and
the Steiner hull up front, then let the user connect terminal subgroups
step by step (full-tree stretches, manual junctions, straight edges) with
whole-state undo, until the connection matrix says everything is one
component. Mouse gestures live in the clients; the core speaks Actions.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, replace

from .errors import (
    DegenerateInput,
    EmptyUndoStack,
    InvalidAction,
    NotConnectedYet,
    TooFewPoints,
)
from .fulltree import (
    Infeasible,
    SteinerTree,
    best_full_tree,
    relabel_terminals,
    three_point_tree,
)
from .geometry import DEFAULT_TOLERANCES, Point, Tolerances, dist
from .hull import SteinerHull, build_steiner_hull
from .mst import SpanningTree, gp_interval, prim
from .ordering import rprim_order


class Phase(str, enum.Enum):
    DRAWING = "drawing"
    RETOUCH = "retouch"
    DONE = "done"


# --- actions ---------------------------------------------------------------


@dataclass(frozen=True)
class OmitPoints:
    indices: tuple[int, ...]


@dataclass(frozen=True)
class FullStretch:
    first: int
    last: int


@dataclass(frozen=True)
class FullTreeAll:
    pass


@dataclass(frozen=True)
class FermatJoin:
    refs: tuple[int, int, int]


@dataclass(frozen=True)
class PolygonalEdge:
    refs: tuple[int, ...]


@dataclass(frozen=True)
class Undo:
    pass


@dataclass(frozen=True)
class Finish:
    pass


Action = OmitPoints | FullStretch | FullTreeAll | FermatJoin | PolygonalEdge | Undo | Finish


# --- state -----------------------------------------------------------------


@dataclass(frozen=True)
class ConnectionMatrix:
    """Which terminals are already joined through committed structure.

    Stored as component labels; the boolean matrix view is symmetric,
    true on the diagonal and transitively closed by construction.
    """

    labels: tuple[int, ...]

    @staticmethod
    def identity(n: int) -> "ConnectionMatrix":
        return ConnectionMatrix(tuple(range(n)))

    def connected(self, i: int, j: int) -> bool:
        return self.labels[i] == self.labels[j]

    def merge(self, group: tuple[int, ...]) -> "ConnectionMatrix":
        group_labels = {self.labels[g] for g in group}
        target = min(group_labels)
        return ConnectionMatrix(
            tuple(target if lab in group_labels else lab for lab in self.labels)
        )

    def matrix(self) -> tuple[tuple[bool, ...], ...]:
        return tuple(
            tuple(self.labels[i] == self.labels[j] for j in range(len(self.labels)))
            for i in range(len(self.labels))
        )

    def components(self) -> list[tuple[int, ...]]:
        by_label: dict[int, list[int]] = {}
        for i, lab in enumerate(self.labels):
            by_label.setdefault(lab, []).append(i)
        return [tuple(v) for _, v in sorted(by_label.items())]

    def is_singleton(self, i: int) -> bool:
        return sum(1 for lab in self.labels if lab == self.labels[i]) == 1

    def all_connected(self, subset: tuple[int, ...]) -> bool:
        if not subset:
            return True
        first = self.labels[subset[0]]
        return all(self.labels[i] == first for i in subset)


@dataclass(frozen=True)
class CommittedSubtree:
    kind: str  # "full" | "fermat" | "polygonal"
    tree: SteinerTree  # terminal refs in global numbering
    members: tuple[int, ...]
    endpoints: tuple[int, ...]  # kept on the residual hull outline


@dataclass(frozen=True)
class Report:
    """What one action did, plus the standing length bookkeeping."""

    action: str
    committed: bool
    rejected: str | None
    lprim: float
    gp_lower: float
    gp_upper: float
    ltree: float
    phase: str
    residual_hull: tuple[int, ...]
    messages: tuple[str, ...] = ()
    subtree_length: float | None = None


@dataclass(frozen=True)
class Session:
    terminals: tuple[Point, ...]
    tolerances: Tolerances
    prim_tree: SpanningTree
    hull: SteinerHull | None
    connection: ConnectionMatrix
    committed: tuple[CommittedSubtree, ...] = ()
    omitted: frozenset[int] = frozenset()
    consumed: frozenset[int] = frozenset()
    undo_stack: tuple["Session", ...] = ()
    phase: Phase = Phase.DRAWING

    @property
    def hull_degenerate(self) -> bool:
        return self.hull is None


def new_session(pts: list[Point], tol: Tolerances = DEFAULT_TOLERANCES) -> Session:
    """Start a session: spanning baseline, Steiner hull (when the points
    admit one) and an empty connection matrix."""
    if len(pts) < 2:
        raise TooFewPoints("a session needs at least two terminals")
    tree = prim(pts)
    try:
        hull = build_steiner_hull(pts)
    except (TooFewPoints, DegenerateInput):
        hull = None
    return Session(
        terminals=tuple(pts),
        tolerances=tol,
        prim_tree=tree,
        hull=hull,
        connection=ConnectionMatrix.identity(len(pts)),
    )


def total_length(session: Session) -> float:
    """Sum of all committed edge lengths."""
    return sum(sub.tree.length for sub in session.committed)


def residual_hull(session: Session) -> tuple[int, ...]:
    """Hull outline with the interiors of committed stretches removed;
    stretch endpoints stay so the remaining polygon closes up (the dotted
    leftover polygon shown after each commit)."""
    if session.hull is None:
        return ()
    return tuple(v for v in session.hull.vertex_indices if v not in session.consumed)


def make_report(
    session: Session,
    action: str,
    committed: bool = False,
    rejected: str | None = None,
    messages: tuple[str, ...] = (),
    subtree_length: float | None = None,
) -> Report:
    lprim = session.prim_tree.length
    lo, hi = gp_interval(lprim)
    return Report(
        action=action,
        committed=committed,
        rejected=rejected,
        lprim=lprim,
        gp_lower=lo,
        gp_upper=hi,
        ltree=total_length(session),
        phase=session.phase.value,
        residual_hull=residual_hull(session),
        messages=messages,
        subtree_length=subtree_length,
    )


# --- the state machine ------------------------------------------------------


def apply(session: Session, action: Action) -> tuple[Session, Report]:
    """Apply one action, returning the new state and a report.

    Mutating actions push exactly one snapshot on the undo stack.
    Rejected stretches leave the state untouched (the report says why),
    matching the redo-your-choice loop of the workflow.
    """
    if isinstance(action, OmitPoints):
        return _omit(session, action)
    if isinstance(action, FullStretch):
        return _full_stretch(session, action)
    if isinstance(action, FullTreeAll):
        return _full_tree_all(session)
    if isinstance(action, FermatJoin):
        return _fermat_join(session, action)
    if isinstance(action, PolygonalEdge):
        return _polygonal(session, action)
    if isinstance(action, Undo):
        return _undo(session)
    if isinstance(action, Finish):
        return _finish(session)
    raise InvalidAction(f"unknown action {action!r}")


def _require_phase(session: Session, action: str, *phases: Phase) -> None:
    if session.phase not in phases:
        raise InvalidAction(f"{action} is not available in phase {session.phase.value}")


def _check_indices(session: Session, indices: tuple[int, ...], action: str) -> None:
    n = len(session.terminals)
    for i in indices:
        if not 0 <= i < n:
            raise InvalidAction(f"{action}: terminal index {i} out of range")


def _push(session: Session) -> tuple["Session", ...]:
    return session.undo_stack + (session,)


def _omit(session: Session, action: OmitPoints) -> tuple[Session, Report]:
    _require_phase(session, "OmitPoints", Phase.DRAWING)
    _check_indices(session, action.indices, "OmitPoints")
    if not action.indices:
        raise InvalidAction("OmitPoints: no indices given")
    new = replace(
        session,
        omitted=session.omitted | set(action.indices),
        undo_stack=_push(session),
    )
    listed = ", ".join(str(i) for i in sorted(set(action.indices)))
    return new, make_report(new, "OmitPoints", messages=(f"omitted terminals {listed}",))


def _hull_run(session: Session, first: int, last: int) -> list[int]:
    assert session.hull is not None
    cycle = session.hull.vertex_indices
    if first not in cycle or last not in cycle:
        raise InvalidAction("FullStretch endpoints must be hull vertices")
    start = cycle.index(first)
    run = [cycle[start]]
    pos = start
    while cycle[pos] != last:
        pos = (pos + 1) % len(cycle)
        run.append(cycle[pos])
        if pos == start:
            raise InvalidAction("FullStretch walked the whole hull without finding the endpoint")
    return run


def _commit_tree(
    session: Session,
    action_name: str,
    kind: str,
    tree: SteinerTree,
    members: tuple[int, ...],
    endpoints: tuple[int, ...],
    consume: bool,
    next_phase: Phase | None = None,
) -> tuple[Session, Report]:
    sub = CommittedSubtree(kind=kind, tree=tree, members=members, endpoints=endpoints)
    consumed = session.consumed
    if consume:
        consumed = consumed | (set(members) - set(endpoints))
    new = replace(
        session,
        committed=session.committed + (sub,),
        connection=session.connection.merge(members),
        consumed=consumed,
        undo_stack=_push(session),
        phase=next_phase or session.phase,
    )
    msgs = (f"committed {kind} subtree over {len(members)} terminals",)
    return new, make_report(
        new, action_name, committed=True, messages=msgs, subtree_length=tree.length
    )


def _full_stretch(session: Session, action: FullStretch) -> tuple[Session, Report]:
    _require_phase(session, "FullStretch", Phase.DRAWING)
    if session.hull is None:
        raise InvalidAction("FullStretch needs a hull; this terminal set has none")
    _check_indices(session, (action.first, action.last), "FullStretch")
    run = [i for i in _hull_run(session, action.first, action.last) if i not in session.omitted]
    if len(run) < 3:
        return session, make_report(
            session, "FullStretch", rejected="TooFewInStretch",
            messages=("a stretch needs at least three non-omitted terminals",),
        )
    pts = [session.terminals[i] for i in run]
    out = best_full_tree(pts, session.tolerances)
    if isinstance(out, Infeasible):
        return session, make_report(
            session, "FullStretch", rejected=f"InfeasibleStretch: {out.reason}",
            messages=("choose another subgroup and retry",),
        )
    tree = relabel_terminals(out, {k: run[k] for k in range(len(run))})
    return _commit_tree(
        session, "FullStretch", "full", tree,
        members=tuple(run), endpoints=(action.first, action.last), consume=True,
    )


def _full_tree_all(session: Session) -> tuple[Session, Report]:
    _require_phase(session, "FullTreeAll", Phase.DRAWING)
    group = [
        i
        for i in range(len(session.terminals))
        if i not in session.omitted and session.connection.is_singleton(i)
    ]
    if len(group) < 3:
        return session, make_report(
            session, "FullTreeAll", rejected="TooFewUnconnected",
            messages=("fewer than three unconnected terminals remain",),
        )
    pts = [session.terminals[i] for i in group]
    order = rprim_order(pts)
    ordered_ids = [group[k] for k in order]
    ordered_pts = [session.terminals[i] for i in ordered_ids]
    out = best_full_tree(ordered_pts, session.tolerances)
    if isinstance(out, Infeasible):
        return session, make_report(
            session, "FullTreeAll", rejected=f"InfeasibleStretch: {out.reason}",
            messages=("omit some terminals or connect manually",),
        )
    tree = relabel_terminals(out, {k: ordered_ids[k] for k in range(len(ordered_ids))})
    return _commit_tree(
        session, "FullTreeAll", "full", tree,
        members=tuple(ordered_ids), endpoints=(ordered_ids[0], ordered_ids[-1]), consume=True,
    )


def _fermat_join(session: Session, action: FermatJoin) -> tuple[Session, Report]:
    _require_phase(session, "FermatJoin", Phase.DRAWING, Phase.RETOUCH)
    refs = tuple(action.refs)
    if len(refs) != 3 or len(set(refs)) != 3:
        raise InvalidAction("FermatJoin needs exactly three distinct terminals")
    _check_indices(session, refs, "FermatJoin")
    if session.connection.all_connected(refs):
        return session, make_report(
            session, "FermatJoin", rejected="RedundantConnection",
            messages=("those terminals are already connected",),
        )
    tree = three_point_tree(list(session.terminals), refs, session.tolerances)
    return _commit_tree(
        session, "FermatJoin", "fermat", tree,
        members=refs, endpoints=refs, consume=False, next_phase=Phase.RETOUCH,
    )


def _polygonal(session: Session, action: PolygonalEdge) -> tuple[Session, Report]:
    _require_phase(session, "PolygonalEdge", Phase.DRAWING, Phase.RETOUCH)
    refs = tuple(action.refs)
    if len(refs) < 2:
        raise InvalidAction("PolygonalEdge needs at least two terminals")
    if len(set(refs)) != len(refs):
        raise InvalidAction("PolygonalEdge path must not repeat a terminal")
    _check_indices(session, refs, "PolygonalEdge")
    if session.connection.all_connected(refs):
        return session, make_report(
            session, "PolygonalEdge", rejected="RedundantConnection",
            messages=("those terminals are already connected",),
        )
    pts = session.terminals
    edges = tuple((("t", a), ("t", b)) for a, b in zip(refs, refs[1:]))
    length = sum(dist(pts[a], pts[b]) for a, b in zip(refs, refs[1:]))
    tree = SteinerTree(
        terminal_indices=refs,
        terminals=tuple(pts[i] for i in refs),
        steiner_points=(),
        edges=edges,
        length=length,
        valid=True,
    )
    return _commit_tree(
        session, "PolygonalEdge", "polygonal", tree,
        members=refs, endpoints=refs, consume=False, next_phase=Phase.RETOUCH,
    )


def _undo(session: Session) -> tuple[Session, Report]:
    if not session.undo_stack:
        raise EmptyUndoStack("nothing to undo")
    prior = session.undo_stack[-1]
    return prior, make_report(prior, "Undo", messages=("restored previous state",))


def _finish(session: Session) -> tuple[Session, Report]:
    _require_phase(session, "Finish", Phase.DRAWING, Phase.RETOUCH)
    active = tuple(i for i in range(len(session.terminals)) if i not in session.omitted)
    if not session.connection.all_connected(active):
        raise NotConnectedYet("some non-omitted terminals are still unconnected")
    new = replace(session, phase=Phase.DONE, undo_stack=_push(session))
    ltree = total_length(new)
    lprim = new.prim_tree.length
    lo, _ = gp_interval(lprim)
    msgs = [f"Ltree = {ltree:.4f}", f"Lprim = {lprim:.4f}"]
    if ltree > lprim:
        msgs.append("the tree is longer than the spanning baseline; consider undoing")
    if ltree < lo:
        msgs.append("length beat the conjectured lower bound; double-check the drawing")
    return new, make_report(new, "Finish", committed=False, messages=tuple(msgs))
