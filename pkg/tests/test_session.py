"""Tests for the supervised session state machine."""

import math

import numpy as np
import pytest

from steinerlab.errors import (
    EmptyUndoStack,
    InvalidAction,
    NotConnectedYet,
    TooFewPoints,
)
from steinerlab.fulltree import validate_tree
from steinerlab.geometry import Point, dist
from steinerlab.session import (
    FermatJoin,
    Finish,
    FullStretch,
    FullTreeAll,
    OmitPoints,
    Phase,
    PolygonalEdge,
    Undo,
    apply,
    new_session,
    residual_hull,
    total_length,
)

import oracles

SQRT3 = math.sqrt(3.0)
SQUARE = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]
EQUILATERAL = [Point(0, 0), Point(1, 0), Point(0.5, SQRT3 / 2)]


# --- new_session -----------------------------------------------------------------


def test_new_session_two_points_degenerate_hull():
    s = new_session([Point(0, 0), Point(3, 4)])
    assert s.prim_tree.edges == ((0, 1),)
    assert s.prim_tree.length == 5.0
    assert s.hull is None and s.hull_degenerate


def test_new_session_collinear_terminals_degenerate_hull():
    s = new_session([Point(0, 0), Point(1, 1), Point(2, 2)])
    assert s.hull is None and s.hull_degenerate
    with pytest.raises(InvalidAction):
        apply(s, FullStretch(0, 2))
    # polygonal connections still work without a hull
    s2, _ = apply(s, PolygonalEdge((0, 1)))
    s3, _ = apply(s2, PolygonalEdge((1, 2)))
    s4, rep = apply(s3, Finish())
    assert rep.ltree == pytest.approx(2 * math.sqrt(2), rel=1e-12)


def test_new_session_square_plus_center():
    s = new_session(SQUARE + [Point(0.5, 0.5)])
    assert s.hull is not None
    assert 4 in s.hull.vertex_indices  # lune refinement pulls the center in
    assert s.prim_tree.length > 0


def test_new_session_gp_lower_definition():
    rng = np.random.default_rng(131)
    pts = oracles.random_points(rng, 9)
    s = new_session(pts)
    from steinerlab.mst import gp_interval

    lo, hi = gp_interval(s.prim_tree.length)
    assert lo / s.prim_tree.length == pytest.approx(SQRT3 / 2, rel=1e-9)
    assert hi == s.prim_tree.length


def test_new_session_too_few():
    with pytest.raises(TooFewPoints):
        new_session([Point(0, 0)])


# --- individual actions -------------------------------------------------------------


def test_fermat_join_equilateral():
    s = new_session(EQUILATERAL)
    s2, rep = apply(s, FermatJoin((0, 1, 2)))
    assert rep.committed
    assert rep.subtree_length == pytest.approx(SQRT3, abs=1e-9)
    assert s2.phase is Phase.RETOUCH
    assert total_length(s2) == pytest.approx(SQRT3, abs=1e-9)


def test_undo_restores_exact_prior_state():
    s = new_session(SQUARE)
    s2, _ = apply(s, FullStretch(0, 3))
    s3, rep = apply(s2, Undo())
    assert s3 == s
    assert "restored previous state" in rep.messages


def test_undo_empty_raises():
    s = new_session(SQUARE)
    with pytest.raises(EmptyUndoStack):
        apply(s, Undo())


def test_full_stretch_square_then_finish():
    s = new_session(SQUARE)
    s2, rep = apply(s, FullStretch(0, 3))
    assert rep.committed
    assert rep.subtree_length == pytest.approx(1 + SQRT3, abs=1e-6)
    s3, rep2 = apply(s2, Finish())
    assert s3.phase is Phase.DONE
    assert rep2.ltree == pytest.approx(1 + SQRT3, abs=1e-6)
    assert rep2.lprim == pytest.approx(3.0)
    # shorter than the baseline: no length warning in the messages
    assert not any("longer" in m for m in rep2.messages)


def test_finish_warns_when_tree_longer_than_baseline():
    s = new_session(SQUARE)
    s2, _ = apply(s, PolygonalEdge((0, 2)))  # diagonal
    s3, _ = apply(s2, PolygonalEdge((1, 3)))  # other diagonal
    s4, _ = apply(s3, PolygonalEdge((0, 1)))
    s5, rep = apply(s4, Finish())
    assert rep.ltree == pytest.approx(2 * math.sqrt(2) + 1, rel=1e-12)
    assert any("longer" in m for m in rep.messages)


def test_finish_requires_connectivity():
    s = new_session(SQUARE)
    with pytest.raises(NotConnectedYet):
        apply(s, Finish())


def test_omit_order_insensitive():
    pts = SQUARE + [Point(5.0, 5.0), Point(6.0, 1.0)]
    a, _ = apply(new_session(pts), OmitPoints((4, 5)))
    b, _ = apply(new_session(pts), OmitPoints((5, 4)))
    assert a == b


def test_omit_points_then_full_tree_all():
    pts = SQUARE + [Point(5.0, 5.0)]
    s = new_session(pts)
    s2, rep = apply(s, OmitPoints((4,)))
    assert "omitted terminals 4" in rep.messages[0]
    s3, rep2 = apply(s2, FullTreeAll())
    assert rep2.committed
    assert rep2.subtree_length == pytest.approx(1 + SQRT3, abs=1e-6)
    # omitted terminal is exempt from the connectivity requirement
    s4, rep3 = apply(s3, Finish())
    assert s4.phase is Phase.DONE


def test_polygonal_edge_connects_left_out_terminal():
    pts = SQUARE + [Point(2.0, 0.5)]
    s = new_session(pts)
    s2, _ = apply(s, OmitPoints((4,)))
    s3, _ = apply(s2, FullTreeAll())
    s4, rep = apply(s3, PolygonalEdge((1, 4)))
    assert rep.committed
    assert rep.subtree_length == pytest.approx(dist(pts[1], pts[4]), rel=1e-12)
    s5, rep2 = apply(s4, Finish())
    assert rep2.ltree == pytest.approx(1 + SQRT3 + dist(pts[1], pts[4]), abs=1e-6)


def test_stretch_actions_invalid_in_retouch_phase():
    s = new_session(SQUARE + [Point(2.0, 0.5)])
    s2, _ = apply(s, PolygonalEdge((0, 4)))
    assert s2.phase is Phase.RETOUCH
    with pytest.raises(InvalidAction):
        apply(s2, FullStretch(0, 3))
    with pytest.raises(InvalidAction):
        apply(s2, OmitPoints((1,)))


def test_rejected_stretch_changes_nothing():
    pts = [Point(0, 0), Point(1, 0.001), Point(2, -0.001), Point(3, 0.0005), Point(1.5, 3.0)]
    s = new_session(pts)
    # stretch over the nearly collinear bottom run: no full tree exists
    first, last = 0, 3
    if s.hull is not None and first in s.hull.vertex_indices and last in s.hull.vertex_indices:
        s2, rep = apply(s, FullStretch(first, last))
        if rep.rejected is not None:
            assert s2 == s
            assert len(s2.undo_stack) == 0


def test_fermat_join_redundant_rejected():
    s = new_session(EQUILATERAL)
    s2, rep = apply(s, FermatJoin((0, 1, 2)))
    s3, rep2 = apply(s2, FermatJoin((0, 1, 2)))
    assert rep2.rejected == "RedundantConnection"
    assert s3 == s2


def test_invalid_payloads():
    s = new_session(SQUARE)
    with pytest.raises(InvalidAction):
        apply(s, FermatJoin((0, 1, 1)))
    with pytest.raises(InvalidAction):
        apply(s, PolygonalEdge((2,)))
    with pytest.raises(InvalidAction):
        apply(s, OmitPoints((9,)))
    with pytest.raises(InvalidAction):
        apply(s, FullStretch(0, 99))


# --- bookkeeping invariants ------------------------------------------------------------


def test_total_length_accumulates():
    s = new_session(SQUARE)
    assert total_length(s) == 0.0
    s2, _ = apply(s, PolygonalEdge((0, 1)))
    assert total_length(s2) == pytest.approx(1.0)
    s3, _ = apply(s2, PolygonalEdge((1, 2)))
    assert total_length(s3) == pytest.approx(2.0)


def test_undo_stack_one_entry_per_mutation():
    s = new_session(SQUARE + [Point(2.0, 0.5)])
    s2, _ = apply(s, OmitPoints((4,)))
    assert len(s2.undo_stack) == 1
    s3, _ = apply(s2, FullTreeAll())
    assert len(s3.undo_stack) == 2
    s4, _ = apply(s3, PolygonalEdge((1, 4)))
    assert len(s4.undo_stack) == 3
    s5, _ = apply(s4, Finish())
    assert len(s5.undo_stack) == 4


def test_residual_hull_drops_stretch_interior():
    s = new_session(SQUARE)
    assert residual_hull(s) == s.hull.vertex_indices
    s2, rep = apply(s, FullStretch(0, 3))
    res = rep.residual_hull
    assert 0 in res and 3 in res
    assert 1 not in res and 2 not in res


def test_committed_full_subtrees_validate_clean():
    rng = np.random.default_rng(137)
    pts = oracles.random_strip(rng, 6)
    s = new_session(pts)
    s2, rep = apply(s, FullTreeAll())
    if rep.committed:
        for sub in s2.committed:
            if sub.kind == "full":
                assert validate_tree(sub.tree, s2.tolerances) == []


def test_connection_matrix_views():
    s = new_session(SQUARE)
    m = s.connection.matrix()
    assert all(m[i][i] for i in range(4))
    assert all(m[i][j] == m[j][i] for i in range(4) for j in range(4))
    s2, _ = apply(s, PolygonalEdge((0, 2)))
    m2 = s2.connection.matrix()
    assert m2[0][2] and m2[2][0]
    assert not m2[0][1]
    assert s2.connection.components() == [(0, 2), (1,), (3,)]


# --- random action scripts --------------------------------------------------------------


def test_random_scripts_roundtrip_and_finish_semantics():
    rng = np.random.default_rng(139)
    for _ in range(15):
        s0, s, mutations = oracles.random_session_script(rng)
        assert len(s.undo_stack) == mutations
        # finish succeeds exactly when the non-omitted set is one component
        active = tuple(i for i in range(len(s.terminals)) if i not in s.omitted)
        connected = s.connection.all_connected(active)
        if s.phase is not Phase.DONE:
            if connected:
                s, rep = apply(s, Finish())
                assert s.phase is Phase.DONE
            else:
                with pytest.raises(NotConnectedYet):
                    apply(s, Finish())
        # undo everything back to the fresh session
        while s.undo_stack:
            s, _ = apply(s, Undo())
        assert s == s0
