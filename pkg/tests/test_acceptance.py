"""Acceptance suite: one test per exit criterion, each printing a
PASS/FAIL line (run with -s to see them live).

Known red: the published-output reproduction of the ratio bound. The run
being reproduced printed 182.8525 next to a baseline shown as 211.1398,
but both are 4-decimal displays of a higher-precision value; computing
sqrt(3)/2 * 211.1398 exactly gives 182.85243055, which misses the target
window by ~2e-5. The criterion is kept verbatim rather than loosened.
"""

import itertools
import math
import subprocess
import sys

import numpy as np

from steinerlab.errors import NotConnectedYet
from steinerlab.fileio import export_tree, session_document, write_terminals
from steinerlab.fulltree import (
    Infeasible,
    SteinerTree,
    Topology,
    best_full_tree,
    fermat_point,
    melzak_construct,
    refine_oracle,
    validate_tree,
)
from steinerlab.geometry import Point, angle_at, diameter, dist, is_convex_quad
from steinerlab.hull import convex_hull
from steinerlab.mst import gp_interval, prim
from steinerlab.ordering import mksaw
from steinerlab.session import Finish, Undo, apply

import oracles

SQRT3 = math.sqrt(3.0)


def _verdict(name: str, ok: bool, note: str = "") -> bool:
    tag = "PASS" if ok else "FAIL"
    suffix = f"  ({note})" if note else ""
    print(f"ACCEPTANCE {name}: {tag}{suffix}")
    return ok


def test_gp_interval_reproduces_published_output():
    lower, _ = gp_interval(211.1398)
    gap = abs(lower - 182.8525)
    ok = _verdict("gp-interval-published-value", gap <= 5e-5, f"gap {gap:.3e}")
    assert ok, (
        f"lower(211.1398) = {lower!r}; the printed 182.8525 pairs with a "
        f"full-precision baseline that merely displays as 211.1398, so the "
        f"+/-5e-5 window around it is unreachable from the rounded input "
        f"(miss by {gap - 5e-5:.2e})"
    )


def test_mst_oracle_equivalence_200_instances():
    rng = np.random.default_rng(20260809)
    ok = True
    for _ in range(200):
        n = int(rng.integers(2, 10))
        pts = oracles.random_points(rng, n, scale=100.0)
        got = prim(pts).length
        want = oracles.exhaustive_min_spanning_length(pts)
        if abs(got - want) > 1e-9 * max(1.0, abs(want)):
            ok = False
            break
    assert _verdict("mst-oracle-equivalence", ok)


def test_convex_hull_oracle_equivalence_100_instances():
    rng = np.random.default_rng(31337)
    ok = True
    for _ in range(100):
        n = int(rng.integers(4, 41))
        pts = oracles.random_points(rng, n, scale=100.0)
        if set(convex_hull(pts)) != oracles.halfplane_hull_vertices(pts):
            ok = False
            break
    assert _verdict("convex-hull-oracle-equivalence", ok)


def test_diameter_oracle_equivalence_100_instances():
    rng = np.random.default_rng(424242)
    ok = True
    for _ in range(100):
        pts = oracles.random_points(rng, int(rng.integers(2, 60)), scale=100.0)
        if diameter(pts) != oracles.brute_diameter(pts):
            ok = False
            break
    assert _verdict("diameter-oracle-equivalence", ok)


def test_unit_square_smt():
    square = [Point(0, 0), Point(1, 0), Point(1, 1), Point(0, 1)]
    tree = best_full_tree(square)
    ok = isinstance(tree, SteinerTree)
    if ok:
        ok &= abs(tree.length - (1 + SQRT3)) <= 1e-6
        got = sorted(tree.steiner_points, key=lambda p: p.y)
        ok &= dist(got[0], Point(0.5, SQRT3 / 6)) <= 1e-6
        ok &= dist(got[1], Point(0.5, 1 - SQRT3 / 6)) <= 1e-6
        ok &= validate_tree(tree) == []
    assert _verdict("unit-square-smt", ok)


def test_fermat_correctness_500_triangles():
    rng = np.random.default_rng(555)
    ok = True
    for _ in range(500):
        a, b, c = oracles.random_triangle(rng)
        f = fermat_point(a, b, c)
        want = oracles.weiszfeld_min_length(a, b, c)
        if abs(f.length - want) > 1e-7:
            ok = False
            break
    if ok:
        for _ in range(200):
            apex = float(rng.uniform(120.1, 178.0))
            a, b, c = oracles.triangle_with_apex_angle(rng, apex)
            f = fermat_point(a, b, c)
            if f.is_steiner or (f.junction.x, f.junction.y) != (a.x, a.y):
                ok = False
                break
    assert _verdict("fermat-correctness", ok)


def test_melzak_relaxation_agreement_100_strips():
    rng = np.random.default_rng(777)
    successes = 0
    ok = True
    attempts = 0
    while successes < 100 and attempts < 400:
        attempts += 1
        n = int(rng.integers(4, 7))
        pts = oracles.random_strip(rng, n)
        topo = Topology(tuple(range(n)))
        out = melzak_construct(pts, topo)
        if not isinstance(out, SteinerTree):
            continue
        successes += 1
        relaxed = refine_oracle(pts, topo)
        if abs(out.length - relaxed.length) > 1e-6:
            ok = False
            break
        adjacency: dict = {}
        for e1, e2 in out.edges:
            adjacency.setdefault(e1, []).append(e2)
            adjacency.setdefault(e2, []).append(e1)
        for j in range(len(out.steiner_points)):
            nbrs = adjacency[("s", j)]
            for r1, r2 in itertools.combinations(nbrs, 2):
                ang = angle_at(out.resolve(("s", j)), out.resolve(r1), out.resolve(r2))
                if abs(ang - 120.0) > 0.5:
                    ok = False
    ok = ok and successes >= 100
    assert _verdict(
        "melzak-relaxation-agreement", ok, f"{successes} constructions checked"
    )


def test_mksaw_properties_1000_inputs():
    rng = np.random.default_rng(999)
    ok = True
    for trial in range(1000):
        if trial % 5 == 0:
            # synthetic square wave with random tooth sizes
            n = int(rng.integers(4, 12))
            xs = np.cumsum(rng.uniform(0.5, 1.5, size=n))
            pts = [Point(float(x), float((i % 4 in (1, 2)) * 2.0)) for i, x in enumerate(xs)]
        else:
            pts = oracles.random_points(rng, int(rng.integers(1, 12)))
        perm = mksaw(pts)
        if sorted(perm) != list(range(len(pts))):
            ok = False
            break
        reordered = [pts[i] for i in perm]
        if mksaw(reordered) != list(range(len(pts))):
            ok = False
            break
        windows_ok = True
        for i in range(len(perm) - 3):
            try:
                if is_convex_quad(*(pts[perm[i + k]] for k in range(4))):
                    windows_ok = False
            except Exception:
                continue
        if not windows_ok:
            ok = False
            break
    assert _verdict("mksaw-properties", ok)


def test_session_roundtrip_50_scripts():
    rng = np.random.default_rng(1234)
    ok = True
    for _ in range(50):
        s0, s, mutations = oracles.random_session_script(rng)
        if len(s.undo_stack) != mutations:
            ok = False
            break
        active = tuple(i for i in range(len(s.terminals)) if i not in s.omitted)
        connected = s.connection.all_connected(active)
        try:
            s_fin, _ = apply(s, Finish())
            finished = True
            s = s_fin
        except NotConnectedYet:
            finished = False
        if finished != connected:
            ok = False
            break
        doc = session_document(s)
        total = 0.0
        for sub in doc["subtrees"]:
            verts = {("t", i): doc["terminals"][i] for i in sub["terminal_indices"]}
            verts.update({("s", j): xy for j, xy in enumerate(sub["steiner_points"])})
            for (ka, ia), (kb, ib) in sub["edges"]:
                ax, ay = verts[(ka, ia)]
                bx, by = verts[(kb, ib)]
                total += math.hypot(ax - bx, ay - by)
        if abs(total - doc["ltree"]) > 1e-9 * max(1.0, total):
            ok = False
            break
        while s.undo_stack:
            s, _ = apply(s, Undo())
        if s != s0:
            ok = False
            break
    assert _verdict("session-roundtrip", ok)


def test_cli_chaining_matches_in_process():
    from steinerlab.ordering import rprim_order

    rng = np.random.default_rng(2026)
    ok = True
    for _ in range(3):
        pts = oracles.random_strip(rng, int(rng.integers(4, 8)))
        text = write_terminals(pts)
        piped = text
        for stage in ("rprim", "mksaw", "fulltree"):
            proc = subprocess.run(
                [sys.executable, "-m", "steinerlab.cli", stage, "-"],
                input=piped,
                capture_output=True,
                text=True,
            )
            if proc.returncode != 0:
                ok = False
                break
            piped = proc.stdout
        if not ok:
            break
        ordered = [pts[i] for i in rprim_order(pts)]
        sawed = [ordered[i] for i in mksaw(ordered)]
        tree = best_full_tree(sawed)
        if isinstance(tree, Infeasible) or piped != export_tree(tree):
            ok = False
            break
    assert _verdict("cli-chaining", ok)
