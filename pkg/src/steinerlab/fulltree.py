"""Full Steiner subtree construction.

A full tree on n terminals has n-2 junctions of degree three whose edges
meet at 120 degrees. Candidate topologies are caterpillars induced by the
zigzag order (junctions on a path, each touching at least one terminal).
Each candidate is solved by the classical merge/unmerge construction:
terminal pairs collapse into equilateral-triangle apexes, the final three
points are joined through their Fermat point, and the junctions are then
recovered as circle/segment intersections. An iterative relaxation serves
as an independent numeric check and as a fallback for borderline cases.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, replace

from .errors import DegenerateDirection, DegeneratePoint, NoConvergence, TooFewPoints
from .geometry import DEFAULT_TOLERANCES, Point, Tolerances, angle_at, dist
from .ordering import mksaw

VertexRef = tuple[str, int]  # ("t", terminal id) or ("s", junction index)

_CIS60 = complex(0.5, math.sqrt(3.0) / 2.0)
_CIS_NEG60 = complex(0.5, -math.sqrt(3.0) / 2.0)


@dataclass(frozen=True)
class SteinerTree:
    """A (partial or full) Steiner tree over a terminal subgroup.

    Edge endpoints are ("t", terminal id) or ("s", junction index);
    terminal ids follow the caller's indexing and map to coordinates via
    terminal_indices/terminals, so the record is self-contained.
    """

    terminal_indices: tuple[int, ...]
    terminals: tuple[Point, ...]
    steiner_points: tuple[Point, ...]
    edges: tuple[tuple[VertexRef, VertexRef], ...]
    length: float
    valid: bool

    def resolve(self, ref: VertexRef) -> Point:
        kind, idx = ref
        if kind == "s":
            return self.steiner_points[idx]
        return self.terminals[self.terminal_indices.index(idx)]

    def recomputed_length(self) -> float:
        return sum(dist(self.resolve(a), self.resolve(b)) for a, b in self.edges)


@dataclass(frozen=True)
class Infeasible:
    """Normal outcome when a topology admits no valid full tree."""

    reason: str
    borderline: bool = False


@dataclass(frozen=True)
class Violation:
    kind: str
    at: VertexRef
    value: float | None = None
    detail: str = ""


@dataclass(frozen=True)
class FermatResult:
    junction: Point
    length: float
    is_steiner: bool


@dataclass(frozen=True)
class Topology:
    """Caterpillar full-tree topology given by its terminal order along
    the junction path. The two first and two last terminals hang off the
    path ends; every other terminal feeds one inner junction."""

    leaf_order: tuple[int, ...]

    def __post_init__(self):
        if len(self.leaf_order) < 3:
            raise TooFewPoints("a full-tree topology needs at least 3 terminals")
        if len(set(self.leaf_order)) != len(self.leaf_order):
            raise ValueError("duplicate terminal in topology")

    @property
    def steiner_count(self) -> int:
        return len(self.leaf_order) - 2

    def steiner_neighbors(self) -> list[list[VertexRef]]:
        ids = self.leaf_order
        n = len(ids)
        if n == 3:
            return [[("t", ids[0]), ("t", ids[1]), ("t", ids[2])]]
        s = n - 2
        nbrs: list[list[VertexRef]] = []
        for j in range(s):
            row: list[VertexRef] = []
            if j == 0:
                row = [("t", ids[0]), ("t", ids[1]), ("s", 1)]
            elif j == s - 1:
                row = [("s", s - 2), ("t", ids[n - 2]), ("t", ids[n - 1])]
            else:
                row = [("s", j - 1), ("t", ids[j + 1]), ("s", j + 1)]
            nbrs.append(row)
        return nbrs

    def edge_refs(self) -> list[tuple[VertexRef, VertexRef]]:
        seen: set[frozenset] = set()
        out: list[tuple[VertexRef, VertexRef]] = []
        for j, row in enumerate(self.steiner_neighbors()):
            for ref in row:
                key = frozenset((("s", j), ref))
                if key not in seen:
                    seen.add(key)
                    out.append((("s", j), ref))
        return out


def _cross(u: complex, v: complex) -> float:
    return u.real * v.imag - u.imag * v.real


def fermat_point(
    a: Point, b: Point, c: Point, tol: Tolerances = DEFAULT_TOLERANCES
) -> FermatResult:
    """Fermat junction of a triangle.

    All angles below 120 degrees: the interior point seeing each side
    under 120 degrees, found as the intersection of the two lines that
    join a vertex to the outward equilateral apex on the opposite side.
    Otherwise the obtuse vertex itself, with the two incident edges.
    """
    for p, q in ((a, b), (a, c), (b, c)):
        if dist(p, q) < tol.eps_pt:
            raise DegeneratePoint("fermat junction of coincident points")
    corners = (a, b, c)
    angles = [
        angle_at(corners[i], corners[(i + 1) % 3], corners[(i + 2) % 3], tol.eps_pt)
        for i in range(3)
    ]
    worst = max(range(3), key=lambda i: angles[i])
    if angles[worst] >= 120.0:
        v = corners[worst]
        others = [corners[i] for i in range(3) if i != worst]
        return FermatResult(v, dist(v, others[0]) + dist(v, others[1]), False)

    za, zb, zc = (p.as_complex() for p in corners)
    apex_bc = _equilateral_apex(zb, zc, away_from=za)
    apex_ac = _equilateral_apex(za, zc, away_from=zb)
    j = _line_intersection(za, apex_bc - za, zb, apex_ac - zb)
    junction = Point.from_complex(j)
    total = dist(junction, a) + dist(junction, b) + dist(junction, c)
    return FermatResult(junction, total, True)


def _equilateral_apex(a: complex, b: complex, away_from: complex) -> complex:
    plus = a + (b - a) * _CIS60
    side_ref = _cross(b - a, away_from - a)
    side_plus = _cross(b - a, plus - a)
    if side_ref != 0.0 and (side_plus > 0) == (side_ref > 0):
        return a + (b - a) * _CIS_NEG60
    return plus


def _line_intersection(p0: complex, d0: complex, p1: complex, d1: complex) -> complex:
    denom = _cross(d0, d1)
    if denom == 0.0:
        raise DegeneratePoint("parallel junction construction lines")
    t = _cross(p1 - p0, d1) / denom
    return p0 + t * d0


def steiner_ray(
    v1: Point, a1: Point, a2: Point, t: float, tol: Tolerances = DEFAULT_TOLERANCES
) -> Point:
    """Point at parameter t on the ray from v1 that bisects the outward
    continuation of the unit directions away from a1 and a2."""
    d1 = dist(v1, a1)
    d2 = dist(v1, a2)
    if d1 < tol.eps_pt or d2 < tol.eps_pt:
        raise DegeneratePoint("ray anchor coincides with its vertex")
    z, z1, z2 = v1.as_complex(), a1.as_complex(), a2.as_complex()
    direction = (z - z1) / d1 + (z - z2) / d2
    if abs(direction) < tol.eps_pt:
        raise DegenerateDirection("opposite anchors give a zero ray direction")
    return Point.from_complex(z + t * direction)


def enumerate_topologies(order: list[int] | tuple[int, ...], cap: int = 64) -> list[Topology]:
    """Candidate caterpillars for terminals in zigzag order.

    The order itself and its reversal come first, then single swaps of
    neighbouring terminals, then disjoint double swaps, deduplicated and
    capped. Wider reassignments are the user's job (splitting stretches).
    """
    order = tuple(order)
    n = len(order)
    if n < 3:
        raise TooFewPoints("topologies need at least three terminals")
    if n == 3:
        return [Topology(order)]

    def swapped(base: tuple[int, ...], i: int) -> tuple[int, ...]:
        lst = list(base)
        lst[i], lst[i + 1] = lst[i + 1], lst[i]
        return tuple(lst)

    candidates: list[tuple[int, ...]] = [order, order[::-1]]
    for i in range(n - 1):
        candidates.append(swapped(order, i))
    for i, j in itertools.combinations(range(n - 1), 2):
        if j >= i + 2:
            candidates.append(swapped(swapped(order, i), j))

    seen: set[tuple[int, ...]] = set()
    unique: list[tuple[int, ...]] = []
    for cand in candidates:
        if cand not in seen:
            seen.add(cand)
            unique.append(cand)
        if len(unique) >= cap:
            break
    return [Topology(c) for c in unique]


def three_point_tree(
    pts: list[Point], ids: tuple[int, ...], tol: Tolerances
) -> SteinerTree:
    """Tree for three terminals: a junction when all angles stay under
    120 degrees, otherwise two edges through the obtuse vertex."""
    a, b, c = (pts[i] for i in ids)
    f = fermat_point(a, b, c, tol)
    terminals = tuple(pts[i] for i in ids)
    if f.is_steiner:
        edges = tuple((("s", 0), ("t", i)) for i in ids)
        return SteinerTree(tuple(ids), terminals, (f.junction,), edges, f.length, True)
    corners = (a, b, c)
    angles = [
        angle_at(corners[i], corners[(i + 1) % 3], corners[(i + 2) % 3], tol.eps_pt)
        for i in range(3)
    ]
    hub = max(range(3), key=lambda i: angles[i])
    spokes = [k for k in range(3) if k != hub]
    edges = tuple((("t", ids[hub]), ("t", ids[k])) for k in spokes)
    return SteinerTree(tuple(ids), terminals, (), edges, f.length, True)


def melzak_construct(
    pts: list[Point],
    topo: Topology,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_side_attempts: int = 32,
) -> SteinerTree | Infeasible:
    """Solve one caterpillar topology exactly.

    Merge phase folds the two terminals at a path end into the apex of
    the equilateral triangle on their segment (erected away from the
    points still to be merged); the last three points are joined through
    their Fermat junction. The unmerge phase recovers each junction as
    the second intersection of the apex-to-junction segment with the
    circumcircle of the merged pair. Any intersection off its segment or
    arc means no full tree exists for this topology. The apex side
    heuristic can misfire on contorted inputs, so flipped side choices
    are retried (nearest-to-heuristic first) up to a small budget.
    """
    ids = topo.leaf_order
    n = len(ids)
    for i, j in itertools.combinations(range(n), 2):
        if dist(pts[ids[i]], pts[ids[j]]) < tol.eps_pt:
            raise DegeneratePoint("coincident terminals in full-tree construction")
    if n == 3:
        return three_point_tree(pts, ids, tol)

    z = [pts[i].as_complex() for i in ids]
    n_merge = n - 3  # merges before the closing Fermat step
    masks = _side_masks(n_merge, max_side_attempts)

    first_failure: Infeasible | None = None
    saw_borderline = False
    for mask in masks:
        out = _melzak_attempt(pts, topo, z, mask, tol)
        if isinstance(out, SteinerTree):
            # A fixed full topology admits at most one tree with proper
            # 120-degree junctions, so the first reconstruction wins.
            return out
        saw_borderline = saw_borderline or out.borderline
        if first_failure is None:
            first_failure = out
    assert first_failure is not None
    return replace(first_failure, borderline=saw_borderline)


def _side_masks(n_bits: int, budget: int) -> list[int]:
    """Side-flip masks ordered by how far they stray from the heuristic
    (no flips first, then single flips, then pairs, ...)."""
    masks: list[int] = []
    for k in range(n_bits + 1):
        for positions in itertools.combinations(range(n_bits), k):
            masks.append(sum(1 << p for p in positions))
            if len(masks) >= budget:
                return masks
    return masks


def _melzak_attempt(
    pts: list[Point],
    topo: Topology,
    z: list[complex],
    flip_mask: int,
    tol: Tolerances,
) -> SteinerTree | Infeasible:
    ids = topo.leaf_order
    n = len(ids)
    s = n - 2

    merged: list[tuple[complex, complex, complex]] = []
    a, b = z[0], z[1]
    apex = 0j
    for k in range(s - 1):
        if k > 0:
            a, b = apex, z[k + 1]
        rest = z[k + 2 :]
        centroid = sum(rest) / len(rest)
        plus = a + (b - a) * _CIS60
        minus = a + (b - a) * _CIS_NEG60
        # plus always lies on the positive-cross side of a->b, so the
        # away-from-centroid choice reduces to the centroid's side sign.
        apex = minus if _cross(b - a, centroid - a) > 0 else plus
        if flip_mask >> k & 1:
            apex = plus if apex is minus else minus
        merged.append((a, b, apex))

    p_apex = Point.from_complex(apex)
    p_last2, p_last1 = pts[ids[n - 2]], pts[ids[n - 1]]
    if (
        dist(p_apex, p_last2) < tol.eps_pt
        or dist(p_apex, p_last1) < tol.eps_pt
    ):
        return Infeasible("merge apex landed on a terminal", borderline=True)
    f = fermat_point(p_apex, p_last2, p_last1, tol)
    if not f.is_steiner:
        worst = max(
            angle_at(p_apex, p_last2, p_last1, tol.eps_pt),
            angle_at(p_last2, p_apex, p_last1, tol.eps_pt),
            angle_at(p_last1, p_apex, p_last2, tol.eps_pt),
        )
        return Infeasible(
            "merged configuration is flat",
            borderline=worst <= 120.0 + tol.angle_tol_deg,
        )

    junctions: list[complex] = [0j] * s
    junctions[s - 1] = f.junction.as_complex()
    jcur = junctions[s - 1]
    for k in reversed(range(s - 1)):
        out = _unmerge(*merged[k], jcur, tol)
        if isinstance(out, Infeasible):
            return out
        junctions[k] = out
        jcur = out

    steiner = tuple(Point.from_complex(w) for w in junctions)
    terminals = tuple(pts[i] for i in ids)
    edges = tuple(topo.edge_refs())
    tree = SteinerTree(tuple(ids), terminals, steiner, edges, 0.0, True)
    length = tree.recomputed_length()
    tree = replace(tree, length=length)
    # The merged Fermat length must equal the unfolded tree length; a gap
    # means the side bookkeeping broke down for this geometry.
    if abs(length - f.length) > 1e-6 * max(1.0, length):
        return Infeasible("reconstruction length mismatch", borderline=True)
    return tree


def _unmerge(
    a: complex, b: complex, c: complex, j: complex, tol: Tolerances
) -> complex | Infeasible:
    """Second intersection of segment c->j with the circumcircle of the
    equilateral triangle (a, b, c), checked to land between c and j and
    on the arc across from c."""
    center = (a + b + c) / 3.0
    u = j - c
    norm_u2 = abs(u) ** 2
    if norm_u2 < tol.eps_pt**2:
        return Infeasible("junction collapsed onto its apex", borderline=True)
    w = c - center
    t = -2.0 * (w.real * u.real + w.imag * u.imag) / norm_u2
    x = c + t * u
    seg = abs(u)
    lo, hi = t * seg, (1.0 - t) * seg  # distances past each segment end
    if lo <= 0.0 or hi <= 0.0:
        return Infeasible(
            "junction fell outside its apex segment",
            borderline=min(abs(lo), abs(hi)) < max(tol.eps_pt, 1e-7 * seg),
        )
    chord = b - a
    side_x = _cross(chord, x - a)
    side_c = _cross(chord, c - a)
    dist_to_chord = abs(side_x) / abs(chord)
    if dist_to_chord < tol.eps_pt:
        return Infeasible("junction landed on an arc endpoint", borderline=True)
    if (side_x > 0) == (side_c > 0):
        return Infeasible("junction on the wrong arc", borderline=False)
    return x


def refine_oracle(
    pts: list[Point],
    topo: Topology,
    init: list[Point] | None = None,
    tol: Tolerances = DEFAULT_TOLERANCES,
    max_iter: int = 100_000,
) -> SteinerTree:
    """Relax junction positions by cyclic relocation to the Fermat point
    of their three current neighbours, until displacements fall below the
    convergence tolerance.

    Independent of the merge/unmerge construction; on an infeasible
    topology the junctions collapse onto terminals, which the validator
    then reports.
    """
    ids = topo.leaf_order
    n = len(ids)
    s = topo.steiner_count
    nbrs = topo.steiner_neighbors()
    coords = {("t", i): pts[i].as_complex() for i in ids}

    if init is not None:
        if len(init) != s:
            raise ValueError(f"expected {s} initial junctions, got {len(init)}")
        pos = [p.as_complex() for p in init]
    else:
        whole = sum(coords.values()) / n
        pos = []
        for row in nbrs:
            terms = [coords[r] for r in row if r[0] == "t"]
            anchor = sum(terms) / len(terms)
            pos.append(0.5 * anchor + 0.5 * whole)

    def resolve(ref: VertexRef) -> complex:
        return pos[ref[1]] if ref[0] == "s" else coords[ref]

    for _ in range(max_iter):
        max_move = 0.0
        for jx in range(s):
            triple = [resolve(r) for r in nbrs[jx]]
            new = _relaxed_junction(triple, tol)
            max_move = max(max_move, abs(new - pos[jx]))
            pos[jx] = new
        if max_move < tol.eps_conv:
            break
    else:
        raise NoConvergence(f"relaxation did not settle within {max_iter} sweeps")

    steiner = tuple(Point.from_complex(w) for w in pos)
    terminals = tuple(pts[i] for i in ids)
    edges = tuple(topo.edge_refs())
    tree = SteinerTree(tuple(ids), terminals, steiner, edges, 0.0, True)
    return replace(tree, length=tree.recomputed_length())


def _relaxed_junction(triple: list[complex], tol: Tolerances) -> complex:
    za, zb, zc = triple
    # Coincident neighbours: the doubled point already minimises the sum
    # of distances, and geometry below would degenerate.
    if abs(za - zb) < tol.eps_pt or abs(za - zc) < tol.eps_pt:
        return za
    if abs(zb - zc) < tol.eps_pt:
        return zb
    f = fermat_point(Point.from_complex(za), Point.from_complex(zb), Point.from_complex(zc), tol)
    return f.junction.as_complex()


def validate_tree(tree: SteinerTree, tol: Tolerances = DEFAULT_TOLERANCES) -> list[Violation]:
    """Violations of the junction rules: degree three at every junction,
    all junction angles within the 120-degree tolerance band, no terminal
    corner sharper than the band allows, and no junction sitting on a
    terminal. An empty list means the tree passes."""
    adjacency: dict[VertexRef, list[VertexRef]] = {}
    for a, b in tree.edges:
        adjacency.setdefault(a, []).append(b)
        adjacency.setdefault(b, []).append(a)

    lo = 120.0 - tol.angle_tol_deg
    hi = 120.0 + tol.angle_tol_deg
    violations: list[Violation] = []

    for j in range(len(tree.steiner_points)):
        ref: VertexRef = ("s", j)
        nbrs = adjacency.get(ref, [])
        if len(nbrs) != 3:
            violations.append(
                Violation("steiner-degree", ref, float(len(nbrs)), "junction degree must be 3")
            )
        violations.extend(_angle_violations(tree, ref, nbrs, lo, hi, tol, terminal=False))

    for tid in tree.terminal_indices:
        ref = ("t", tid)
        nbrs = adjacency.get(ref, [])
        if len(nbrs) >= 2:
            violations.extend(_angle_violations(tree, ref, nbrs, lo, hi, tol, terminal=True))

    for j, sp in enumerate(tree.steiner_points):
        for tid, tp in zip(tree.terminal_indices, tree.terminals):
            if dist(sp, tp) < tol.eps_pt:
                violations.append(
                    Violation("steiner-on-terminal", ("s", j), dist(sp, tp),
                              f"junction coincides with terminal {tid}")
                )
    return violations


def _angle_violations(
    tree: SteinerTree,
    ref: VertexRef,
    nbrs: list[VertexRef],
    lo: float,
    hi: float,
    tol: Tolerances,
    terminal: bool,
) -> list[Violation]:
    out: list[Violation] = []
    vertex = tree.resolve(ref)
    for r1, r2 in itertools.combinations(nbrs, 2):
        try:
            ang = angle_at(vertex, tree.resolve(r1), tree.resolve(r2), tol.eps_pt)
        except DegeneratePoint:
            out.append(Violation("degenerate-edge", ref, None, "zero-length edge at vertex"))
            continue
        if terminal:
            if ang < lo:
                out.append(Violation("terminal-angle", ref, ang, "terminal corner below the band"))
        elif not (lo <= ang <= hi):
            out.append(Violation("steiner-angle", ref, ang, "junction angle outside the band"))
    return out


def best_full_tree(
    pts: list[Point],
    tol: Tolerances = DEFAULT_TOLERANCES,
    cap: int = 64,
) -> SteinerTree | Infeasible:
    """Shortest valid full tree over the subgroup.

    Applies the sawtooth reordering, walks the capped topology list,
    solves each exactly (falling back to the relaxation when the exact
    construction reports a borderline failure), validates, and keeps the
    shortest clean tree. Ties keep the earliest candidate.
    """
    n = len(pts)
    if n < 3:
        raise TooFewPoints("full trees need at least three terminals")
    order = tuple(mksaw(pts))
    if n == 3:
        tree = three_point_tree(pts, order, tol)
        if validate_tree(tree, tol):
            return Infeasible("three-point connection violates the angle band")
        return tree

    best: SteinerTree | None = None
    for topo in enumerate_topologies(order, cap):
        out = melzak_construct(pts, topo, tol)
        candidate: SteinerTree | None = None
        if isinstance(out, SteinerTree):
            if not validate_tree(out, tol):
                candidate = out
        elif out.borderline:
            try:
                relaxed = refine_oracle(pts, topo, tol=tol)
            except NoConvergence:
                relaxed = None
            if relaxed is not None and not validate_tree(relaxed, tol):
                candidate = relaxed
        if candidate is not None and (best is None or candidate.length < best.length):
            best = candidate
    if best is None:
        return Infeasible("no topology yields a valid full tree")
    return best


def relabel_terminals(tree: SteinerTree, mapping: dict[int, int]) -> SteinerTree:
    """Rewrite terminal ids through mapping (for lifting a subgroup tree
    into the global terminal numbering)."""
    new_ids = tuple(mapping[i] for i in tree.terminal_indices)
    new_edges = tuple(
        tuple(("t", mapping[idx]) if kind == "t" else (kind, idx) for kind, idx in edge)
        for edge in tree.edges
    )
    return replace(tree, terminal_indices=new_ids, edges=new_edges)  # type: ignore[arg-type]
