from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import assume, given, settings, strategies as st
from scipy.optimize import linprog
from scipy.spatial import ConvexHull

from bursty_ic.region import (HalfPlane, RatePoint, Setup, Status, Verdict, classify_regime,
                              conjecture_gap, contains, dominance_check, hull, inner_corners,
                              inner_region, intersect, is_subset, outer_halfplanes,
                              outer_region, region_equal, region_record, tightness_report)

# ---------------------------------------------------------------------------
# float oracles, independent of the exact vertex machinery


def lp_support(planes, d):
    """max d.x over {planes, x >= 0} by linear programming."""
    A = [[float(h.a), float(h.b)] for h in planes]
    b = [float(h.c) for h in planes]
    res = linprog(-np.asarray(d, float), A_ub=A, b_ub=b, bounds=[(0, None)] * 2,
                  method="highs")
    assert res.status == 0
    return -res.fun


def point_support(points, d):
    return max([0.0] + [float(d[0] * p.x + d[1] * p.y) for p in points])


DIRECTIONS = [(1, 0), (0, 1), (1, 1), (2, 1), (1, 2), (3, 1), (1, 3), (4, 3), (3, 4), (5, 2)]


def same_by_support(points, planes):
    dirs = DIRECTIONS + [(float(h.a), float(h.b)) for h in planes if h.a >= 0 and h.b >= 0]
    return all(abs(point_support(points, d) - lp_support(planes, d)) < 1e-9 for d in dirs)


GRID = [F(0), F(1, 4), F(1, 2), F(3, 5), F(2, 3), F(3, 4), F(1), F(3, 2), F(2)]


def cells(Ms=range(2, 6), grid=GRID):
    for M in Ms:
        for L in range(1, M + 1):
            for a in grid:
                yield M, L, a


# ---------------------------------------------------------------------------
# geometry


def test_hull_toy_triangle():
    R = hull([(1, 0), (0, 2)])
    assert set(R.vertices) == {RatePoint(0, 0), RatePoint(1, 0), RatePoint(0, 2)}
    assert R.vertices[0] == RatePoint(0, 0)
    assert R.area() == 1


def test_intersect_toy_triangle():
    R = intersect([HalfPlane(2, 1, 2), HalfPlane(1, 1, 2)])
    assert set(R.vertices) == {RatePoint(0, 0), RatePoint(1, 0), RatePoint(0, 2)}
    assert region_equal(R, hull([(1, 0), (0, 2)]))


def test_degenerate_regions():
    assert hull([]).vertices == (RatePoint(0, 0),)
    assert intersect([HalfPlane(1, 1, -1)]).vertices == (RatePoint(0, 0),)
    seg = hull([(2, 0)])
    assert len(seg.vertices) == 2 and contains(seg, (1, 0)) and not contains(seg, (1, F(1, 9)))
    assert contains(hull([(0, 0)]), (0, 0)) and not contains(hull([(0, 0)]), (0, 1))
    with pytest.raises(ValueError):
        hull([(-1, 0)])
    with pytest.raises(ValueError):
        HalfPlane(0, 0, 1)


def test_collinear_points_dropped():
    R = hull([(0, 2), (1, 1), (2, 0)])
    assert set(R.vertices) == {RatePoint(0, 0), RatePoint(2, 0), RatePoint(0, 2)}


rat = st.fractions(min_value=0, max_value=6, max_denominator=12)
points = st.lists(st.tuples(rat, rat), min_size=1, max_size=7)


@settings(max_examples=80, deadline=None)
@given(points, st.tuples(rat, rat))
def test_hull_matches_float_hull(pts, probe):
    R = hull(pts)
    for p in pts:
        assert contains(R, p)
    assert hull(R.vertices).vertices == R.vertices
    closed = [(0, 0)] + [q for x, y in pts for q in ((x, y), (x, 0), (0, y))]
    arr = np.array([[float(x), float(y)] for x, y in closed])
    if np.linalg.matrix_rank(arr - arr[0]) == 2:
        assert abs(ConvexHull(arr).volume - float(R.area())) < 1e-9
    # membership agrees with an LP over convex combinations dominating the probe
    P = np.array([[float(x), float(y)] for x, y in pts]).T
    k = P.shape[1]
    res = linprog(np.zeros(k), A_ub=-P, b_ub=-np.array([float(v) for v in probe]),
                  A_eq=np.ones((1, k)), b_eq=[1.0], bounds=[(0, None)] * k, method="highs")
    # an LP dominance witness exists iff the probe lies in the downward closure
    assert contains(R, probe) == (res.status == 0)


planes = st.lists(st.tuples(st.integers(0, 5), st.integers(0, 5), st.integers(1, 20))
                  .filter(lambda t: t[0] or t[1]).map(lambda t: HalfPlane(*t)),
                  min_size=1, max_size=5)


@settings(max_examples=80, deadline=None)
@given(planes, st.tuples(rat, rat))
def test_intersect_membership_is_exact(hs, probe):
    assume(any(h.a > 0 for h in hs) and any(h.b > 0 for h in hs))
    R = intersect(hs)
    for v in R.vertices:
        assert all(h.holds(v) for h in hs) and v.x >= 0 and v.y >= 0
    assert contains(R, probe) == all(h.holds(probe) for h in hs)
    for d in DIRECTIONS:
        assert abs(point_support(R.vertices, d) - lp_support(hs, d)) < 1e-9


def test_subset_and_equality():
    small, big = hull([(1, 0), (0, 1)]), hull([(2, 0), (0, 2)])
    assert is_subset(small, big) and not is_subset(big, small)
    assert not region_equal(small, big)


# ---------------------------------------------------------------------------
# regimes and formulas


def test_classify_regime_examples():
    r = classify_regime(2, 1, 1)
    assert r.l_side == "boundary" and r.bands == ("[2/3,1]", "[1,2]")
    assert classify_regime(4, 1, F(1, 4)).bands == ("[0,1/2]",)
    r = classify_regime(4, 3, F(3, 5))
    assert (r.l_side, r.bands) == ("high", ("[1/2,2/3]",))
    with pytest.raises(ValueError):
        classify_regime(4, 1, F(5, 2))
    with pytest.raises(ValueError):
        classify_regime(4, 5, 1)


def test_inner_corner_examples():
    assert set(inner_corners("r0rl", 2, 1, 1, 1)) == {RatePoint(0, 2), RatePoint(1, 0)}
    assert inner_corners("r0rl", 3, 1, 3, 1) == [RatePoint(0, 3), RatePoint(2, 1),
                                                 RatePoint(F(8, 3), 0)]
    assert set(inner_corners("rlrm", 4, 1, 2, 1)) == {RatePoint(2, F(3, 2)),
                                                      RatePoint(0, F(7, 2))}


def plane(planes, label):
    return next(h for h in planes if label in h.label.split("|"))


def test_outer_examples():
    hs = outer_halfplanes("r0rl", 2, 1, 1, 1)
    assert {h.key() for h in hs} == {HalfPlane(2, 1, 2).key(), HalfPlane(1, 1, 2).key()}
    h = plane(outer_halfplanes("r0rl", 4, 1, 2, 1), "weighted-low-L")
    assert (h.a, h.b, h.c) == (4, 3, 14)
    h = plane(outer_halfplanes("rlrm", 2, 2, 2, 1), "all-interfered")
    assert (h.a, h.b, h.c) == (1, 0, 1)


def test_conjectured_planes_only_on_request():
    for setup in Setup:
        for M, L, a in cells(range(2, 5)):
            n, k = a.denominator, a.numerator
            base = outer_halfplanes(setup, M, L, n, k)
            full = outer_halfplanes(setup, M, L, n, k, include_conjectured=True)
            assert all(h.status is Status.PROVEN for h in base)
            assert {h.key() for h in base} <= {h.key() for h in full}


def test_boundary_bound_sets_agree():
    # at L = M/2 both formula families are evaluated and checked against each other
    for M in (2, 4, 6, 8):
        for i in range(49):
            a = F(i, 24)
            for setup in Setup:
                outer_halfplanes(setup, M, M // 2, a.denominator, a.numerator, True)


def test_scale_equivariance():
    for setup in Setup:
        for M, L, a in cells(range(2, 5)):
            n, k = a.denominator, a.numerator
            for c in (2, 3):
                assert region_equal(outer_region(setup, M, L, n, k),
                                    outer_region(setup, M, L, c * n, c * k))
                assert region_equal(inner_region(setup, M, L, n, k),
                                    inner_region(setup, M, L, c * n, c * k))


def test_no_interference_degeneracy():
    for setup in Setup:
        for M in range(1, 6):
            for L in range(1, M + 1):
                expect = hull([(M, 0), (0, M)])
                assert region_equal(outer_region(setup, M, L, 1, 0), expect)
                assert region_equal(inner_region(setup, M, L, 1, 0), expect)


# ---------------------------------------------------------------------------
# tightness, dominance, gaps


def known_tight(setup, M, L, a):
    """Cells where the proven planes alone are expected to meet the inner hull."""
    low, high = 2 * L <= M, 2 * L >= M
    if setup is Setup.R0RL:
        return low or a <= F(1, 2)
    return (low and a <= F(1, 2)) or (high and a <= F(2, 3)) or 2 * L == M


def test_tightness_pattern_and_support_oracle():
    for setup in Setup:
        for M, L, a in cells():
            n, k = a.denominator, a.numerator
            rep = tightness_report(setup, M, L, n, k)
            assert rep.sound
            assert rep.verdict is not Verdict.GAP
            if known_tight(setup, M, L, a):
                assert rep.verdict is Verdict.TIGHT_PROVEN, (setup, M, L, a)
            pts = inner_corners(setup, M, L, n, k)
            proven = outer_halfplanes(setup, M, L, n, k)
            full = outer_halfplanes(setup, M, L, n, k, include_conjectured=True)
            assert same_by_support(pts, full)
            assert same_by_support(pts, proven) == (rep.verdict is Verdict.TIGHT_PROVEN)


def test_tightness_examples():
    for a in GRID:
        assert tightness_report("r0rl", 4, 1, a.denominator, a.numerator).verdict \
            is Verdict.TIGHT_PROVEN
    assert tightness_report("r0rl", 2, 1, 4, 1).verdict is Verdict.TIGHT_PROVEN
    rep = tightness_report("r0rl", 4, 3, 1, 1)
    assert rep.verdict is Verdict.TIGHT_IF_CONJECTURE
    assert RatePoint(2, 0) in rep.inner.vertices
    assert rep.witnesses and all(not contains(rep.inner, w) for w in rep.witnesses)


def closed_form_redundant(setup, M, L, a):
    """Conjectured-plane redundancy from hand-simplified inequalities."""
    if setup is Setup.R0RL:
        return M - L * a <= M * (1 - a / 2)
    if 2 * L <= M and a <= F(1, 2):
        return (M - 2 * L) * (1 - a) >= 0
    f = max(F(1), a) + max(1 - a, F(0))
    g = max(a, 1 - a)
    return (M - L) * f + (2 * L - M) * g <= F(M, 2) * f


def test_dominance_in_known_ranges():
    grid = [F(i, 24) for i in range(0, 25)]
    for M in range(2, 7):
        for L in range(1, M + 1):
            for a in grid:
                ranges = []
                if 2 * L >= M and a <= F(1, 2):
                    ranges.append(Setup.R0RL)
                if 2 * L <= M and a <= F(1, 2):
                    ranges.append(Setup.RLRM)
                if 2 * L >= M and a <= F(2, 3):
                    ranges.append(Setup.RLRM)
                for setup in set(ranges):
                    d = dominance_check(setup, M, L, a)
                    assert d and d.in_range and not d.note
                    assert closed_form_redundant(setup, M, L, a)


def test_dominance_matches_lp_everywhere():
    for setup in Setup:
        for M, L, a in cells(range(2, 6), [F(i, 12) for i in range(25)]):
            n, k = a.denominator, a.numerator
            full = outer_halfplanes(setup, M, L, n, k, include_conjectured=True)
            proven = [h for h in full if h.status is Status.PROVEN]
            conj = [h for h in full if h.status is Status.CONJECTURED]
            lp = all(lp_support(proven, (float(h.a), float(h.b))) <= float(h.c) + 1e-9
                     for h in conj)
            assert bool(dominance_check(setup, M, L, a)) == lp


def test_dominance_examples():
    assert dominance_check("r0rl", 4, 3, F(1, 2))
    assert dominance_check("rlrm", 4, 2, F(3, 5))
    d = dominance_check("r0rl", 4, 3, 1)
    assert not d and not d.in_range and d.note


def test_conjecture_gap_examples():
    assert conjecture_gap("r0rl", 2, 1, 4, 1) == []
    gaps = conjecture_gap("rlrm", 4, 3, 1, 1)
    assert {g.vertex for g in gaps} == {RatePoint(3, 0), RatePoint(0, 3)}
    assert all(g.margin == 1 and g.plane.status is Status.CONJECTURED for g in gaps)
    gaps = conjecture_gap("r0rl", 4, 4, 1, 1)
    assert gaps and all(g.margin > 0 for g in gaps)
    # the conjectured plane caps R_L at M/2 while erasure coding alone reaches M - L = 0
    rep = tightness_report("r0rl", 4, 4, 1, 1)
    assert rep.gap_area > 0 and rep.gap_area_with_conjecture == 0
    assert max(v.x for v in rep.conjectured_outer.vertices) == 2


def test_region_record():
    rec = region_record("rlrm", 4, 3, 2, 2)
    assert rec.report.verdict is Verdict.TIGHT_IF_CONJECTURE
    assert any(h.status is Status.CONJECTURED for h in rec.bounds)
    assert str(rec.regime) == "high:[2/3,1]&[1,2]"
    names = [name for name, _ in rec.corners]
    assert "han-kobayashi-m" in names
