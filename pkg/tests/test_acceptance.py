"""End-to-end acceptance checks, one printed PASS/FAIL line per criterion."""

import time
from fractions import Fraction as F

import pytest

from bursty_ic import cli
from bursty_ic.channel import ChannelParams, IntegralityError
from bursty_ic.entropy_tools import fuzz
from bursty_ic.region import (INACTIVE_RANGES, RatePoint, dominance_check, hull,
                              inner_corners, inner_region, outer_region, outside_vertices,
                              region_equal, tightness_report)
from bursty_ic.schemes import (CornerId, Msg, Setup, build_corner_scheme, corner_families,
                               split_scheme)
from bursty_ic.verifier import passes, toy_oracle

ALPHAS = [F(0), F(1, 4), F(1, 2), F(3, 5), F(2, 3), F(3, 4), F(1), F(3, 2), F(2)]
CELLS = [(setup, M, L, a) for setup in Setup for M in range(2, 6) for L in range(1, M + 1)
         for a in ALPHAS]


def build_all(setup, M, L, alpha):
    """Corner schemes at the smallest n (a multiple of the denominator, <= 12) that fits."""
    for n in range(alpha.denominator, 13, alpha.denominator):
        p = ChannelParams.from_alpha(alpha, M, L, n=n)
        try:
            return p, [(fam, build_corner_scheme(p, setup, fam.corner))
                       for fam in corner_families(setup, alpha)]
        except IntegralityError:
            continue
    raise AssertionError(f"no n <= 12 fits {setup.value} M={M} L={L} alpha={alpha}")


def test_criterion_1_toy_region(criterion):
    t0 = time.perf_counter()
    found = toy_oracle(2)
    elapsed = time.perf_counter() - t0
    triangle = {(F(a, 2), F(b, 2)) for a in range(3) for b in range(5) if 2 * a + b <= 4}
    ok = (found == triangle and region_equal(hull(found), hull([(1, 0), (0, 2)]))
          and elapsed < 60)
    criterion(1, "toy region equals the triangle 2R1+R0<=2", ok,
              f"{len(found)} points, {elapsed:.1f}s")
    assert ok


def test_criterion_2_and_8_corner_schemes_and_soundness(criterion):
    t0 = time.perf_counter()
    failures, unsound, total = [], [], 0
    for setup, M, L, alpha in CELLS:
        p, built = build_all(setup, M, L, alpha)
        points = {RatePoint(*s.point(setup)) for fam, s in built
                  if passes(s) and s.point(setup) == fam.point(M, L, alpha)}
        for pt in inner_corners(setup, M, L, p.n, p.k):
            total += 1
            if pt not in points:
                failures.append((setup.value, M, L, alpha, str(pt)))
        bad = outside_vertices(inner_region(setup, M, L, p.n, p.k),
                               outer_region(setup, M, L, p.n, p.k))
        if bad:
            unsound.append((setup.value, M, L, alpha, [str(v) for v in bad]))
    elapsed = time.perf_counter() - t0
    ok2 = not failures and elapsed < 300
    criterion(2, "every inner corner has a verified scheme at its exact rate", ok2,
              f"{total} corners over {len(CELLS)} cells, {len(failures)} failures, "
              f"{elapsed:.0f}s")
    criterion(8, "inner hull inside proven outer region on every cell", not unsound,
              f"{len(CELLS)} cells" + (f", offending {unsound[:3]}" if unsound else ""))
    assert not failures, failures[:5]
    assert elapsed < 300
    assert not unsound, unsound


def test_criterion_3_low_L_tightness(criterion):
    cells = [(M, L, a) for M in range(2, 6) for L in range(1, M // 2 + 1)
             for a in ALPHAS + [F(k, 24) for k in range(49)]]
    bad = [(M, L, a) for M, L, a in cells
           if not region_equal(inner_region(Setup.R0RL, M, L, a.denominator, a.numerator),
                               outer_region(Setup.R0RL, M, L, a.denominator, a.numerator))]
    criterion(3, "R0RL with L<=M/2 is tight", not bad, f"{len(cells)} cells")
    assert not bad, bad[:5]


def test_criterion_4_inactive_conjecture_ranges(criterion):
    ranges = {(Setup.R0RL, "high"), (Setup.RLRM, "low"), (Setup.RLRM, "high")}
    assert ranges == set(INACTIVE_RANGES)
    bad, count = [], 0
    for (setup, side), top in INACTIVE_RANGES.items():
        for M in range(2, 7):
            Ls = [L for L in range(1, M + 1) if (2 * L >= M if side == "high" else 2 * L <= M)]
            for L in Ls:
                for a in (F(k, 24) for k in range(int(top * 24) + 1)):
                    count += 1
                    rep = tightness_report(setup, M, L, a.denominator, a.numerator)
                    dom = dominance_check(setup, M, L, a)
                    if not (region_equal(rep.inner, rep.proven_outer) and dom and dom.in_range):
                        bad.append((setup.value, M, L, a))
    criterion(4, "conjectured planes inactive and capacity known in the three ranges",
              not bad, f"{count} cells on a 1/24 grid")
    assert not bad, bad[:5]


@pytest.mark.parametrize("setup", list(Setup))
def test_criterion_5_conjecture_gap(criterion, setup):
    M, L, n, k = 4, 3, 1, 1
    inner = inner_region(setup, M, L, n, k)
    proven = outer_region(setup, M, L, n, k)
    conj = outer_region(setup, M, L, n, k, include_conjectured=True)
    rl_two = RatePoint(2, 0) if setup is Setup.R0RL else RatePoint(0, 2)
    ok = (outside_vertices(proven, inner) != [] and proven.area() > inner.area()
          and region_equal(inner, conj) and rl_two in inner.vertices)
    criterion(5, f"{setup.value} M=4 L=3 alpha=1 closes only with the conjectured plane", ok,
              f"gap area {proven.area() - inner.area()}, R_L=2 vertex {rl_two}")
    assert ok


def test_criterion_6_split_beats_erasure(criterion):
    p = ChannelParams(n=1, k=1, M=4, L=3)
    split = split_scheme(p)
    erasure = build_corner_scheme(p, Setup.R0RL, CornerId.ERASURE_ALL)
    row = dict(zip(cli.SWEEP_COLUMNS, cli.sweep_row((Setup.R0RL, 4, 3, F(1), 0, True, 8))))
    ok = (passes(split) and split.normalized_rate(Msg.WL) == 2
          and passes(erasure) and erasure.normalized_rate(Msg.WL) == 1
          and (row["split_rl"], row["erasure_rl"]) == ("2", "1"))
    criterion(6, "subcarrier split reaches R_L=2n where erasure coding gives n", ok,
              f"sweep row split_rl={row['split_rl']} erasure_rl={row['erasure_rl']}")
    assert ok


def test_criterion_7_entropy_fuzz(criterion):
    t0 = time.perf_counter()
    violations = fuzz(10_000, seed=0, Ms=(2, 3, 4), max_alphabet=3)
    elapsed = time.perf_counter() - t0
    ok = not violations and elapsed < 120
    criterion(7, "sliding-window entropy chain never rises", ok,
              f"10000 pmfs, {len(violations)} violations, {elapsed:.1f}s")
    assert ok, violations[:3]


def test_criterion_9_sweep_determinism(criterion, tmp_path):
    outs = []
    for i in range(2):
        path = tmp_path / f"sweep{i}.csv"
        code = cli.main(["sweep", "--Ms", "2,3", "--seed", "11", "-o", str(path)])
        assert code == cli.EXIT_OK
        outs.append(path.read_bytes())
    ok = outs[0] == outs[1] and len(outs[0]) > 0
    rows = len(outs[0].splitlines()) - 1
    criterion(9, "two seeded sweeps give byte-identical CSV", ok, f"{rows} rows")
    assert ok
