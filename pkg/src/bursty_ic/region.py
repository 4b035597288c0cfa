"""
Exact rational 2-D rate regions.

All rates are normalised by ``n``. In the ``r0rl`` setup points are
``(R_L, R_0)``; in the ``rlrm`` setup they are ``(R_M, R_L)``. Regions are
downward closed convex polygons stored as counter-clockwise vertex lists that
start at the origin. No floating point is used anywhere in this module.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .schemes import Setup, corner_families

F = Fraction


class Status(str, enum.Enum):
    PROVEN = "proven"
    CONJECTURED = "conjectured"


class Verdict(str, enum.Enum):
    TIGHT_PROVEN = "tight_proven"
    TIGHT_IF_CONJECTURE = "tight_if_conjecture"
    GAP = "gap"


class RegionConsistencyError(AssertionError):
    """The two bound families disagree where both apply (L = M/2)."""


@dataclass(frozen=True, order=True)
class RatePoint:
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", F(self.x))
        object.__setattr__(self, "y", F(self.y))

    def __iter__(self):
        return iter((self.x, self.y))

    def __str__(self) -> str:
        return f"({self.x}, {self.y})"


@dataclass(frozen=True)
class HalfPlane:
    """``a*x + b*y <= c``."""

    a: Fraction
    b: Fraction
    c: Fraction
    status: Status = Status.PROVEN
    label: str = ""

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, F(getattr(self, name)))
        if self.a == 0 and self.b == 0:
            raise ValueError("half-plane needs (a, b) != (0, 0)")
        object.__setattr__(self, "status", Status(self.status))

    def value(self, pt) -> Fraction:
        x, y = pt
        return self.a * x + self.b * y

    def holds(self, pt) -> bool:
        return self.value(pt) <= self.c

    def margin(self, pt) -> Fraction:
        """How far ``pt`` lies beyond the boundary (positive = violated)."""
        return self.value(pt) - self.c

    def key(self) -> tuple[Fraction, Fraction, Fraction]:
        """Scale-free form used to merge coincident planes."""
        s = max(abs(self.a), abs(self.b))
        return self.a / s, self.b / s, self.c / s

    def __str__(self) -> str:
        return f"{self.a}*x + {self.b}*y <= {self.c} [{self.status.value}:{self.label}]"


@dataclass(frozen=True)
class RateRegion2D:
    vertices: tuple[RatePoint, ...]

    def area(self) -> Fraction:
        v = self.vertices
        s = F(0)
        for i in range(len(v)):
            x1, y1 = v[i]
            x2, y2 = v[(i + 1) % len(v)]
            s += x1 * y2 - x2 * y1
        return abs(s) / 2

    def __contains__(self, pt) -> bool:
        return contains(self, pt)

    def __str__(self) -> str:
        return "[" + ", ".join(str(v) for v in self.vertices) + "]"


ORIGIN_REGION = RateRegion2D((RatePoint(0, 0),))


def _cross(o, a, b) -> Fraction:
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x)


def _convex_hull(points) -> list[RatePoint]:
    """Monotone chain, collinear points dropped, CCW from the lowest-left point."""
    pts = sorted(set(RatePoint(*p) for p in points))
    if len(pts) <= 2:
        return pts
    lower: list[RatePoint] = []
    for p in pts:
        while len(lower) >= 2 and _cross(lower[-2], lower[-1], p) <= 0:
            lower.pop()
        lower.append(p)
    upper: list[RatePoint] = []
    for p in reversed(pts):
        while len(upper) >= 2 and _cross(upper[-2], upper[-1], p) <= 0:
            upper.pop()
        upper.append(p)
    return lower[:-1] + upper[:-1]


def _canonical(vertices) -> RateRegion2D:
    hull = _convex_hull(vertices)
    if not hull:
        return ORIGIN_REGION
    start = hull.index(min(hull))
    return RateRegion2D(tuple(hull[start:] + hull[:start]))


def hull(points) -> RateRegion2D:
    """Time-sharing closure of ``points`` together with silence on either message."""
    pts = [RatePoint(0, 0)]
    for p in points:
        p = RatePoint(*p)
        if p.x < 0 or p.y < 0:
            raise ValueError(f"rates must be nonnegative, got {p}")
        pts += [p, RatePoint(p.x, 0), RatePoint(0, p.y)]
    return _canonical(pts)


def intersect(halfplanes) -> RateRegion2D:
    """Polygon cut out of the nonnegative quadrant by ``halfplanes``."""
    planes = list(halfplanes) + [HalfPlane(-1, 0, 0, label="x>=0"),
                                 HalfPlane(0, -1, 0, label="y>=0")]
    candidates = []
    for h1, h2 in itertools.combinations(planes, 2):
        det = h1.a * h2.b - h2.a * h1.b
        if det == 0:
            continue
        x = (h1.c * h2.b - h2.c * h1.b) / det
        y = (h1.a * h2.c - h2.a * h1.c) / det
        pt = RatePoint(x, y)
        if all(h.holds(pt) for h in planes):
            candidates.append(pt)
    if not candidates:
        return ORIGIN_REGION
    region = _canonical(candidates)
    xs = [v.x for v in region.vertices]
    ys = [v.y for v in region.vertices]
    if min(xs) != 0 or min(ys) != 0 or RatePoint(0, 0) not in region.vertices:
        # Every region here contains the origin; anything else means c < 0.
        return ORIGIN_REGION
    return region


def region_equal(A: RateRegion2D, B: RateRegion2D) -> bool:
    return set(A.vertices) == set(B.vertices)


def contains(region: RateRegion2D, point) -> bool:
    """Exact point-in-convex-polygon test (boundary counts as inside)."""
    pt = RatePoint(*point)
    v = region.vertices
    if len(v) == 1:
        return pt == v[0]
    if len(v) == 2:
        return _cross(v[0], v[1], pt) == 0 and min(v) <= pt <= max(v)
    return all(_cross(v[i], v[(i + 1) % len(v)], pt) >= 0 for i in range(len(v)))


def is_subset(A: RateRegion2D, B: RateRegion2D) -> bool:
    return all(contains(B, v) for v in A.vertices)


def outside_vertices(A: RateRegion2D, B: RateRegion2D) -> list[RatePoint]:
    """Vertices of ``A`` not inside ``B``."""
    return [v for v in A.vertices if not contains(B, v)]


# ---------------------------------------------------------------------------
# Regimes


ALPHA_BANDS = (
    ("[0,1/2]", F(0), F(1, 2)),
    ("[1/2,2/3]", F(1, 2), F(2, 3)),
    ("[2/3,1]", F(2, 3), F(1)),
    ("[1,2]", F(1), F(2)),
)


@dataclass(frozen=True)
class RegimeId:
    l_side: str
    bands: tuple[str, ...]

    def __str__(self) -> str:
        return f"{self.l_side}:{'&'.join(self.bands)}"


def classify_regime(M: int, L: int, alpha) -> RegimeId:
    """Side of ``M/2`` that ``L`` falls on, and the alpha band(s) holding ``alpha``.

    Breakpoint values belong to both neighbouring bands. The split between
    the two strong-interference corner sets at ``L = M/2`` is where
    ``M - L(2 - alpha)`` meets ``M alpha / 2``.
    """
    alpha = F(alpha)
    if not 0 <= alpha <= 2:
        raise ValueError(f"alpha={alpha} outside [0, 2]")
    if not 1 <= L <= M:
        raise ValueError(f"L={L} outside [1, M]=[1, {M}]")
    half = F(M, 2)
    side = "low" if L < half else "high" if L > half else "boundary"
    bands = tuple(name for name, lo, hi in ALPHA_BANDS if lo <= alpha <= hi)
    return RegimeId(side, bands)


def _alpha(n: int, k: int) -> Fraction:
    if n < 1 or not 0 <= k <= 2 * n:
        raise ValueError(f"need n >= 1 and 0 <= k <= 2n, got n={n}, k={k}")
    return F(k, n)


def inner_corners(setup: Setup, M: int, L: int, n: int, k: int) -> list[RatePoint]:
    """Distinct achievable corner points at ``alpha = k/n``, in family order."""
    if not 1 <= L <= M:
        raise ValueError(f"L={L} outside [1, M]=[1, {M}]")
    alpha = _alpha(n, k)
    out: list[RatePoint] = []
    for fam in corner_families(setup, alpha):
        pt = RatePoint(*fam.point(M, L, alpha))
        if pt not in out:
            out.append(pt)
    return out


def inner_region(setup: Setup, M: int, L: int, n: int, k: int) -> RateRegion2D:
    return hull(inner_corners(setup, M, L, n, k))


def _shapes(alpha: Fraction) -> tuple[Fraction, Fraction]:
    """``max(1,a) + max(1-a,0)`` and ``max(a, 1-a)``."""
    return max(F(1), alpha) + max(1 - alpha, F(0)), max(alpha, 1 - alpha)


def _low_planes(setup: Setup, M: int, L: int, alpha: Fraction) -> list[HalfPlane]:
    f, g = _shapes(alpha)
    P, Cj = Status.PROVEN, Status.CONJECTURED
    if setup is Setup.R0RL:
        return [HalfPlane(M, M - L, M * ((M - 2 * L) + L * f), P, "weighted-low-L"),
                HalfPlane(1, 1, M, P, "total")]
    return [HalfPlane(1, 1, (M - 2 * L) + L * f, P, "sum-low-L"),
            HalfPlane(1, 0, M * g, P, "all-interfered"),
            HalfPlane(2 * (M - L), M, M * (M - L) * f, Cj, "weighted-RM")]


def _high_planes(setup: Setup, M: int, L: int, alpha: Fraction) -> list[HalfPlane]:
    f, g = _shapes(alpha)
    P, Cj = Status.PROVEN, Status.CONJECTURED
    if setup is Setup.R0RL:
        return [HalfPlane(M, M - L, M * ((M - L) * f + (2 * L - M) * g), P, "weighted-high-L"),
                HalfPlane(1, 1, M, P, "total"),
                HalfPlane(2, 1, M * f, Cj, "double-RL")]
    return [HalfPlane(1, 1, (M - L) * f + (2 * L - M) * g, P, "sum-high-L"),
            HalfPlane(1, 0, M * g, P, "all-interfered"),
            HalfPlane(1, 1, F(M, 2) * f, Cj, "half-sum")]


def _merge(planes: list[HalfPlane]) -> list[HalfPlane]:
    """Collapse coincident planes; proven status wins, labels are joined."""
    merged: dict[tuple, HalfPlane] = {}
    for h in planes:
        key = h.key()
        if key not in merged:
            merged[key] = h
            continue
        old = merged[key]
        labels = old.label.split("|")
        if h.label not in labels:
            labels.append(h.label)
        status = Status.PROVEN if Status.PROVEN in (old.status, h.status) else old.status
        merged[key] = HalfPlane(old.a, old.b, old.c, status, "|".join(labels))
    return list(merged.values())


def _proven(planes):
    return [h for h in planes if h.status is Status.PROVEN]


def outer_halfplanes(setup: Setup, M: int, L: int, n: int, k: int,
                     include_conjectured: bool = False) -> list[HalfPlane]:
    """Outer-bound planes for the regime; conjectured ones only on request.

    At ``L = M/2`` both bound families apply; their regions are checked to
    coincide and the planes are merged.
    """
    setup = Setup(setup)
    if not 1 <= L <= M:
        raise ValueError(f"L={L} outside [1, M]=[1, {M}]")
    alpha = _alpha(n, k)
    if 2 * L < M:
        planes = _low_planes(setup, M, L, alpha)
    elif 2 * L > M:
        planes = _high_planes(setup, M, L, alpha)
    else:
        low, high = _low_planes(setup, M, L, alpha), _high_planes(setup, M, L, alpha)
        if not region_equal(intersect(_proven(low)), intersect(_proven(high))):
            raise RegionConsistencyError(
                f"proven bounds disagree at L=M/2 ({setup.value}, M={M}, alpha={alpha})")
        if not region_equal(intersect(low), intersect(high)):
            raise RegionConsistencyError(
                f"conjectured bounds disagree at L=M/2 ({setup.value}, M={M}, alpha={alpha})")
        planes = low + high
    planes = _merge(planes)
    if not include_conjectured:
        planes = _proven(planes)
    return planes


def outer_region(setup: Setup, M: int, L: int, n: int, k: int,
                 include_conjectured: bool = False) -> RateRegion2D:
    return intersect(outer_halfplanes(setup, M, L, n, k, include_conjectured))


# ---------------------------------------------------------------------------
# Reports


@dataclass
class TightnessReport:
    setup: Setup
    M: int
    L: int
    alpha: Fraction
    verdict: Verdict
    inner: RateRegion2D
    proven_outer: RateRegion2D
    conjectured_outer: RateRegion2D
    witnesses: list[RatePoint] = field(default_factory=list)
    sound: bool = True

    @property
    def gap_area(self) -> Fraction:
        return self.proven_outer.area() - self.inner.area()

    @property
    def gap_area_with_conjecture(self) -> Fraction:
        return self.conjectured_outer.area() - self.inner.area()


def tightness_report(setup: Setup, M: int, L: int, n: int, k: int) -> TightnessReport:
    """Compare the achievable hull with the proven and conjecture-augmented outer regions.

    ``witnesses`` are the vertices of the proven outer region that the inner
    hull does not reach.
    """
    setup = Setup(setup)
    inner = inner_region(setup, M, L, n, k)
    proven = outer_region(setup, M, L, n, k)
    conj = outer_region(setup, M, L, n, k, include_conjectured=True)
    if region_equal(inner, proven):
        verdict = Verdict.TIGHT_PROVEN
    elif region_equal(inner, conj):
        verdict = Verdict.TIGHT_IF_CONJECTURE
    else:
        verdict = Verdict.GAP
    return TightnessReport(setup, M, L, _alpha(n, k), verdict, inner, proven, conj,
                           outside_vertices(proven, inner), is_subset(inner, proven))


@dataclass(frozen=True)
class Dominance:
    redundant: bool
    in_range: bool
    note: str = ""

    def __bool__(self) -> bool:
        return self.redundant


INACTIVE_RANGES = {
    # setup, L side -> largest alpha for which the conjectured plane is inactive
    (Setup.R0RL, "high"): F(1, 2),
    (Setup.RLRM, "low"): F(1, 2),
    (Setup.RLRM, "high"): F(2, 3),
}


def dominance_check(setup: Setup, M: int, L: int, alpha) -> Dominance:
    """Whether every conjectured plane is implied by the proven ones.

    Implied means every vertex of the proven region (within the nonnegative
    quadrant) satisfies the conjectured plane.
    """
    setup = Setup(setup)
    alpha = F(alpha)
    n, k = alpha.denominator, alpha.numerator
    planes = outer_halfplanes(setup, M, L, n, k, include_conjectured=True)
    proven = intersect(_proven(planes))
    conj = [h for h in planes if h.status is Status.CONJECTURED]
    redundant = all(h.holds(v) for h in conj for v in proven.vertices)
    sides = ["low", "high"] if 2 * L == M else ["low" if 2 * L < M else "high"]
    limits = [INACTIVE_RANGES[(setup, s)] for s in sides if (setup, s) in INACTIVE_RANGES]
    in_range = bool(limits) and alpha <= max(limits)
    note = "" if in_range else "outside the range where the conjectured plane is known to be inactive; literal redundancy reported"
    return Dominance(redundant, in_range, note)


@dataclass(frozen=True)
class GapEntry:
    vertex: RatePoint
    plane: HalfPlane
    margin: Fraction


def conjecture_gap(setup: Setup, M: int, L: int, n: int, k: int) -> list[GapEntry]:
    """Proven-outer vertices cut off by a conjectured plane, with exact margins."""
    planes = outer_halfplanes(setup, M, L, n, k, include_conjectured=True)
    proven = intersect(_proven(planes))
    out = []
    for h in planes:
        if h.status is not Status.CONJECTURED:
            continue
        for v in proven.vertices:
            if not h.holds(v):
                out.append(GapEntry(v, h, h.margin(v)))
    return out


@dataclass
class RegionRecord:
    """Everything the writers need for one instance."""

    setup: Setup
    M: int
    L: int
    n: int
    k: int
    regime: RegimeId
    corners: list[tuple[str, RatePoint]]
    bounds: list[HalfPlane]
    report: TightnessReport
    gaps: list[GapEntry]


def region_record(setup: Setup, M: int, L: int, n: int, k: int,
                  include_conjectured: bool = True) -> RegionRecord:
    setup = Setup(setup)
    alpha = _alpha(n, k)
    corners = []
    for fam in corner_families(setup, alpha):
        corners.append((fam.corner.value, RatePoint(*fam.point(M, L, alpha))))
    bounds = outer_halfplanes(setup, M, L, n, k, include_conjectured)
    return RegionRecord(setup, M, L, n, k, classify_regime(M, L, alpha), corners, bounds,
                        tightness_report(setup, M, L, n, k),
                        conjecture_gap(setup, M, L, n, k))
