"""
Explicit linear coding schemes for the achievable corner points.

A scheme maps each user's message symbols (``W0``, ``WL``, ``WM``) onto the
levels of every subcarrier over ``T`` slots. Levels are indexed from the top
of the transmitted ``q``-vector; only the top ``n`` reach the own receiver.
The other user's level ``i`` lands on own level ``i + n - k`` when its cross
link is active (negative values fall into the pure-interference levels that
exist when ``k > n``).

Most corners use the same generators at both transmitters. At ``alpha = 1``
the single-carrier schemes and the subcarrier split need the two users to
act differently, so a scheme may carry a second generator set.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

import numpy as np

from .channel import ChannelParams, cross_map, direct_map
from .field import decodability_ranks, get_field


class Setup(str, enum.Enum):
    """Which pair of messages is active; ``x``/``y`` are the plotted axes."""

    R0RL = "r0rl"  # x = R_L, y = R_0
    RLRM = "rlrm"  # x = R_M, y = R_L

    @property
    def axes(self) -> tuple["Msg", "Msg"]:
        return (Msg.WL, Msg.W0) if self is Setup.R0RL else (Msg.WM, Msg.WL)


class Msg(str, enum.Enum):
    W0 = "0"
    WL = "L"
    WM = "M"


MSG_ORDER = (Msg.W0, Msg.WL, Msg.WM)


class CornerId(str, enum.Enum):
    TOP_LEVELS = "top-levels"
    PRIVATE_SPLIT = "private-split"
    PRIVATE_ERASURE = "private-erasure"
    ERASURE_ALL = "erasure-all"
    ALIGNMENT = "alignment"
    ALIGNMENT_ERASURE = "alignment-erasure"
    HAN_KOBAYASHI = "han-kobayashi"
    HAN_KOBAYASHI_M = "han-kobayashi-m"
    STRONG_ALIGN = "strong-align"
    STRONG_ALIGN_ERASURE = "strong-align-erasure"
    STRONG_ORTHOGONAL = "strong-orthogonal"
    STRONG_ORTHOGONAL_M = "strong-orthogonal-m"


class RegimeError(ValueError):
    """The requested corner is not achievable for this interference strength."""


class FieldTooSmallError(ValueError):
    pass


class SchemeConstructionError(RuntimeError):
    """A seeded randomized construction found no verified generator."""


F = Fraction


@dataclass(frozen=True)
class CornerFamily:
    setup: Setup
    corner: CornerId
    alpha_lo: Fraction
    alpha_hi: Fraction
    rate: Callable[[int, int, Fraction], tuple[Fraction, Fraction]]

    def valid(self, alpha) -> bool:
        return self.alpha_lo <= Fraction(alpha) <= self.alpha_hi

    def point(self, M: int, L: int, alpha) -> tuple[Fraction, Fraction]:
        """Corner ``(x, y)`` normalised by ``n``."""
        return self.rate(M, L, Fraction(alpha))


def _fam(setup, corner, lo, hi, rate):
    return CornerFamily(setup, corner, F(lo), F(hi), rate)


_R, _M = Setup.R0RL, Setup.RLRM
C = CornerId
CORNER_FAMILIES: tuple[CornerFamily, ...] = (
    _fam(_R, C.TOP_LEVELS, 0, 2, lambda M, L, a: (F(0), F(M))),
    _fam(_R, C.PRIVATE_SPLIT, 0, 1, lambda M, L, a: (M * (1 - a), M * a)),
    _fam(_R, C.ERASURE_ALL, 0, 1, lambda M, L, a: (M - L * a, F(0))),
    _fam(_R, C.ALIGNMENT, F(1, 2), F(2, 3), lambda M, L, a: (M * a, M * (2 - 3 * a))),
    _fam(_R, C.ALIGNMENT_ERASURE, F(1, 2), F(2, 3),
         lambda M, L, a: (M * a + (M - L) * (2 - 3 * a), F(0))),
    _fam(_R, C.HAN_KOBAYASHI, F(2, 3), 1, lambda M, L, a: (M * (1 - a / 2), F(0))),
    _fam(_R, C.STRONG_ALIGN, 1, 2, lambda M, L, a: (M * (a - 1), M * (2 - a))),
    _fam(_R, C.STRONG_ALIGN_ERASURE, 1, 2, lambda M, L, a: (M - L * (2 - a), F(0))),
    _fam(_R, C.STRONG_ORTHOGONAL, 1, 2, lambda M, L, a: (M * a / 2, F(0))),
    _fam(_M, C.PRIVATE_ERASURE, 0, 1, lambda M, L, a: (M * (1 - a), (M - L) * a)),
    _fam(_M, C.ERASURE_ALL, 0, 1, lambda M, L, a: (F(0), M - L * a)),
    _fam(_M, C.ALIGNMENT, F(1, 2), F(2, 3), lambda M, L, a: (M * a, (M - L) * (2 - 3 * a))),
    _fam(_M, C.ALIGNMENT_ERASURE, F(1, 2), F(2, 3),
         lambda M, L, a: (F(0), M * a + (M - L) * (2 - 3 * a))),
    _fam(_M, C.HAN_KOBAYASHI, F(2, 3), 1, lambda M, L, a: (F(0), M * (1 - a / 2))),
    _fam(_M, C.HAN_KOBAYASHI_M, F(2, 3), 1, lambda M, L, a: (M * (1 - a / 2), F(0))),
    _fam(_M, C.STRONG_ALIGN, 1, 2, lambda M, L, a: (M * (a - 1), (M - L) * (2 - a))),
    _fam(_M, C.STRONG_ALIGN_ERASURE, 1, 2, lambda M, L, a: (F(0), M - L * (2 - a))),
    _fam(_M, C.STRONG_ORTHOGONAL, 1, 2, lambda M, L, a: (F(0), M * a / 2)),
    _fam(_M, C.STRONG_ORTHOGONAL_M, 1, 2, lambda M, L, a: (M * a / 2, F(0))),
)
del C


def corner_family(setup: Setup, corner: CornerId) -> CornerFamily:
    setup, corner = Setup(setup), CornerId(corner)
    for fam in CORNER_FAMILIES:
        if fam.setup is setup and fam.corner is corner:
            return fam
    raise RegimeError(f"corner {corner.value!r} does not exist in the {setup.value} setup")


def corner_families(setup: Setup, alpha=None) -> list[CornerFamily]:
    """Families of ``setup``, restricted to those achievable at ``alpha`` if given."""
    setup = Setup(setup)
    return [f for f in CORNER_FAMILIES
            if f.setup is setup and (alpha is None or f.valid(alpha))]


# ---------------------------------------------------------------------------
# Scheme container


@dataclass(eq=False)
class LinearScheme:
    """Linear encoder shared (or mirrored) by both transmitters.

    ``generators[(j, msg)]`` is the ``(q*T) x d_msg`` map from message
    symbols to transmitted levels of subcarrier ``j`` (row ``t*q + level``).
    ``generators_other`` holds user 2's maps when they differ from user 1's.
    """

    params: ChannelParams
    T: int
    dims: dict[Msg, int]
    generators: dict[tuple[int, Msg], np.ndarray]
    generators_other: dict[tuple[int, Msg], np.ndarray] | None = None
    name: str = ""
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        p = self.params
        self.dims = {msg: int(self.dims.get(msg, 0)) for msg in MSG_ORDER}
        for gens in filter(None, (self.generators, self.generators_other)):
            for j in range(p.M):
                for msg in MSG_ORDER:
                    G = gens.setdefault((j, msg), np.zeros((p.q * self.T, self.dims[msg]),
                                                           dtype=np.int64))
                    if G.shape != (p.q * self.T, self.dims[msg]):
                        raise ValueError(
                            f"generator ({j}, W{msg.value}) has shape {G.shape}, "
                            f"expected {(p.q * self.T, self.dims[msg])}")

    @property
    def symmetric(self) -> bool:
        return self.generators_other is None

    @property
    def d0(self) -> int:
        return self.dims[Msg.W0]

    @property
    def dL(self) -> int:
        return self.dims[Msg.WL]

    @property
    def dM(self) -> int:
        return self.dims[Msg.WM]

    def generator(self, j: int, msg: Msg, user: int = 1) -> np.ndarray:
        if user == 2 and self.generators_other is not None:
            return self.generators_other[(j, Msg(msg))]
        return self.generators[(j, Msg(msg))]

    def rate(self, msg: Msg) -> Fraction:
        """Field symbols per channel use (one level carries one symbol)."""
        return Fraction(self.dims[Msg(msg)], self.T)

    def bits_per_use(self, msg: Msg) -> Fraction:
        return self.rate(msg) * self.params.m

    def normalized_rate(self, msg: Msg) -> Fraction:
        return self.rate(msg) / self.params.n

    def point(self, setup: Setup) -> tuple[Fraction, Fraction]:
        """Normalised ``(x, y)`` rate pair on the axes of ``setup``."""
        xm, ym = Setup(setup).axes
        return self.normalized_rate(xm), self.normalized_rate(ym)

    def with_generator(self, j: int, msg: Msg, G: np.ndarray) -> "LinearScheme":
        gens = {key: val.copy() for key, val in self.generators.items()}
        gens[(j, Msg(msg))] = np.asarray(G, dtype=np.int64)
        other = None
        if self.generators_other is not None:
            other = {key: val.copy() for key, val in self.generators_other.items()}
        return LinearScheme(self.params, self.T, dict(self.dims), gens, other,
                            self.name, dict(self.meta))


class _Layout:
    """Accumulates generator entries while symbols are handed out."""

    def __init__(self, p: ChannelParams, T: int):
        self.p = p
        self.T = T
        self.counts = {msg: 0 for msg in MSG_ORDER}
        self.entries: list[tuple[int, int, Msg, int, int, int]] = []
        self.asymmetric = False

    def row(self, t: int, level: int) -> int:
        return t * self.p.q + level

    def new(self, msg: Msg, count: int = 1) -> list[int]:
        start = self.counts[msg]
        self.counts[msg] += count
        return list(range(start, start + count))

    def put(self, j, msg, row, col, coeff=1, user=0):
        if user:
            self.asymmetric = True
        if coeff:
            self.entries.append((user, j, msg, row, col, int(coeff)))

    def fresh(self, msg: Msg, levels, slots=None):
        slots = range(self.T) if slots is None else slots
        for j in range(self.p.M):
            for t in slots:
                for lev in levels:
                    (col,) = self.new(msg)
                    self.put(j, msg, self.row(t, lev), col)

    def coded(self, msg: Msg, levels, G_mds: np.ndarray, slots=None):
        slots = range(self.T) if slots is None else slots
        K = G_mds.shape[1]
        for t in slots:
            for lev in levels:
                cols = self.new(msg, K)
                for j in range(self.p.M):
                    for c in range(K):
                        self.put(j, msg, self.row(t, lev), cols[c], G_mds[j, c])

    def dense(self, msg: Msg, j: int, rows, A: np.ndarray):
        cols = self.new(msg, A.shape[1])
        for r_i, row in enumerate(rows):
            for c_i, col in enumerate(cols):
                self.put(j, msg, row, col, A[r_i, c_i])

    def build(self, name: str, **meta) -> LinearScheme:
        p, rows = self.p, self.p.q * self.T
        users = (1, 2) if self.asymmetric else (1,)
        gens = {u: {(j, msg): np.zeros((rows, self.counts[msg]), dtype=np.int64)
                    for j in range(p.M) for msg in MSG_ORDER} for u in users}
        for user, j, msg, row, col, coeff in self.entries:
            for u in users if user == 0 else (user,):
                gens[u][(j, msg)][row, col] = coeff
        return LinearScheme(p, self.T, dict(self.counts), gens[1],
                            gens.get(2), name, meta)


# ---------------------------------------------------------------------------
# Building blocks


@dataclass(frozen=True)
class BandLayout:
    """Band sizes (top to bottom) used by signal-scale alignment."""

    L1: int
    L2: int
    L3: int
    L4: int

    def ranges(self) -> tuple[range, range, range, range]:
        a = self.L1
        b = a + self.L2
        c = b + self.L3
        return range(0, a), range(a, b), range(b, c), range(c, c + self.L4)


def alignment_bands(p: ChannelParams) -> BandLayout:
    a = p.alpha
    if not F(1, 2) <= a <= F(2, 3):
        raise RegimeError(f"alignment needs 1/2 <= alpha <= 2/3, got alpha={a}")
    return BandLayout(p.levels(1 - a), p.levels(2 * a - 1),
                      p.levels(2 - 3 * a), p.levels(2 * a - 1))


def mds_generator(M: int, L: int, m: int = 8) -> np.ndarray:
    """Systematic ``M x (M-L)`` generator: any ``M-L`` rows are invertible.

    Repetition, identity and single-parity codes work over every field.
    Otherwise a (possibly extended) Vandermonde construction needs
    ``2^m >= M - 1``.
    """
    if not 0 <= L <= M:
        raise ValueError(f"L={L} outside [0, M]=[0, {M}]")
    K = M - L
    if K == 0:
        return np.zeros((M, 0), dtype=np.int64)
    if L == 0:
        return np.eye(M, dtype=np.int64)
    if K == 1:
        return np.ones((M, 1), dtype=np.int64)
    if L == 1:
        return np.vstack([np.eye(K, dtype=np.int64), np.ones((1, K), dtype=np.int64)])
    gf = get_field(m)
    if M > gf.order + 1:
        raise FieldTooSmallError(
            f"an ({M}, {K}) MDS code needs GF(2^m) with 2^m >= {M - 1}; got m={m}")
    V = np.zeros((M, K), dtype=np.int64)
    for i in range(min(M, gf.order)):
        for c in range(K):
            V[i, c] = gf.pow(i, c)
    if M == gf.order + 1:
        V[M - 1, K - 1] = 1
    return gf.matmul(V, gf.inverse(V[:K]))


def _single_carrier_ok(p: ChannelParams, T: int, G: np.ndarray, G_other=None) -> bool:
    """Own symbols decodable on one interfered subcarrier (and hence on a clean one)."""
    gf = get_field(p.m)
    own = direct_map(p, G, T)
    other = cross_map(p, G if G_other is None else G_other, T)
    return decodability_ranks(gf, own, other)[3]


def _time_division(lay: _Layout, msg: Msg):
    """User 1 owns slot 0, user 2 owns slot 1, all ``n`` levels each."""
    p = lay.p
    for j in range(p.M):
        cols = lay.new(msg, p.n)
        for lev, col in enumerate(cols):
            lay.put(j, msg, lay.row(0, lev), col, user=1)
            lay.put(j, msg, lay.row(1, lev), col, user=2)


def _random_common(p: ChannelParams, rows: list[int], d_common: int, private_rows: list[int],
                   seed: int, max_tries: int) -> tuple[np.ndarray, int]:
    """Seeded search for a shared dense block that decodes under interference."""
    gf = get_field(p.m)
    T = 2
    for attempt in range(max_tries):
        rng = np.random.default_rng([seed, attempt])
        A = gf.random_matrix((len(rows), d_common), rng)
        G = np.zeros((p.q * T, d_common + len(private_rows)), dtype=np.int64)
        G[rows, :d_common] = A
        for c, row in enumerate(private_rows):
            G[row, d_common + c] = 1
        if _single_carrier_ok(p, T, G):
            return A, attempt
    raise SchemeConstructionError(
        f"no verified generator in {max_tries} seeded tries for n={p.n}, k={p.k}, m={p.m}")


def _han_kobayashi(lay: _Layout, msg: Msg, seed: int, max_tries: int) -> dict:
    """Per subcarrier ``2n - k`` symbols over two slots.

    Private symbols sit on the bottom ``n - k`` levels, which never reach the
    other receiver. ``k`` common symbols are spread over the top ``k`` levels
    of both slots by a random shared map. At ``alpha = 1`` shared maps cannot
    separate the users, so the slots are split between them instead.
    """
    p = lay.p
    if p.k == p.n:
        _time_division(lay, msg)
        return {"construction": "time-division"}
    rows = [lay.row(t, lev) for t in range(2) for lev in range(p.k)]
    private_rows = [lay.row(t, lev) for t in range(2) for lev in range(p.k, p.n)]
    A, attempt = _random_common(p, rows, p.k, private_rows, seed, max_tries)
    for j in range(p.M):
        lay.dense(msg, j, rows, A)
        for row in private_rows:
            (col,) = lay.new(msg)
            lay.put(j, msg, row, col)
    return {"construction": "common-private", "seed": seed, "attempt": attempt}


def _strong_orthogonal(lay: _Layout, msg: Msg, seed: int, max_tries: int) -> dict:
    """Per subcarrier ``k`` symbols over two slots on the top ``n`` levels.

    Each receiver resolves both users' symbols jointly from its ``k`` levels.
    """
    p = lay.p
    if p.k == p.n:
        _time_division(lay, msg)
        return {"construction": "time-division"}
    rows = [lay.row(t, lev) for t in range(2) for lev in range(p.n)]
    A, attempt = _random_common(p, rows, p.k, [], seed, max_tries)
    for j in range(p.M):
        lay.dense(msg, j, rows, A)
    return {"construction": "joint-resolvable", "seed": seed, "attempt": attempt}


# ---------------------------------------------------------------------------
# Corner constructions


def build_corner_scheme(p: ChannelParams, setup: Setup, corner: CornerId,
                        seed: int = 0, max_tries: int = 64) -> LinearScheme:
    """Scheme realising one named corner point for ``p``.

    Raises ``RegimeError`` when the corner is not achievable at ``p.alpha``.
    The result should still be certified with :func:`bursty_ic.verifier.verify`.
    """
    setup, corner = Setup(setup), CornerId(corner)
    fam = corner_family(setup, corner)
    a = p.alpha
    if not fam.valid(a):
        raise RegimeError(
            f"{setup.value}/{corner.value} needs {fam.alpha_lo} <= alpha <= {fam.alpha_hi}, "
            f"got alpha={a}")
    n, k, M, L = p.n, p.k, p.M, p.L
    W0, WL, WM = Msg.W0, Msg.WL, Msg.WM
    C = CornerId
    name = f"{setup.value}/{corner.value}"

    one_slot = corner not in (C.HAN_KOBAYASHI, C.HAN_KOBAYASHI_M,
                              C.STRONG_ORTHOGONAL, C.STRONG_ORTHOGONAL_M)
    lay = _Layout(p, 1 if one_slot else 2)
    meta: dict = {}

    def mds():
        return mds_generator(M, L, p.m)

    if corner is C.TOP_LEVELS:
        lay.fresh(W0, range(n))
    elif corner is C.PRIVATE_SPLIT:
        lay.fresh(WL, range(n - k))
        lay.fresh(W0, range(n - k, n))
    elif corner is C.PRIVATE_ERASURE:
        lay.fresh(WM, range(n - k))
        lay.coded(WL, range(n - k, n), mds())
    elif corner is C.ERASURE_ALL:
        lay.fresh(WL, range(n - k))
        lay.coded(WL, range(n - k, n), mds())
    elif corner in (C.ALIGNMENT, C.ALIGNMENT_ERASURE):
        b1, _silent, b3, b4 = alignment_bands(p).ranges()
        meta["bands"] = alignment_bands(p)
        clean_msg = WM if (setup is Setup.RLRM and corner is C.ALIGNMENT) else WL
        lay.fresh(clean_msg, list(b1) + list(b4))
        if setup is Setup.R0RL and corner is C.ALIGNMENT:
            lay.fresh(W0, b3)
        else:
            lay.coded(WL, b3, mds())
    elif corner in (C.HAN_KOBAYASHI, C.HAN_KOBAYASHI_M):
        meta.update(_han_kobayashi(lay, WM if corner is C.HAN_KOBAYASHI_M else WL,
                                   seed, max_tries))
    elif corner in (C.STRONG_ORTHOGONAL, C.STRONG_ORTHOGONAL_M):
        meta.update(_strong_orthogonal(lay, WM if corner is C.STRONG_ORTHOGONAL_M else WL,
                                       seed, max_tries))
    elif corner is C.STRONG_ALIGN:
        top, rest = range(2 * n - k), range(2 * n - k, n)
        if setup is Setup.R0RL:
            lay.fresh(W0, top)
            lay.fresh(WL, rest)
        else:
            lay.coded(WL, top, mds())
            lay.fresh(WM, rest)
    elif corner is C.STRONG_ALIGN_ERASURE:
        lay.coded(WL, range(2 * n - k), mds())
        lay.fresh(WL, range(2 * n - k, n))
    else:  # pragma: no cover - enumeration is closed
        raise RegimeError(f"unhandled corner {corner}")
    return lay.build(name, setup=setup, corner=corner, **meta)


def split_scheme(p: ChannelParams, msg: Msg = Msg.WL) -> LinearScheme:
    """User 1 owns the first ``M/2`` subcarriers, user 2 the rest.

    Neither user ever sees interference, so ``msg`` gets ``(M/2) n`` symbols
    per slot under every configuration.
    """
    if p.M % 2:
        raise ValueError(f"an exact symmetric split needs M even, got M={p.M}")
    msg = Msg(msg)
    lay = _Layout(p, 1)
    half = p.M // 2
    for j in range(half):
        cols = lay.new(msg, p.n)
        for lev, col in enumerate(cols):
            lay.put(j, msg, lay.row(0, lev), col, user=1)
            lay.put(j + half, msg, lay.row(0, lev), col, user=2)
    return lay.build(f"split/{msg.value}")


# ---------------------------------------------------------------------------
# Plain-text serialization

FORMAT_TAG = "bursty-ic-scheme 1"


def dumps(s: LinearScheme) -> str:
    """Deterministic text form: header lines then hex generator rows."""
    p = s.params
    width = max(1, (p.m + 3) // 4)
    out = [FORMAT_TAG,
           f"field {p.m}",
           f"params n={p.n} k={p.k} M={p.M} L={p.L}",
           f"T {s.T}",
           f"dims {s.d0} {s.dL} {s.dM}"]
    if s.name:
        out.append(f"name {s.name}")
    users = (1,) if s.symmetric else (1, 2)
    for u in users:
        out.append(f"user {u}")
        for j in range(p.M):
            for msg in MSG_ORDER:
                G = s.generator(j, msg, u)
                if G.shape[1] == 0:
                    continue
                out.append(f"gen {j} {msg.value} {G.shape[0]} {G.shape[1]}")
                for row in G:
                    out.append(" ".join(f"{int(v):0{width}x}" for v in row))
    out.append("end")
    return "\n".join(out) + "\n"


def loads(text: str) -> LinearScheme:
    lines = [ln.strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln and not ln.startswith("#")]
    if not lines or lines[0] != FORMAT_TAG:
        raise ValueError("not a scheme file (missing header)")
    head: dict[str, str] = {}
    i = 1
    while i < len(lines) and not lines[i].startswith(("user", "end")):
        key, _, rest = lines[i].partition(" ")
        head[key] = rest
        i += 1
    try:
        kv = dict(item.split("=") for item in head["params"].split())
        p = ChannelParams(n=int(kv["n"]), k=int(kv["k"]), M=int(kv["M"]), L=int(kv["L"]),
                          m=int(head["field"]))
        T = int(head["T"])
        d0, dL, dM = (int(v) for v in head["dims"].split())
    except (KeyError, ValueError) as exc:
        raise ValueError(f"bad scheme header: {exc}") from exc
    dims = {Msg.W0: d0, Msg.WL: dL, Msg.WM: dM}
    gens: dict[int, dict] = {}
    user = None
    while i < len(lines) and lines[i] != "end":
        tok = lines[i].split()
        if tok[0] == "user":
            user = int(tok[1])
            gens[user] = {}
            i += 1
        elif tok[0] == "gen":
            if user is None:
                raise ValueError("generator block before any 'user' line")
            j, msg, rows, cols = int(tok[1]), Msg(tok[2]), int(tok[3]), int(tok[4])
            block = lines[i + 1:i + 1 + rows]
            if len(block) != rows:
                raise ValueError(f"truncated generator ({j}, W{msg.value})")
            G = np.array([[int(v, 16) for v in row.split()] for row in block],
                         dtype=np.int64).reshape(rows, cols)
            get_field(p.m).check(G)
            gens[user][(j, msg)] = G
            i += 1 + rows
        else:
            raise ValueError(f"unexpected line: {lines[i]!r}")
    if i >= len(lines):
        raise ValueError("scheme file missing 'end'")
    if 1 not in gens:
        raise ValueError("scheme file has no generators for user 1")
    return LinearScheme(p, T, dims, gens[1], gens.get(2), head.get("name", ""))
