"""
Exact decodability certification for linear schemes.

A receiver sees ``y = A_dec w + A_nuis v`` where ``w`` are the own symbols it
must recover, and ``v`` collects own symbols it may ignore plus everything
the other transmitter sends over active cross links. ``w`` is recoverable
for every ``v`` iff ``A_dec`` has full column rank and its column space
meets that of ``A_nuis`` only in zero. For a deterministic channel this is
zero-error decoding per block.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import ChannelParams, ReceiverConfig, all_configs, cross_map, direct_map
from .field import decodability_ranks, get_field
from .schemes import (LinearScheme, Msg, RegimeError, SchemeConstructionError, Setup,
                      _Layout, build_corner_scheme, corner_families)


class DecodeClass(str, enum.Enum):
    ALL_INTERFERED = "all-interfered"
    EXACTLY_L = "exactly-L"
    INTERFERENCE_FREE = "interference-free"

    @property
    def required(self) -> tuple[Msg, ...]:
        return {
            DecodeClass.ALL_INTERFERED: (Msg.WM,),
            DecodeClass.EXACTLY_L: (Msg.WL, Msg.WM),
            DecodeClass.INTERFERENCE_FREE: (Msg.W0, Msg.WL, Msg.WM),
        }[self]

    def configs(self, M: int, L: int) -> list[ReceiverConfig]:
        if self is DecodeClass.ALL_INTERFERED:
            return [ReceiverConfig.all_interfered(M)]
        if self is DecodeClass.EXACTLY_L:
            return all_configs(M, L)
        return [ReceiverConfig.all_clean(M)]


@dataclass(frozen=True)
class CheckResult:
    cls: DecodeClass
    cfg: ReceiverConfig
    receiver: int
    passed: bool
    rank_dec: int
    rank_nuis: int
    rank_joint: int
    n_dec: int

    def line(self) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        return (f"{self.cls.value:<17} mask={self.cfg} rx={self.receiver} "
                f"dec={self.rank_dec}/{self.n_dec} nuis={self.rank_nuis} "
                f"joint={self.rank_joint} {verdict}")


@dataclass
class VerifyReport:
    scheme_name: str
    results: list[CheckResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    @property
    def failures(self) -> list[CheckResult]:
        return [r for r in self.results if not r.passed]

    def __bool__(self) -> bool:
        return self.passed

    def lines(self) -> list[str]:
        out = [r.line() for r in self.results]
        out.append(f"overall {'PASS' if self.passed else 'FAIL'}")
        return out

    def __str__(self) -> str:
        return "\n".join(self.lines())


def assemble_maps(s: LinearScheme, cfg: ReceiverConfig, cls: DecodeClass,
                  receiver: int = 1) -> tuple[np.ndarray, np.ndarray]:
    """Stacked received maps ``(A_dec, A_other)`` over all subcarriers and slots.

    Rows are subcarrier-major, then slot, then level. Columns of ``A_dec``
    are the required own symbols in ``W0, WL, WM`` order; ``A_other`` holds
    the remaining own symbols followed, if any subcarrier is interfered, by
    every symbol of the other user.
    """
    p = s.params
    if cfg.M != p.M:
        raise ValueError(f"config has {cfg.M} subcarriers, scheme has {p.M}")
    cls = DecodeClass(cls)
    own_user, other_user = (1, 2) if receiver == 1 else (2, 1)
    req = [m for m in cls.required if s.dims[m]]
    rest = [m for m in (Msg.W0, Msg.WL, Msg.WM) if m not in cls.required and s.dims[m]]
    any_cross = cfg.n_interfered > 0
    other_msgs = [m for m in (Msg.W0, Msg.WL, Msg.WM) if s.dims[m]] if any_cross else []

    rows = p.q * s.T
    dec_blocks, nuis_blocks = [], []
    for j in range(p.M):
        dec_blocks.append([direct_map(p, s.generator(j, m, own_user), s.T) for m in req])
        nb = [direct_map(p, s.generator(j, m, own_user), s.T) for m in rest]
        for m in other_msgs:
            G = s.generator(j, m, other_user)
            nb.append(cross_map(p, G, s.T) if cfg.interfered(j) else np.zeros_like(G))
        nuis_blocks.append(nb)

    def stack(blocks, msgs_per_block):
        width = sum(s.dims[m] for m in msgs_per_block)
        if not blocks[0]:
            return np.zeros((rows * p.M, width), dtype=np.int64)
        return np.vstack([np.hstack(b) for b in blocks])

    A_dec = stack(dec_blocks, req)
    A_other = stack(nuis_blocks, rest + other_msgs)
    return A_dec, A_other


def check(s: LinearScheme, cfg: ReceiverConfig, cls: DecodeClass,
          receiver: int = 1) -> CheckResult:
    A_dec, A_other = assemble_maps(s, cfg, cls, receiver)
    r_dec, r_nuis, r_joint, ok = decodability_ranks(get_field(s.params.m), A_dec, A_other)
    return CheckResult(DecodeClass(cls), cfg, receiver, ok, r_dec, r_nuis, r_joint,
                       A_dec.shape[1])


def verify(s: LinearScheme, stop_on_failure: bool = False) -> VerifyReport:
    """Check every decode class on every configuration it covers.

    Mirrored (asymmetric) schemes are checked at both receivers.
    """
    p = s.params
    receivers = (1,) if s.symmetric else (1, 2)
    report = VerifyReport(s.name)
    for cls in DecodeClass:
        for cfg in cls.configs(p.M, p.L):
            for rx in receivers:
                res = check(s, cfg, cls, rx)
                report.results.append(res)
                if stop_on_failure and not res.passed:
                    return report
    return report


def passes(s: LinearScheme) -> bool:
    return verify(s, stop_on_failure=True).passed


def submask_check(s: LinearScheme, rng: np.random.Generator | None = None,
                  samples: int = 8) -> bool:
    """Messages needed under ``L`` interfered subcarriers survive fewer of them.

    Samples masks whose interfered set is a strict subset of an ``L``-set.
    """
    p = s.params
    rng = np.random.default_rng(0) if rng is None else rng
    full = all_configs(p.M, p.L)
    receivers = (1,) if s.symmetric else (1, 2)
    for _ in range(samples):
        base = full[int(rng.integers(len(full)))]
        zeros = [j for j in range(p.M) if base.interfered(j)]
        keep = int(rng.integers(len(zeros)))
        subset = set(rng.choice(zeros, size=keep, replace=False).tolist()) if keep else set()
        cfg = ReceiverConfig(tuple(0 if j in subset else 1 for j in range(p.M)))
        for rx in receivers:
            if not check(s, cfg, DecodeClass.EXACTLY_L, rx).passed:
                return False
    return True


# ---------------------------------------------------------------------------
# Toy example oracle: M = 2, n = k = 1 over GF(2)


def _subspaces(dim: int, k: int):
    """All ``k``-dimensional subspaces of GF(2)^dim as RREF bases (rows)."""
    for pivots in itertools.combinations(range(dim), k):
        free = [(r, c) for r, p in enumerate(pivots) for c in range(p + 1, dim)
                if c not in pivots]
        for bits in itertools.product((0, 1), repeat=len(free)):
            B = np.zeros((k, dim), dtype=np.int64)
            for r, p in enumerate(pivots):
                B[r, p] = 1
            for (r, c), b in zip(free, bits):
                B[r, c] = b
            yield B


def toy_params() -> ChannelParams:
    return ChannelParams(n=1, k=1, M=2, L=1, m=1)


def _toy_scheme(T: int, E0: np.ndarray, EL: np.ndarray) -> LinearScheme:
    """Columns of ``E0``/``EL`` are ``2T`` vectors: subcarrier 0 slots, then subcarrier 1."""
    p = toy_params()
    gens = {}
    for j in range(2):
        gens[(j, Msg.W0)] = E0[j * T:(j + 1) * T]
        gens[(j, Msg.WL)] = EL[j * T:(j + 1) * T]
    return LinearScheme(p, T, {Msg.W0: E0.shape[1], Msg.WL: EL.shape[1]}, gens,
                        name="toy")


def toy_oracle(max_T: int = 2) -> set[tuple[Fraction, Fraction]]:
    """Every ``(R1, R0)`` reached by a verified symmetric linear toy scheme.

    Enumerates pairs of column spaces (W0 span, W_L span) in reduced form for
    each block length ``T <= max_T``; decodability depends only on the spans.
    """
    if not 1 <= max_T <= 2:
        raise ValueError(f"max_T must be 1 or 2 (search-space guard), got {max_T}")
    gf = get_field(1)
    found: set[tuple[Fraction, Fraction]] = set()
    for T in range(1, max_T + 1):
        dim = 2 * T
        spaces = {d: [B.T for B in _subspaces(dim, d)] for d in range(dim + 1)}
        for dL in range(dim + 1):
            for d0 in range(dim + 1 - dL):
                pair = (Fraction(dL, T), Fraction(d0, T))
                if pair in found:
                    continue
                for EL in spaces[dL]:
                    hit = False
                    for E0 in spaces[d0]:
                        if gf.rank(np.hstack([E0, EL])) < d0 + dL:
                            continue
                        if passes(_toy_scheme(T, E0, EL)):
                            hit = True
                            break
                    if hit:
                        found.add(pair)
                        break
    return found


# ---------------------------------------------------------------------------
# Randomized falsification probe


@dataclass
class SearchResult:
    best: int
    rate: Fraction
    scheme: LinearScheme | None
    evaluations: int
    budget_exhausted: bool
    source: str = ""


def _free_msg(setup: Setup, fixed: dict) -> Msg:
    x, y = Setup(setup).axes
    free = [m for m in (x, y) if m not in fixed]
    if len(free) != 1:
        raise ValueError(f"fix exactly one of W{x.value}, W{y.value}; got {sorted(fixed)}")
    return free[0]


def _truncate(s: LinearScheme, dims: dict[Msg, int]) -> LinearScheme:
    """Drop trailing symbols; a decodable message stays decodable when shortened."""
    def cut(gens):
        return {(j, m): G[:, :dims[m]].copy() for (j, m), G in gens.items()}
    other = cut(s.generators_other) if s.generators_other is not None else None
    return LinearScheme(s.params, s.T, dict(dims), cut(s.generators), other, s.name)


def max_rate_search(p: ChannelParams, setup: Setup, fixed: dict, seed: int = 0,
                    trials: int = 200, T: int = 1, max_unknowns: int = 24) -> SearchResult:
    """Best verified dimension of the free message with the other one pinned.

    ``fixed`` maps one message of ``setup`` to its symbol count per block of
    ``T`` slots. Candidates are the closed corner constructions (shortened to
    fit) plus seeded random sparse generators. Nothing is claimed optimal.
    """
    setup = Setup(setup)
    fixed = {Msg(k): int(v) for k, v in fixed.items()}
    free = _free_msg(setup, fixed)
    (pinned, d_pinned), = fixed.items()
    cap = p.M * p.n * T - d_pinned
    if 2 * (cap + d_pinned) > max_unknowns:
        cap = max(0, max_unknowns // 2 - d_pinned)
    best, best_scheme, source = -1, None, ""
    evaluations = 0

    for fam in corner_families(setup, p.alpha):
        try:
            s = build_corner_scheme(p, setup, fam.corner, seed=seed)
        except (RegimeError, SchemeConstructionError, ValueError):
            continue
        if s.T != T or s.dims[pinned] < d_pinned:
            continue
        d_free = min(s.dims[free], cap)
        if d_free <= best:
            continue
        dims = {m: 0 for m in Msg}
        dims[pinned], dims[free] = d_pinned, d_free
        cand = _truncate(s, dims)
        evaluations += 1
        if passes(cand):
            best, best_scheme, source = d_free, cand, fam.corner.value

    rng = np.random.default_rng(seed)
    gf = get_field(p.m)
    for _ in range(trials):
        if best >= cap:
            break
        d_free = int(rng.integers(best + 1, cap + 1))
        lay = _Layout(p, T)
        for msg, d in ((pinned, d_pinned), (free, d_free)):
            if not d:
                continue
            for j in range(p.M):
                support = rng.random((p.n * T, d)) < 0.5
                A = gf.random_matrix((p.n * T, d), rng) * support
                rows = [lay.row(t, lev) for t in range(T) for lev in range(p.n)]
                lay.dense(msg, j, rows, A)
                if j < p.M - 1:
                    lay.counts[msg] -= d
        evaluations += 1
        cand = lay.build("random")
        if passes(cand):
            best, best_scheme, source = d_free, cand, "random"
    exhausted = best < cap
    best = max(best, 0)
    return SearchResult(best, Fraction(best, T), best_scheme, evaluations, exhausted, source)
