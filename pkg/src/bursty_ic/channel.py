"""
Parallel two-user linear deterministic interference channel.

Each subcarrier carries a ``q``-level signal per time slot (level 0 is the
top). The direct link shifts the own signal down by ``q - n`` levels and an
active cross link adds the other user's signal shifted down by ``q - k``.
Interference presence is fixed for the whole block and unknown to the
transmitters.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .field import DEFAULT_DEGREE


class IntegralityError(ValueError):
    """A requested level split is not a whole number of levels."""


@dataclass(frozen=True)
class ChannelParams:
    """One problem instance.

    ``n`` and ``k`` are the direct and cross strengths in levels, ``M`` the
    number of subcarriers per user, ``L`` the interfered-subcarrier count of
    the middle decode class, and ``m`` the field degree.
    """

    n: int
    k: int
    M: int
    L: int
    m: int = DEFAULT_DEGREE

    def __post_init__(self):
        for name in ("n", "k", "M", "L", "m"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or isinstance(value, bool):
                raise TypeError(f"{name} must be an integer, got {value!r}")
        if self.n < 1:
            raise ValueError(f"direct strength n must be >= 1, got {self.n}")
        if not 0 <= self.k <= 2 * self.n:
            raise ValueError(
                f"cross strength k={self.k} outside [0, 2n]=[0, {2 * self.n}]")
        if self.M < 1:
            raise ValueError(f"need at least one subcarrier, got M={self.M}")
        if not 1 <= self.L <= self.M:
            raise ValueError(f"L={self.L} outside [1, M]=[1, {self.M}]")
        if not 1 <= self.m <= 16:
            raise ValueError(f"field degree m={self.m} outside [1, 16]")

    @property
    def q(self) -> int:
        return max(self.n, self.k)

    @property
    def alpha(self) -> Fraction:
        return Fraction(self.k, self.n)

    @classmethod
    def from_alpha(cls, alpha, M: int, L: int, n: int | None = None,
                   m: int = DEFAULT_DEGREE) -> "ChannelParams":
        """Instance with ``k / n == alpha``; ``n`` defaults to the smallest valid one."""
        alpha = Fraction(alpha)
        if n is None:
            n = alpha.denominator
        k = alpha * n
        if k.denominator != 1:
            raise IntegralityError(
                f"alpha={alpha} needs n to be a multiple of {alpha.denominator} "
                f"(got n={n}); try n={lcm_multiple(n, alpha.denominator)}")
        return cls(n=n, k=int(k), M=M, L=L, m=m)

    def levels(self, fraction_of_n) -> int:
        """``fraction_of_n * n`` as an integer level count, or raise."""
        value = Fraction(fraction_of_n) * self.n
        if value.denominator != 1:
            need = value.denominator
            raise IntegralityError(
                f"{fraction_of_n}*n = {value} is not integral for n={self.n}; "
                f"scale n by {need} (n={self.n * need}, k={self.k * need})")
        if value < 0:
            raise ValueError(f"{fraction_of_n}*n is negative for alpha={self.alpha}")
        return int(value)


def lcm_multiple(n: int, d: int) -> int:
    return n * d // math.gcd(n, d)


@dataclass(frozen=True)
class ReceiverConfig:
    """Interference pattern at one receiver: 0 = interfered, 1 = clean."""

    mask: tuple[int, ...]

    def __post_init__(self):
        mask = tuple(int(b) for b in self.mask)
        if any(b not in (0, 1) for b in mask):
            raise ValueError(f"mask entries must be 0/1, got {self.mask}")
        object.__setattr__(self, "mask", mask)

    @classmethod
    def from_string(cls, bits: str) -> "ReceiverConfig":
        return cls(tuple(int(c) for c in bits.strip()))

    @classmethod
    def all_clean(cls, M: int) -> "ReceiverConfig":
        return cls((1,) * M)

    @classmethod
    def all_interfered(cls, M: int) -> "ReceiverConfig":
        return cls((0,) * M)

    @property
    def M(self) -> int:
        return len(self.mask)

    @property
    def n_interfered(self) -> int:
        return self.mask.count(0)

    def interfered(self, j: int) -> bool:
        return self.mask[j] == 0

    def permuted(self, perm) -> "ReceiverConfig":
        """Config seen after relabelling subcarrier ``j`` as ``perm[j]``."""
        out = [0] * self.M
        for j, pj in enumerate(perm):
            out[pj] = self.mask[j]
        return ReceiverConfig(tuple(out))

    def __str__(self) -> str:
        return "".join(str(b) for b in self.mask)


def shift_down(x: np.ndarray, s: int) -> np.ndarray:
    """``G^s x`` on a ``q x T`` block: move every level down ``s``, zero-fill the top."""
    x = np.asarray(x, dtype=np.int64)
    out = np.zeros_like(x)
    q = x.shape[0]
    if s < q:
        out[s:] = x[:q - s]
    return out


def apply_channel(p: ChannelParams, x_own, x_other, interfered: bool) -> np.ndarray:
    """Received ``q x T`` block on one subcarrier."""
    x_own = np.asarray(x_own, dtype=np.int64)
    x_other = np.asarray(x_other, dtype=np.int64)
    if x_own.ndim == 1:
        x_own = x_own[:, None]
    if x_other.ndim == 1:
        x_other = x_other[:, None]
    if x_own.shape[0] != p.q or x_other.shape != x_own.shape:
        raise ValueError(
            f"signals must be {p.q} x T, got {x_own.shape} and {x_other.shape}")
    y = shift_down(x_own, p.q - p.n)
    if interfered:
        y = y ^ shift_down(x_other, p.q - p.k)
    return y


def _shift_rows(G: np.ndarray, q: int, T: int, s: int) -> np.ndarray:
    G = np.asarray(G, dtype=np.int64)
    blocks = G.reshape(T, q, G.shape[1])
    out = np.zeros_like(blocks)
    if s < q:
        out[:, s:, :] = blocks[:, :q - s, :]
    return out.reshape(T * q, G.shape[1])


def direct_map(p: ChannelParams, G: np.ndarray, T: int) -> np.ndarray:
    """Received rows of a ``(q*T) x d`` generator through the direct link.

    Rows are slot-major: row ``t*q + level``.
    """
    return _shift_rows(G, p.q, T, p.q - p.n)


def cross_map(p: ChannelParams, G: np.ndarray, T: int) -> np.ndarray:
    """Received rows of the other user's generator through an active cross link."""
    return _shift_rows(G, p.q, T, p.q - p.k)


def receive(p: ChannelParams, cfg: ReceiverConfig, X_own, X_other) -> list[np.ndarray]:
    """Apply the channel on every subcarrier under a static configuration."""
    if not (len(X_own) == len(X_other) == cfg.M == p.M):
        raise ValueError(
            f"need {p.M} subcarrier signals per user and a length-{p.M} mask")
    return [apply_channel(p, xo, xi, cfg.interfered(j))
            for j, (xo, xi) in enumerate(zip(X_own, X_other))]


def circulant_configs(M: int, L: int) -> list[ReceiverConfig]:
    """Rows of the circulant family: ``M - L`` ones then ``L`` zeros, cyclically shifted."""
    if not 1 <= L <= M:
        raise ValueError(f"L={L} outside [1, M]=[1, {M}]")
    first = [1] * (M - L) + [0] * L
    return [ReceiverConfig(tuple(first[-j:] + first[:-j]) if j else tuple(first))
            for j in range(M)]


def all_configs(M: int, L: int) -> list[ReceiverConfig]:
    """Every mask with exactly ``L`` zeros, in lexicographic order."""
    if not 0 <= L <= M:
        raise ValueError(f"L={L} outside [0, M]=[0, {M}]")
    out = []
    for bits in itertools.product((0, 1), repeat=M):
        if bits.count(0) == L:
            out.append(ReceiverConfig(bits))
    return out
