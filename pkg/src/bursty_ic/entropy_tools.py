"""
Numerical check of the sliding-window subset entropy inequality.

For ``M`` jointly distributed variables, the average entropy of the ``M``
cyclic windows of ``w`` consecutive variables, divided by ``w``, can only
shrink as ``w`` grows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

import numpy as np

TOLERANCE = 1e-9
MAX_TABLE = 10_000


class PMFError(ValueError):
    """Malformed or unnormalised probability table."""


@dataclass(frozen=True, eq=False)
class JointPMF:
    """Joint pmf of ``M`` finite-alphabet variables.

    ``table`` has one axis per variable. ``exact`` keeps the original
    rational entries when the pmf was built from :class:`fractions.Fraction`
    values; entropies are always computed in double precision.
    """

    table: np.ndarray
    exact: tuple | None = None

    def __post_init__(self):
        t = np.asarray(self.table, dtype=float)
        if t.ndim < 1:
            raise PMFError("pmf needs at least one variable")
        if np.any(t < 0):
            raise PMFError("negative probability")
        if self.exact is not None:
            if sum(self.exact) != 1:
                raise PMFError(f"rational pmf sums to {sum(self.exact)}, not 1")
        elif abs(t.sum() - 1.0) > 1e-12:
            raise PMFError(f"pmf sums to {t.sum()!r}, not 1 within 1e-12")
        object.__setattr__(self, "table", t)

    @classmethod
    def from_fractions(cls, entries, shape) -> "JointPMF":
        """Exact pmf from a flat, row-major sequence of rationals."""
        entries = tuple(Fraction(e) for e in entries)
        if len(entries) != math.prod(shape):
            raise PMFError(f"{len(entries)} entries for shape {tuple(shape)}")
        return cls(np.array([float(e) for e in entries]).reshape(shape), entries)

    @property
    def M(self) -> int:
        return self.table.ndim

    @property
    def alphabets(self) -> tuple[int, ...]:
        return self.table.shape

    def marginal(self, keep) -> np.ndarray:
        keep = sorted(set(int(i) % self.M for i in keep))
        drop = tuple(i for i in range(self.M) if i not in keep)
        return self.table.sum(axis=drop)

    def entropy(self, subset=None) -> float:
        """Entropy in bits of the variables in ``subset`` (all by default)."""
        p = self.table if subset is None else self.marginal(subset)
        p = p[p > 0]
        return float(-(p * np.log2(p)).sum())


def window_entropy_sum(p: JointPMF, w: int) -> float:
    """Sum over ``j`` of the entropy of variables ``j, j+1, ..., j+w-1`` (mod ``M``)."""
    if not 1 <= w <= p.M:
        raise ValueError(f"window size {w} outside [1, M]=[1, {p.M}]")
    return sum(p.entropy(range(j, j + w)) for j in range(p.M))


def sliding_window_check(p: JointPMF, tol: float = TOLERANCE) -> tuple[bool, list[float]]:
    """Chain ``window_entropy_sum(p, w) / w`` for ``w = 1..M`` and whether it never rises."""
    chain = [window_entropy_sum(p, w) / w for w in range(1, p.M + 1)]
    holds = all(b <= a + tol for a, b in zip(chain, chain[1:]))
    return holds, chain


def random_pmf(M: int, alphabets, seed: int) -> JointPMF:
    """Seeded random pmf: normalised standard exponentials, one per table cell."""
    if isinstance(alphabets, int):
        alphabets = (alphabets,) * M
    alphabets = tuple(int(a) for a in alphabets)
    if len(alphabets) != M:
        raise ValueError(f"need {M} alphabet sizes, got {len(alphabets)}")
    if any(a < 1 for a in alphabets):
        raise ValueError(f"alphabet sizes must be positive, got {alphabets}")
    if math.prod(alphabets) > MAX_TABLE:
        raise ValueError(f"product alphabet {math.prod(alphabets)} exceeds {MAX_TABLE}")
    rng = np.random.default_rng(seed)
    t = rng.standard_exponential(alphabets)
    return JointPMF(t / t.sum())


def fuzz(count: int, seed: int = 0, Ms=(2, 3, 4), max_alphabet: int = 3):
    """Run the sliding-window check on ``count`` random pmfs.

    Returns the list of ``(index, chain)`` pairs that violate it.
    """
    rng = np.random.default_rng(seed)
    bad = []
    for i in range(count):
        M = int(rng.choice(Ms))
        alphabets = tuple(int(a) for a in rng.integers(1, max_alphabet + 1, size=M))
        p = random_pmf(M, alphabets, seed=[seed, i])
        ok, chain = sliding_window_check(p)
        if not ok:
            bad.append((i, chain))
    return bad


def parse_pmf(text: str) -> JointPMF:
    """Read a pmf from lines ``i1 i2 ... iM  prob``.

    Indices may be separated by spaces or commas; probabilities may be
    decimals or fractions like ``1/3``. Missing cells are zero. Blank lines
    and ``#`` comments are ignored. The pmf is exact when every probability
    is written as a fraction or terminating decimal.
    """
    cells: dict[tuple[int, ...], Fraction] = {}
    width = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].replace(",", " ").strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) < 2:
            raise PMFError(f"line {lineno}: need indices and a probability")
        try:
            idx = tuple(int(s) for s in parts[:-1])
            prob = Fraction(parts[-1])
        except ValueError as exc:
            raise PMFError(f"line {lineno}: {exc}") from None
        if width is None:
            width = len(idx)
        elif len(idx) != width:
            raise PMFError(f"line {lineno}: expected {width} indices, got {len(idx)}")
        if any(i < 0 for i in idx):
            raise PMFError(f"line {lineno}: negative index")
        if idx in cells:
            raise PMFError(f"line {lineno}: duplicate cell {idx}")
        cells[idx] = prob
    if not cells:
        raise PMFError("empty pmf")
    shape = tuple(max(idx[d] for idx in cells) + 1 for d in range(width))
    if math.prod(shape) > MAX_TABLE:
        raise PMFError(f"table of shape {shape} exceeds {MAX_TABLE} cells")
    flat = [Fraction(0)] * math.prod(shape)
    for idx, prob in cells.items():
        flat[int(np.ravel_multi_index(idx, shape))] = prob
    return JointPMF.from_fractions(flat, shape)


def load_pmf(path) -> JointPMF:
    return parse_pmf(Path(path).read_text())
