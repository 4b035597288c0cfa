"""
Arithmetic over GF(2^m) and dense linear algebra on numpy arrays.

Field elements are integers in ``[0, 2^m)``; bit ``i`` is the coefficient of
``x^i`` in the polynomial basis. Addition is XOR, multiplication goes through
log/antilog tables built once per field. Matrices are plain 2-D ``int64``
numpy arrays whose entries all belong to one field.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

# One fixed irreducible polynomial per degree (bit e set for x^e). m = 8 is
# the AES polynomial x^8 + x^4 + x^3 + x + 1, which is irreducible but not
# primitive, so the log tables use the smallest generator instead of x.
IRREDUCIBLE_POLYS = {
    1: 0b11,
    2: 0b111,
    3: 0b1011,
    4: 0b10011,
    5: 0b100101,
    6: 0b1000011,
    7: 0b10000011,
    8: 0x11B,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}

DEFAULT_DEGREE = 8


class FieldMismatchError(ValueError):
    """Raised when elements or matrices from different fields are combined."""


def _clmul_mod(a: int, b: int, poly: int, m: int) -> int:
    out = 0
    while b:
        if b & 1:
            out ^= a
        b >>= 1
        a <<= 1
        if a >> m:
            a ^= poly
    return out


class GF2m:
    """The field GF(2^m) for ``1 <= m <= 16``.

    Parameters
    ----------
    m : int
        Extension degree.
    poly : int, optional
        Irreducible polynomial including the ``x^m`` bit. Defaults to the
        fixed table entry for ``m``.
    """

    def __init__(self, m: int, poly: int | None = None):
        if not 1 <= m <= 16:
            raise ValueError(f"extension degree must be in [1, 16], got {m}")
        self.m = m
        self.poly = IRREDUCIBLE_POLYS[m] if poly is None else poly
        if self.poly >> m != 1:
            raise ValueError(f"polynomial 0x{self.poly:x} does not have degree {m}")
        self.order = 1 << m
        self._build_tables()

    def _build_tables(self) -> None:
        # A first return to 1 after exactly 2^m - 1 steps means every nonzero
        # element is a unit, i.e. the polynomial is irreducible.
        group = self.order - 1
        exp = np.zeros(2 * group, dtype=np.int64)
        for g in range(1, self.order):
            x = 1
            for i in range(group):
                exp[i] = x
                x = _clmul_mod(x, g, self.poly, self.m)
                if x == 1 or x == 0:
                    break
            if x == 1 and i == group - 1:
                break
        else:
            raise ValueError(f"0x{self.poly:x} is not irreducible over GF(2)")
        exp[group:] = exp[:group]
        log = np.zeros(self.order, dtype=np.int64)
        log[exp[:group]] = np.arange(group)
        self.generator = g
        self._exp = exp
        self._log = log

    def __repr__(self) -> str:
        return f"GF2m(m={self.m}, poly=0x{self.poly:x})"

    def __eq__(self, other) -> bool:
        return isinstance(other, GF2m) and (self.m, self.poly) == (other.m, other.poly)

    def __hash__(self) -> int:
        return hash((self.m, self.poly))

    # -- element-wise arithmetic (scalars or arrays) -------------------------

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        out = self._exp[self._log[a] + self._log[b]]
        out = np.where((a == 0) | (b == 0), 0, out)
        return out if out.ndim else int(out)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("0 has no inverse in GF(2^m)")
        out = self._exp[(self.order - 1 - self._log[a]) % (self.order - 1)]
        return out if out.ndim else int(out)

    def pow(self, a: int, e: int) -> int:
        if a == 0:
            return 0 if e else 1
        return int(self._exp[(int(self._log[a]) * e) % (self.order - 1)])

    # -- matrices ------------------------------------------------------------

    def check(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        if A.size and (A.min() < 0 or A.max() >= self.order):
            raise FieldMismatchError(f"entries outside GF(2^{self.m})")
        return A

    def matmul(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        B = np.asarray(B, dtype=np.int64)
        if A.shape[1] != B.shape[0]:
            raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
        out = np.zeros((A.shape[0], B.shape[1]), dtype=np.int64)
        for i in range(A.shape[1]):
            out ^= self.mul(A[:, i:i + 1], B[i:i + 1, :])
        return out

    def rref(self, A, max_pivot_col: int | None = None):
        """Reduced row-echelon form.

        Returns ``(R, pivots)``. Pivots are only searched in the first
        ``max_pivot_col`` columns when given; row operations still span the
        full width.
        """
        R = np.array(A, dtype=np.int64, copy=True)
        if R.ndim != 2:
            raise ValueError("expected a 2-D matrix")
        rows, cols = R.shape
        limit = cols if max_pivot_col is None else max_pivot_col
        pivots: list[int] = []
        r = 0
        for c in range(limit):
            if r == rows:
                break
            nz = np.flatnonzero(R[r:, c])
            if nz.size == 0:
                continue
            p = r + int(nz[0])
            if p != r:
                R[[r, p]] = R[[p, r]]
            lead = int(R[r, c])
            if lead != 1:
                R[r] = self.mul(R[r], self.inv(lead))
            col = R[:, c].copy()
            col[r] = 0
            hit = np.flatnonzero(col)
            if hit.size:
                R[hit] ^= self.mul(col[hit, None], R[r][None, :])
            pivots.append(c)
            r += 1
        return R, pivots

    def rank(self, A) -> int:
        A = np.asarray(A, dtype=np.int64)
        if A.size == 0:
            return 0
        A = A[np.any(A != 0, axis=1)]
        if A.shape[0] > A.shape[1]:
            A = A.T
        return len(self.rref(A)[1])

    def split_rank(self, A_first, A_second) -> tuple[int, int]:
        """Ranks of ``A_first`` and of ``[A_first | A_second]`` in one pass."""
        A_first = np.asarray(A_first, dtype=np.int64)
        A_second = np.asarray(A_second, dtype=np.int64)
        joint = np.hstack([A_first, A_second])
        if joint.size == 0:
            return 0, 0
        keep = np.any(joint != 0, axis=1)
        joint = joint[keep]
        R, pivots = self.rref(joint)
        first = sum(1 for c in pivots if c < A_first.shape[1])
        return first, len(pivots)

    def inverse(self, A) -> np.ndarray:
        A = np.asarray(A, dtype=np.int64)
        n = A.shape[0]
        if A.shape != (n, n):
            raise ValueError("inverse needs a square matrix")
        R, pivots = self.rref(np.hstack([A, np.eye(n, dtype=np.int64)]), max_pivot_col=n)
        if len(pivots) < n:
            raise np.linalg.LinAlgError("singular matrix over GF(2^m)")
        return R[:, n:]

    def random_matrix(self, shape, rng: np.random.Generator) -> np.ndarray:
        return rng.integers(0, self.order, size=shape, dtype=np.int64)

    def solve_unique_block(self, A_dec, A_nuis) -> bool:
        """Whether ``w`` is pinned down by ``y = A_dec w + A_nuis v``.

        True iff ``A_dec`` has full column rank and its column space meets
        the column space of ``A_nuis`` only in zero.
        """
        return decodability_ranks(self, A_dec, A_nuis)[3]


def decodability_ranks(field: GF2m, A_dec, A_nuis) -> tuple[int, int, int, bool]:
    """``(rank A_dec, rank A_nuis, joint rank, decodable)``.

    One elimination over ``[A_nuis | A_dec]`` gives the nuisance and joint
    ranks; ``rank A_dec`` is only computed separately when the block fails.
    """
    A_dec = np.asarray(A_dec, dtype=np.int64)
    A_nuis = np.asarray(A_nuis, dtype=np.int64)
    if A_dec.ndim != 2 or A_nuis.ndim != 2:
        raise ValueError("expected 2-D matrices")
    if A_dec.shape[0] != A_nuis.shape[0]:
        raise ValueError(
            f"row count mismatch: A_dec has {A_dec.shape[0]}, A_nuis has {A_nuis.shape[0]}")
    d = A_dec.shape[1]
    r_nuis, r_joint = field.split_rank(A_nuis, A_dec)
    ok = r_joint - r_nuis == d
    r_dec = d if ok else field.rank(A_dec)
    return r_dec, r_nuis, r_joint, ok


@lru_cache(maxsize=None)
def get_field(m: int = DEFAULT_DEGREE) -> GF2m:
    """Shared field instance for degree ``m`` (tables are built once)."""
    return GF2m(m)


@dataclass(frozen=True)
class FieldElem:
    """A single element of GF(2^m) with operator support."""

    value: int
    m: int = DEFAULT_DEGREE

    def __post_init__(self):
        if not 1 <= self.m <= 16:
            raise ValueError(f"extension degree must be in [1, 16], got {self.m}")
        if not 0 <= self.value < (1 << self.m):
            raise ValueError(f"{self.value} is not an element of GF(2^{self.m})")

    def _same(self, other: "FieldElem") -> None:
        if not isinstance(other, FieldElem):
            raise TypeError(f"expected FieldElem, got {type(other).__name__}")
        if other.m != self.m:
            raise FieldMismatchError(f"GF(2^{self.m}) vs GF(2^{other.m})")

    def __add__(self, other: "FieldElem") -> "FieldElem":
        self._same(other)
        return FieldElem(self.value ^ other.value, self.m)

    __sub__ = __add__

    def __mul__(self, other: "FieldElem") -> "FieldElem":
        return gf_mul(self, other)

    def __truediv__(self, other: "FieldElem") -> "FieldElem":
        return gf_mul(self, gf_inv(other))

    def __int__(self) -> int:
        return self.value

    def __repr__(self) -> str:
        return f"FieldElem(0x{self.value:x}, m={self.m})"


def gf_mul(a: FieldElem, b: FieldElem) -> FieldElem:
    a._same(b)
    return FieldElem(get_field(a.m).mul(a.value, b.value), a.m)


def gf_inv(a: FieldElem) -> FieldElem:
    return FieldElem(get_field(a.m).inv(a.value), a.m)


def rank(A, m: int = DEFAULT_DEGREE) -> int:
    """Rank of ``A`` over GF(2^m)."""
    return get_field(m).rank(get_field(m).check(A))


def solve_unique_block(A_dec, A_nuis, m: int = DEFAULT_DEGREE) -> bool:
    field = get_field(m)
    return field.solve_unique_block(field.check(A_dec), field.check(A_nuis))
