"""Exact scalars and dense linear algebra over F_p.

Matrices are plain ``numpy`` integer arrays with entries reduced into
``[0, p)``; every routine takes the prime explicitly.  At ``p = 2`` a
bit-packed backend (rows stored as Python ints) is available and must agree
with the generic one on rank and kernel, which is cheap to guarantee because
both report the kernel read off the reduced row echelon form, and that form
is unique.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence, Tuple

import numpy as np

from .errors import SingularMatrixError

ExactRational = Fraction


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    i = 2
    while i * i <= p:
        if p % i == 0:
            return False
        i += 1
    return True


def check_prime(p: int) -> int:
    if not is_prime(int(p)):
        raise ValueError(f"{p} is not prime")
    return int(p)


@dataclass(frozen=True)
class FpScalar:
    """An element of Z/p."""

    value: int
    p: int

    def __post_init__(self):
        check_prime(self.p)
        object.__setattr__(self, "value", int(self.value) % self.p)

    def _coerce(self, other) -> int:
        if isinstance(other, FpScalar):
            if other.p != self.p:
                raise ValueError(f"mixed moduli {self.p} and {other.p}")
            return other.value
        return int(other)

    def __add__(self, other):
        return FpScalar(self.value + self._coerce(other), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        return FpScalar(self.value - self._coerce(other), self.p)

    def __rsub__(self, other):
        return FpScalar(self._coerce(other) - self.value, self.p)

    def __mul__(self, other):
        return FpScalar(self.value * self._coerce(other), self.p)

    __rmul__ = __mul__

    def __neg__(self):
        return FpScalar(-self.value, self.p)

    def inverse(self) -> "FpScalar":
        if self.value == 0:
            raise ZeroDivisionError("0 has no inverse mod p")
        return FpScalar(pow(self.value, -1, self.p), self.p)

    def __truediv__(self, other):
        return self * FpScalar(self._coerce(other), self.p).inverse()

    def __eq__(self, other):
        if isinstance(other, FpScalar):
            return self.p == other.p and self.value == other.value
        if isinstance(other, int):
            return self.value == other % self.p
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.p})"


def p_local_check(q: Fraction, p: int) -> bool:
    """True iff ``q`` lies in Z_(p), i.e. p does not divide its denominator."""
    q = Fraction(q)
    return q.denominator % p != 0


def reduce_mod_p(q: Fraction, p: int) -> int:
    """Image of a p-integral rational in Z/p."""
    q = Fraction(q)
    if not p_local_check(q, p):
        raise ValueError(f"{q} is not {p}-integral")
    return q.numerator * pow(q.denominator, -1, p) % p


# ---------------------------------------------------------------------------
# dense matrices over F_p


def fp_array(M, p: int) -> np.ndarray:
    """Copy ``M`` into a 2-d int64 array reduced mod p."""
    A = np.array(M, dtype=np.int64)
    if A.ndim == 1:
        A = A.reshape(1, -1) if A.size else A.reshape(0, 0)
    return np.mod(A, p)


def identity(n: int) -> np.ndarray:
    return np.eye(n, dtype=np.int64)


def matmul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    A = np.asarray(A, dtype=np.int64)
    B = np.asarray(B, dtype=np.int64)
    inner = A.shape[1] if A.ndim == 2 else 0
    # int64 dot products stay exact while inner * (p-1)^2 < 2^63
    if inner and inner * (p - 1) ** 2 >= 2**62:
        return np.mod(A.astype(object) @ B.astype(object), p).astype(np.int64)
    return np.mod(A @ B, p)


def rref(M, p: int) -> Tuple[np.ndarray, List[int]]:
    """Reduced row echelon form over F_p with first-nonzero pivoting."""
    A = fp_array(M, p)
    rows, cols = A.shape
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(A[r:, c])
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            A[[r, piv]] = A[[piv, r]]
        inv = pow(int(A[r, c]), -1, p)
        if inv != 1:
            A[r] = (A[r] * inv) % p
        col = A[:, c].copy()
        col[r] = 0
        hit = np.flatnonzero(col)
        if hit.size:
            A[hit] = (A[hit] - np.outer(col[hit], A[r])) % p
        pivots.append(c)
        r += 1
    return A, pivots


def _kernel_from_rref(R: np.ndarray, pivots: Sequence[int], cols: int) -> np.ndarray:
    free = [c for c in range(cols) if c not in set(pivots)]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        for i, pc in enumerate(pivots):
            K[pc, j] = -R[i, f]
    return K


# bit-packed GF(2) backend --------------------------------------------------


def pack_rows(M) -> Tuple[List[int], int]:
    A = np.asarray(M, dtype=np.int64) & 1
    cols = A.shape[1] if A.ndim == 2 else 0
    weights = [1 << j for j in range(cols)]
    packed = []
    for row in A:
        v = 0
        for j in np.flatnonzero(row):
            v |= weights[int(j)]
        packed.append(v)
    return packed, cols


def rref_bits(rows: List[int], cols: int) -> Tuple[List[int], List[int]]:
    """RREF over GF(2) on int-packed rows; bit j is column j."""
    work = list(rows)
    pivots: List[int] = []
    r = 0
    for c in range(cols):
        if r == len(work):
            break
        bit = 1 << c
        piv = None
        for i in range(r, len(work)):
            if work[i] & bit:
                piv = i
                break
        if piv is None:
            continue
        work[r], work[piv] = work[piv], work[r]
        pr = work[r]
        for i in range(len(work)):
            if i != r and work[i] & bit:
                work[i] ^= pr
        pivots.append(c)
        r += 1
    return work[:r], pivots


def rank_and_kernel_bits(M) -> Tuple[int, np.ndarray]:
    rows, cols = pack_rows(M)
    R, pivots = rref_bits(rows, cols)
    pivset = set(pivots)
    free = [c for c in range(cols) if c not in pivset]
    K = np.zeros((cols, len(free)), dtype=np.int64)
    for j, f in enumerate(free):
        K[f, j] = 1
        fb = 1 << f
        for i, pc in enumerate(pivots):
            if R[i] & fb:
                K[pc, j] = 1
    return len(pivots), K


def rank_and_kernel(M, p: int, backend: str = "auto") -> Tuple[int, np.ndarray]:
    """Rank of ``M`` and a basis of its right kernel, one vector per column.

    ``backend`` is ``"generic"``, ``"bits"`` (p = 2 only) or ``"auto"``.
    The kernel basis is the one read off the reduced echelon form; callers
    should still not rely on a particular basis.
    """
    if backend not in ("auto", "generic", "bits"):
        raise ValueError(f"unknown backend {backend!r}")
    A = fp_array(M, p)
    if backend == "bits" or (backend == "auto" and p == 2 and A.shape[1] > 64):
        if p != 2:
            raise ValueError("bit-packed backend needs p = 2")
        return rank_and_kernel_bits(A)
    R, pivots = rref(A, p)
    return len(pivots), np.mod(_kernel_from_rref(R, pivots, A.shape[1]), p)


def rank(M, p: int) -> int:
    A = fp_array(M, p)
    if A.size == 0:
        return 0
    if p == 2 and A.shape[1] > 64:
        rows, cols = pack_rows(A)
        return len(rref_bits(rows, cols)[1])
    return len(rref(A, p)[1])


def kernel(M, p: int) -> np.ndarray:
    return rank_and_kernel(M, p)[1]


def invert(M, p: int) -> np.ndarray:
    """Inverse over F_p, or :class:`SingularMatrixError` when rank < size."""
    A = fp_array(M, p)
    n, m = A.shape
    if n != m:
        raise ValueError(f"cannot invert a {n}x{m} matrix")
    R, pivots = rref(np.hstack([A, identity(n)]), p)
    rk = sum(1 for c in pivots if c < n)
    if rk < n:
        raise SingularMatrixError(rk, n)
    return R[:, n:].copy()


def is_invertible(M, p: int) -> bool:
    A = fp_array(M, p)
    return A.shape[0] == A.shape[1] and rank(A, p) == A.shape[0]


def is_idempotent(M, p: int) -> bool:
    A = fp_array(M, p)
    return bool(np.array_equal(matmul(A, A, p), A))


def column_basis(M, p: int) -> np.ndarray:
    """Columns of ``M`` forming a basis of its column space (pivot columns)."""
    A = fp_array(M, p)
    if A.size == 0:
        return np.zeros((A.shape[0], 0), dtype=np.int64)
    _, pivots = rref(A, p)
    return A[:, pivots].copy()


class Coordinates:
    """Solve ``basis @ x = v`` for vectors known to lie in the column span.

    The factorisation is done once, so repeated solves (one per Steenrod
    square, say) are cheap.
    """

    def __init__(self, basis: np.ndarray, p: int):
        self.p = p
        B = fp_array(basis, p) if np.asarray(basis).size else np.zeros(np.shape(basis), dtype=np.int64)
        self.rows, self.dim = B.shape
        R, pivots = rref(np.hstack([B, identity(self.rows)]), p)
        self.pivots = [c for c in pivots if c < self.dim]
        if len(self.pivots) != self.dim:
            raise ValueError("basis columns are linearly dependent")
        # rows of R with a pivot among the first `dim` columns give coordinates;
        # the remaining rows give the constraints cutting out the span
        self._solve = R[: self.dim, self.dim :].copy()
        self._check = R[self.dim :, self.dim :].copy()

    def __call__(self, V: np.ndarray, check: bool = True) -> np.ndarray:
        V = np.asarray(V, dtype=np.int64)
        if V.ndim == 1:
            V = V.reshape(-1, 1)
        if check and self._check.size and np.any(matmul(self._check, V, self.p)):
            raise ValueError("vector not in the span of the basis")
        return matmul(self._solve, V, self.p)


def restrict(op: np.ndarray, source_basis: np.ndarray, target_coords: Coordinates, p: int) -> np.ndarray:
    """Matrix of ``op`` from span(source_basis) into the span behind ``target_coords``."""
    if source_basis.shape[1] == 0:
        return np.zeros((target_coords.dim, 0), dtype=np.int64)
    return target_coords(matmul(op, source_basis, p))


# ---------------------------------------------------------------------------
# graded bookkeeping


@dataclass(frozen=True)
class HilbertSeries:
    """Degreewise dimensions up to an explicit bound; absent degrees are 0."""

    bound: int
    dims: Dict[int, int] = field(default_factory=dict)

    def __post_init__(self):
        clean = {int(d): int(v) for d, v in self.dims.items() if v}
        if any(d > self.bound for d in clean):
            raise ValueError("degree beyond bound")
        if any(v < 0 for v in clean.values()):
            raise ValueError("negative dimension")
        object.__setattr__(self, "dims", dict(sorted(clean.items())))

    def __getitem__(self, d: int) -> int:
        if d > self.bound:
            raise KeyError(f"degree {d} beyond bound {self.bound}")
        return self.dims.get(d, 0)

    def series(self) -> List[List[int]]:
        return [[d, v] for d, v in self.dims.items()]

    def shifted(self, s: int) -> "HilbertSeries":
        return HilbertSeries(self.bound + s, {d + s: v for d, v in self.dims.items()})

    @classmethod
    def from_pairs(cls, bound: int, pairs: Iterable[Tuple[int, int]]) -> "HilbertSeries":
        return cls(bound, dict(pairs))


@dataclass(frozen=True)
class GradedSpace:
    """Ordered basis labels per degree over ``[dmin, dmax]``."""

    dmin: int
    dmax: int
    labels: Dict[int, Tuple] = field(default_factory=dict)

    def dim(self, d: int) -> int:
        return len(self.labels.get(d, ()))

    def hilbert(self) -> HilbertSeries:
        return HilbertSeries(self.dmax, {d: len(v) for d, v in self.labels.items()})
