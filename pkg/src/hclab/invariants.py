"""The polynomial model at p = 2.

Poly = F_2[x_1..x_n] = H^*(BE_n).  A matrix g acts by the substitution
x_i -> sum_j g_{ji} x_j; this is a left action on polynomials.  The Euler
class c_n (product of all nonzero linear forms) is GL_n-invariant, so
(c_n Poly)^{B_n} = c_n Poly^{B_n} and everything below works with the
cofactor f in Poly^{B_n}.

Degrees: the homological degree of c_n f is its polynomial degree plus one,
so f in Poly_j sits in homological degree j + 2^n.

Hecke operators are built in cohomology, where ê(i) is the transfer
Poly^{B} -> Poly^{P_i} followed by inclusion.  The homology action is the
transpose; there T_i = ê(i) - 1 and words in the T_i give a left
H_n-module.  Upper triangular B fixes x_1 first, so strand i of the Hecke
algebra is carried by the parabolic P_{n-i}.  Steenrod squares act on
c_n f through the Cartan formula: Sq(c_n f) = c_n * prod_{L != 0}(1 + L) * Sq(f).
"""

from __future__ import annotations

import itertools
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import chevalley, exactlin, hecke, qwords
from .chevalley import Matrix, SubgroupDescriptor
from .errors import GuardError

P = 2
MONOMIAL_GUARD = 10**6
MODEL_TOTAL_GUARD = 4
MODEL_DEGREE_GUARD = 30

Monomial = Tuple[int, ...]


def monomial_count(n: int, d: int) -> int:
    from math import comb

    if d < 0:
        return 0
    if n == 0:
        return int(d == 0)
    return comb(d + n - 1, n - 1)


@lru_cache(maxsize=None)
def monomials(n: int, d: int) -> Tuple[Monomial, ...]:
    """Exponent vectors of degree d, in descending lexicographic order."""
    count = monomial_count(n, d)
    if count > MONOMIAL_GUARD:
        raise GuardError(f"monomials of degree {d} in {n} variables", count, MONOMIAL_GUARD)
    if d < 0:
        return ()
    if n == 0:
        return ((),) if d == 0 else ()
    out = []
    for a in range(d, -1, -1):
        for rest in monomials(n - 1, d - a):
            out.append((a,) + rest)
    return tuple(out)


@lru_cache(maxsize=None)
def monomial_index(n: int, d: int) -> Dict[Monomial, int]:
    return {m: j for j, m in enumerate(monomials(n, d))}


@dataclass(frozen=True)
class PolySlice:
    """A subspace of Poly_d given by basis columns in the monomial basis."""

    n: int
    d: int
    basis: np.ndarray = field(compare=False)

    @property
    def monomials(self) -> Tuple[Monomial, ...]:
        return monomials(self.n, self.d)

    @property
    def dim(self) -> int:
        return int(self.basis.shape[1])


def poly_from_dict(n: int, d: int, terms: Dict[Monomial, int]) -> np.ndarray:
    v = np.zeros(monomial_count(n, d), dtype=np.int64)
    idx = monomial_index(n, d)
    for m, c in terms.items():
        v[idx[m]] = (v[idx[m]] + c) % P
    return v


def poly_to_dict(n: int, d: int, v: np.ndarray) -> Dict[Monomial, int]:
    return {m: int(c) for m, c in zip(monomials(n, d), v) if c % P}


# ---------------------------------------------------------------------------
# multiplication, substitution and squares


@lru_cache(maxsize=None)
def _times_x(n: int, d: int, l: int) -> np.ndarray:
    """Index map Poly_d -> Poly_{d+1} for multiplication by x_l."""
    idx = monomial_index(n, d + 1)
    out = []
    for m in monomials(n, d):
        e = list(m)
        e[l] += 1
        out.append(idx[tuple(e)])
    return np.array(out, dtype=np.int64)


def multiplication_matrix(n: int, d: int, f: Dict[Monomial, int]) -> np.ndarray:
    """Matrix of multiplication by the homogeneous polynomial f, Poly_d -> Poly_{d+deg f}."""
    if not f:
        raise ValueError("zero multiplier has no degree")
    deg = sum(next(iter(f)))
    src = monomials(n, d)
    idx = monomial_index(n, d + deg)
    M = np.zeros((len(idx), len(src)), dtype=np.int64)
    for j, m in enumerate(src):
        for a, c in f.items():
            M[idx[tuple(x + y for x, y in zip(m, a))], j] += c
    return np.mod(M, P)


def _as_tuple(g) -> Matrix:
    return tuple(tuple(int(x) for x in row) for row in g)


@lru_cache(maxsize=None)
def substitution_matrix(g: Matrix, d: int) -> np.ndarray:
    """Matrix of f -> g.f on Poly_d (columns are images of monomials)."""
    n = len(g)
    N = monomial_count(n, d)
    if d == 0:
        return np.ones((1, 1), dtype=np.int64)
    prev = substitution_matrix(g, d - 1)
    idx_prev = monomial_index(n, d - 1)
    # images of x_l * (image of m') for every l, as N x N_{d-1} matrices
    lifted = []
    for l in range(n):
        Y = np.zeros((N, prev.shape[1]), dtype=np.int64)
        Y[_times_x(n, d - 1, l), :] = prev
        lifted.append(Y)
    M = np.zeros((N, N), dtype=np.int64)
    for j, m in enumerate(monomials(n, d)):
        i = max(t for t in range(n) if m[t])
        e = list(m)
        e[i] -= 1
        src = idx_prev[tuple(e)]
        col = np.zeros(N, dtype=np.int64)
        for l in range(n):
            if g[l][i] % P:
                col += lifted[l][:, src]
        M[:, j] = col
    return np.mod(M, P)


def _sq_monomial(m: Monomial, b: int):
    """Terms of Sq^b(x^m): Cartan over variables, Lucas for each binomial."""
    n = len(m)

    def rec(i: int, left: int):
        if i == n:
            if left == 0:
                yield ()
            return
        a = m[i]
        for bi in range(min(a, left), -1, -1):
            if bi & a == bi:
                for rest in rec(i + 1, left - bi):
                    yield (a + bi,) + rest

    yield from rec(0, b)


@lru_cache(maxsize=None)
def steenrod_matrix(k: int, n: int, d: int) -> np.ndarray:
    """Sq^k : Poly_d -> Poly_{d+k} on the full polynomial algebra."""
    src = monomials(n, d)
    idx = monomial_index(n, d + k)
    M = np.zeros((len(idx), len(src)), dtype=np.int64)
    for j, m in enumerate(src):
        for t in _sq_monomial(m, k):
            M[idx[t], j] ^= 1
    return M


# ---------------------------------------------------------------------------
# linear forms, Euler class and the twisting series


def _poly_mul(a: Dict[Monomial, int], b: Dict[Monomial, int]) -> Dict[Monomial, int]:
    out: Dict[Monomial, int] = {}
    for x, c in a.items():
        for y, e in b.items():
            z = tuple(i + j for i, j in zip(x, y))
            out[z] = (out.get(z, 0) + c * e) % P
    return {k: v for k, v in out.items() if v}


def linear_forms(n: int) -> List[Dict[Monomial, int]]:
    forms = []
    for v in itertools.product(range(P), repeat=n):
        if any(v):
            forms.append({tuple(int(i == j) for j in range(n)): 1 for i in range(n) if v[i]})
    return forms


@lru_cache(maxsize=None)
def euler_class(n: int) -> Dict[Monomial, int]:
    """c_n, the product of all nonzero linear forms (degree 2^n - 1)."""
    out: Dict[Monomial, int] = {(0,) * n: 1}
    for L in linear_forms(n):
        out = _poly_mul(out, L)
    return out


@lru_cache(maxsize=None)
def twisting_series(n: int) -> Tuple[Dict[Monomial, int], ...]:
    """Homogeneous parts of prod_{L != 0} (1 + L), indexed by degree."""
    total: Dict[Monomial, int] = {(0,) * n: 1}
    for L in linear_forms(n):
        one_plus = dict(L)
        one_plus[(0,) * n] = 1
        total = _poly_mul(total, one_plus)
    top = 2**n - 1
    parts = []
    for a in range(top + 1):
        parts.append({m: c for m, c in total.items() if sum(m) == a})
    return tuple(parts)


def substitute(f: Dict[Monomial, int], g: Matrix) -> Dict[Monomial, int]:
    """g.f for a homogeneous polynomial f."""
    if not f:
        return {}
    n = len(g)
    d = sum(next(iter(f)))
    return poly_to_dict(n, d, np.mod(substitution_matrix(g, d) @ poly_from_dict(n, d, f), P))


@lru_cache(maxsize=None)
def twisted_steenrod_matrix(k: int, n: int, j: int) -> np.ndarray:
    """Sq^k on c_n Poly in terms of the cofactor: Poly_j -> Poly_{j+k}."""
    parts = twisting_series(n)
    M = np.zeros((monomial_count(n, j + k), monomial_count(n, j)), dtype=np.int64)
    for a in range(min(k, len(parts) - 1) + 1):
        if not parts[a]:
            continue
        sq = steenrod_matrix(k - a, n, j)
        M += multiplication_matrix(n, j + k - a, parts[a]) @ sq if sq.size else 0
    return np.mod(M, P)


# ---------------------------------------------------------------------------
# invariants


def subgroup_generators(desc: SubgroupDescriptor) -> List[Matrix]:
    n = desc.n
    if desc.p != P:
        raise ValueError("the polynomial model is implemented at p = 2 only")
    elem = []
    for i in range(n - 1):
        e = [list(r) for r in chevalley.mat_identity(n)]
        e[i][i + 1] = 1
        elem.append(_as_tuple(e))
    perms = [chevalley.perm_matrix(chevalley.simple_reflection(i, n)) for i in range(1, n)]
    tag = desc.tag
    if tag == "Trivial":
        return []
    if tag in ("Borel", "Unipotent"):
        return elem
    if tag == "Parabolic":
        return elem + [perms[desc.index - 1]]
    if tag == "Full":
        return elem + perms
    if tag == "Weyl":
        return perms
    raise ValueError(f"{tag} does not act on Poly")


@lru_cache(maxsize=None)
def _invariant_basis(desc: SubgroupDescriptor, d: int) -> np.ndarray:
    n = desc.n
    N = monomial_count(n, d)
    if N > MONOMIAL_GUARD:
        raise GuardError(f"monomials of degree {d} in {n} variables", N, MONOMIAL_GUARD)
    gens = subgroup_generators(desc)
    if N == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if not gens:
        return np.eye(N, dtype=np.int64)
    I = np.eye(N, dtype=np.int64)
    stacked = np.concatenate([np.mod(substitution_matrix(g, d) - I, P) for g in gens], axis=0)
    _, K = exactlin.rank_and_kernel(stacked, P)
    return K


def invariant_basis(desc: SubgroupDescriptor, d: int) -> PolySlice:
    return PolySlice(desc.n, d, _invariant_basis(desc, d))


def invariant_dim(n: int, d: int, tag: str = "Borel", index: Optional[int] = None) -> int:
    return invariant_basis(SubgroupDescriptor(tag, n, P, index), d).dim


@lru_cache(maxsize=None)
def parabolic_coset_reps(i: int, n: int) -> Tuple[Matrix, ...]:
    """Representatives g of the left cosets gB_n in P_i."""
    par = sorted(chevalley.enumerate_subgroup(SubgroupDescriptor("Parabolic", n, P, i)))
    bor = chevalley.enumerate_subgroup(SubgroupDescriptor("Borel", n, P))
    reps, seen = [], set()
    for g in par:
        if g in seen:
            continue
        reps.append(g)
        seen |= {chevalley.mat_mul(g, b, P) for b in bor}
    return tuple(reps)


def transfer_matrix(i: int, n: int, j: int, reps: Optional[Sequence[Matrix]] = None) -> np.ndarray:
    """Sum of g.f over coset representatives of P_i/B_n, on all of Poly_j."""
    reps = parabolic_coset_reps(i, n) if reps is None else reps
    N = monomial_count(n, j)
    M = np.zeros((N, N), dtype=np.int64)
    for g in reps:
        M += substitution_matrix(_as_tuple(g), j)
    return np.mod(M, P)


def hecke_operator(i: int, n: int, d: int, hat: bool = True) -> np.ndarray:
    """ê(i) (or e(i) = 1 - ê(i)) on the polynomial-degree-d slice of (c_n Poly)^{B_n}.

    The matrix is written in the basis ``c_n * invariant_basis(B_n, d - 2^n + 1)``.
    """
    j = d - (2**n - 1)
    V = _invariant_basis(SubgroupDescriptor("Borel", n, P), j)
    C = _restrict(transfer_matrix(i, n, j), V, V)
    if hat:
        return C
    return np.mod(np.eye(C.shape[0], dtype=np.int64) - C, P)


def _restrict(op: np.ndarray, src: np.ndarray, dst: np.ndarray) -> np.ndarray:
    if src.shape[1] == 0 or dst.shape[1] == 0:
        return np.zeros((dst.shape[1], src.shape[1]), dtype=np.int64)
    return exactlin.restrict(op, src, exactlin.Coordinates(dst, P), P)


def twisted_steenrod_on_invariants(k: int, n: int, j: int) -> np.ndarray:
    """Sq^k on c_n Poly^{B_n}, cofactor degree j -> j + k, in invariant coordinates."""
    desc = SubgroupDescriptor("Borel", n, P)
    return _restrict(twisted_steenrod_matrix(k, n, j), _invariant_basis(desc, j), _invariant_basis(desc, j + k))


def hilbert_dim(m: int, d: int) -> int:
    """dim (c_m Poly)^{B_m} in homological degree d."""
    j = d - 2**m
    if j < 0:
        return 0
    return invariant_dim(m, j)


def hilbert_series(m: int, D: int, jobs: int = 1) -> exactlin.HilbertSeries:
    degrees = list(range(0, D + 1))
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dims = list(pool.map(hilbert_dim, [m] * len(degrees), degrees))
    else:
        dims = [hilbert_dim(m, d) for d in degrees]
    return exactlin.HilbertSeries.from_pairs(D, zip(degrees, dims))


# ---------------------------------------------------------------------------
# the graded H_m-module (c_m Poly)^{B_m} in homology


def _degree_hecke(m: int, d: int) -> List[np.ndarray]:
    """Matrices of all T_w (homology, left action) on homological degree d."""
    j = d - 2**m
    V = _invariant_basis(SubgroupDescriptor("Borel", m, P), j)
    r = V.shape[1]
    gens = []
    for i in range(1, m):
        # strand i of H_m is the parabolic P_{m-i} here: the variables are
        # listed against the strand order (fixed by the word counts)
        C = _restrict(transfer_matrix(m - i, m, j), V, V)
        gens.append(np.mod(C.T - np.eye(r, dtype=np.int64), P))  # homology T_i
    A = hecke.algebra(m, P)
    mats: List[np.ndarray] = [np.eye(r, dtype=np.int64)] * A.dim
    for w, i, prev in A._tree:
        mats[w] = np.mod(gens[i - 1] @ mats[prev], P)
    return mats


def _element_matrix(x: np.ndarray, mats: List[np.ndarray]) -> np.ndarray:
    r = mats[0].shape[0]
    out = np.zeros((r, r), dtype=np.int64)
    for c, M in zip(x, mats):
        if c:
            out += int(c) * M
    return np.mod(out, P)


def node_dim(n: int, k: int, d: int) -> int:
    """dim of the R_nL_k model in homological degree d, computed on its own."""
    m = n + k
    if m == 0:
        return int(d == 1)
    if m > MODEL_TOTAL_GUARD:
        raise GuardError("model total length", m, MODEL_TOTAL_GUARD)
    if d < 2**m:
        return 0
    mats = _degree_hecke(m, d)
    if mats[0].shape[0] == 0:
        return 0
    return exactlin.rank(_element_matrix(hecke.node_idempotent(n, k, P), mats), P)


def node_series(n: int, k: int, D: int, jobs: int = 1) -> exactlin.HilbertSeries:
    """Hilbert series of the R_nL_k model through D; degrees run in parallel with jobs > 1."""
    if D > MODEL_DEGREE_GUARD:
        raise GuardError("model degree bound", D, MODEL_DEGREE_GUARD)
    degrees = list(range(D + 1))
    args = ([n] * len(degrees), [k] * len(degrees), degrees)
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            dims = list(pool.map(node_dim, *args))
    else:
        dims = list(map(node_dim, *args))
    return exactlin.HilbertSeries.from_pairs(D, zip(degrees, dims))


class TotalModel:
    """Homology of (c_m Poly)^{B_m} through homological degree D.

    Per degree d: ``hecke[d][w]`` is the matrix of T_w (homology, left
    action) and ``sq[(d, k)]`` the lowering square Sq^k_*: degree d ->
    degree d - k, both in the dual basis of the invariant basis.
    """

    def __init__(self, m: int, D: int):
        if m > MODEL_TOTAL_GUARD:
            raise GuardError("model total length", m, MODEL_TOTAL_GUARD)
        if D > MODEL_DEGREE_GUARD:
            raise GuardError("model degree bound", D, MODEL_DEGREE_GUARD)
        self.m = m
        self.D = D
        self.shift = 2**m
        self.algebra = hecke.algebra(m, P)
        self.degrees = [d for d in range(self.shift, D + 1)]
        self.dims: Dict[int, int] = {}
        self.hecke: Dict[int, List[np.ndarray]] = {}
        self._sq: Dict[Tuple[int, int], np.ndarray] = {}
        for d in self.degrees:
            mats = _degree_hecke(m, d)
            self.dims[d] = int(mats[0].shape[0])
            self.hecke[d] = mats

    def dim(self, d: int) -> int:
        return self.dims.get(d, 0)

    def element(self, x: np.ndarray, d: int) -> np.ndarray:
        """Matrix of the Hecke element x (T_w coefficient vector) in degree d."""
        if self.dim(d) == 0:
            return np.zeros((0, 0), dtype=np.int64)
        return _element_matrix(x, self.hecke[d])

    def sq(self, d: int, k: int) -> np.ndarray:
        """Lowering Sq^k_* from degree d to degree d - k (transpose of the cohomology square)."""
        key = (d, k)
        if key not in self._sq:
            if self.dim(d) == 0 or self.dim(d - k) == 0:
                self._sq[key] = np.zeros((self.dim(d - k), self.dim(d)), dtype=np.int64)
            else:
                j = d - k - self.shift
                self._sq[key] = twisted_steenrod_on_invariants(k, self.m, j).T.copy()
        return self._sq[key]


@lru_cache(maxsize=None)
def total_model(m: int, D: int) -> TotalModel:
    return TotalModel(m, D)


@dataclass
class ModuleModel:
    """The summand ê_n e_k (c_m Poly)^{B_m} (m = n + k) in homology.

    ``basis[d]`` holds columns spanning the image of ê_n e_k in degree d;
    ``sq[(d, k)]`` is the lowering square restricted to those bases.
    """

    n: int
    k: int
    D: int
    basis: Dict[int, np.ndarray]
    sq: Dict[Tuple[int, int], np.ndarray]
    degree_range: Tuple[int, int]

    def dim(self, d: int) -> int:
        b = self.basis.get(d)
        return 0 if b is None else int(b.shape[1])

    def hilbert(self) -> exactlin.HilbertSeries:
        return exactlin.HilbertSeries.from_pairs(self.D, [(d, self.dim(d)) for d in range(self.D + 1)])


def module_model(n: int, k: int, D: int) -> ModuleModel:
    """Model of R_nL_k through homological degree D (p = 2)."""
    m = n + k
    if m == 0:
        # L_0: one class in degree 1, no squares
        basis = {1: np.ones((1, 1), dtype=np.int64)} if D >= 1 else {}
        return ModuleModel(0, 0, D, basis, {}, (1, D))
    T = total_model(m, D)
    idem = hecke.node_idempotent(n, k, P)
    basis: Dict[int, np.ndarray] = {}
    for d in T.degrees:
        if T.dim(d):
            E = T.element(idem, d)
            basis[d] = exactlin.column_basis(E, P)
    sq: Dict[Tuple[int, int], np.ndarray] = {}
    for d in T.degrees:
        for s in range(1, d - T.shift + 1):
            src, dst = basis.get(d), basis.get(d - s)
            if src is None or dst is None or src.shape[1] == 0 or dst.shape[1] == 0:
                continue
            op = np.mod(T.sq(d, s) @ src, P)
            sq[(d, s)] = exactlin.Coordinates(dst, P)(op)
    return ModuleModel(n, k, D, basis, sq, (T.shift, D))


def _hom_system(source: ModuleModel, target: ModuleModel, bound: int):
    """Constraint matrix for homomorphisms through degree ``bound``.

    Only the squares Sq^{2^i} are imposed: they generate the algebra, and
    every factorisation of a lowering square passes through degrees that
    are already in range.
    """
    degs = [d for d in range(bound + 1) if source.dim(d) and target.dim(d)]
    offset: Dict[int, int] = {}
    total = 0
    for d in degs:
        offset[d] = total
        total += source.dim(d) * target.dim(d)
    rows: List[np.ndarray] = []
    for d in range(bound + 1):
        a, b = source.dim(d), target.dim(d)
        if a == 0 or total == 0:
            continue
        s = 1
        while s < d:
            e = d - s
            te, se = target.dim(e), source.dim(e)
            if te:
                block = np.zeros((te, a, total), dtype=np.int64)
                Ssrc = source.sq.get((d, s))
                if Ssrc is not None and e in offset:
                    # (φ_e Ssrc)[r, c] = sum_t φ_e[r, t] Ssrc[t, c]
                    view = block[:, :, offset[e]:offset[e] + te * se].reshape(te, a, te, se)
                    for r in range(te):
                        view[r, :, r, :] += Ssrc.T
                Stgt = target.sq.get((d, s))
                if Stgt is not None and d in offset:
                    # (Stgt φ_d)[r, c] = sum_t Stgt[r, t] φ_d[t, c]
                    view = block[:, :, offset[d]:offset[d] + b * a].reshape(te, a, b, a)
                    for c in range(a):
                        view[:, c, :, c] += Stgt
                block = np.mod(block.reshape(te * a, total), P)
                if block.any():
                    rows.append(block)
            s *= 2
    M = np.concatenate(rows, axis=0) if rows else np.zeros((0, total), dtype=np.int64)
    return M, offset, total


def truncated_hom(
    source: ModuleModel,
    target: ModuleModel,
    D: Optional[int] = None,
    constraint_degree: Optional[int] = None,
) -> int:
    """dim of degree-preserving families φ_d with φ_{d-s} Sq^s_* = Sq^s_* φ_d.

    The modules are homology modules (squares lower degree), so a map
    S -> T is a family φ_d: S_d -> T_d.  Constraints are solved through
    ``constraint_degree`` (default: as far as both models reach) and the
    answer is the rank of the restriction of the solutions to degrees <= D.
    With constraint_degree == D this is the plain truncated kernel, which
    also counts maps that only exist because the source is cut off at D
    (a top class sent to a primitive).
    """
    reach = min(source.D, target.D)
    D = reach if D is None else D
    bound = reach if constraint_degree is None else constraint_degree
    if bound < D:
        raise ValueError("constraint_degree must be at least D")
    if bound > min(source.D, target.D):
        raise ValueError(f"models only reach degree {min(source.D, target.D)}")
    M, offset, total = _hom_system(source, target, bound)
    if total == 0:
        return 0
    if bound == D:
        return total - (exactlin.rank(M, P) if M.shape[0] else 0)
    K = exactlin.kernel(M, P) if M.shape[0] else np.eye(total, dtype=np.int64)
    idx = [i for d, o in offset.items() if d <= D for i in range(o, o + source.dim(d) * target.dim(d))]
    if not idx or K.shape[1] == 0:
        return 0
    return exactlin.rank(K[idx, :], P)


def hecke_operator_independence(m: int, D: int) -> Dict[str, int]:
    """Rank of the m! operators T_w acting on the model through degree D."""
    T = total_model(m, D)
    rows = []
    for w in range(T.algebra.dim):
        parts = [T.hecke[d][w].reshape(-1) for d in T.degrees if T.dim(d)]
        rows.append(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64))
    M = np.stack(rows)
    rk = exactlin.rank(M, P) if M.size else 0
    return {"m": m, "D": D, "operators": T.algebra.dim, "rank": rk}


def word_model_agreement(n: int, k: int, D: int, bridge_admissible: bool = False) -> Dict[str, object]:
    """Compare node dimensions of the R_nL_k model with the word counts.

    Both series are returned so a disagreement can be read off directly.
    """
    model = module_model(n, k, D)
    ours = [model.dim(d) for d in range(D + 1)]
    words = [qwords.enumerate_count(P, n, k, d, bridge_admissible) if n + k else int(d == 1) for d in range(D + 1)]
    bad = [d for d in range(D + 1) if ours[d] != words[d]]
    return {"n": n, "k": k, "D": D, "model": ours, "words": words, "mismatched_degrees": bad, "agree": not bad}
