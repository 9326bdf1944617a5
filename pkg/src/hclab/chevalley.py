"""Finite groups of Lie type A at desk scale.

Conventions: matrices act on row vectors from the right, ``B_n`` is the
upper triangular Borel subgroup, ``U_n`` its unipotent radical and ``P_i``
the minimal parabolic containing ``B_n`` and the transposition of
coordinates ``i, i+1``.  A group element is a tuple of row tuples.

A permutation ``w`` is a tuple of 0-based images; its matrix has a 1 at
``(i, w[i])``.  The product ``perm_mul(u, v)`` is defined to match the
matrix product ``mat(u) @ mat(v)``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin
from .errors import GuardError

Matrix = Tuple[Tuple[int, ...], ...]
Perm = Tuple[int, ...]

ORDER_GUARD = 10**7
COSET_GUARD = 10**5
WREATH_GUARD = 2**13
TRANSREP_GUARD = 3


# ---------------------------------------------------------------------------
# matrices


def mat_mul(a: Matrix, b: Matrix, p: int) -> Matrix:
    n = len(a)
    cols = list(zip(*b))
    return tuple(tuple(sum(x * y for x, y in zip(row, col)) % p for col in cols) for row in a)


def mat_identity(n: int) -> Matrix:
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def mat_det(a: Matrix, p: int) -> int:
    A = [list(r) for r in a]
    n = len(A)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if A[r][c] % p), None)
        if piv is None:
            return 0
        if piv != c:
            A[c], A[piv] = A[piv], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for r in range(c + 1, n):
            f = A[r][c] * inv % p
            if f:
                A[r] = [(x - f * y) % p for x, y in zip(A[r], A[c])]
    return det % p


def mat_inverse(a: Matrix, p: int) -> Matrix:
    inv = exactlin.invert(np.array(a, dtype=np.int64), p)
    return tuple(tuple(int(x) for x in row) for row in inv)


def block_diag(a: Matrix, b: Matrix) -> Matrix:
    n, m = len(a), len(b)
    rows = [tuple(a[i]) + (0,) * m for i in range(n)]
    rows += [(0,) * n + tuple(b[i]) for i in range(m)]
    return tuple(rows)


@dataclass(frozen=True)
class GLElement:
    """An invertible n x n matrix over F_p."""

    entries: Matrix
    p: int

    def __post_init__(self):
        if mat_det(self.entries, self.p) == 0:
            raise ValueError("matrix is not invertible")

    @property
    def n(self) -> int:
        return len(self.entries)

    def __mul__(self, other: "GLElement") -> "GLElement":
        return GLElement(mat_mul(self.entries, other.entries, self.p), self.p)

    def inverse(self) -> "GLElement":
        return GLElement(mat_inverse(self.entries, self.p), self.p)


# ---------------------------------------------------------------------------
# permutations and the Weyl group


def perm_mul(u: Perm, v: Perm) -> Perm:
    return tuple(v[u[i]] for i in range(len(u)))


def perm_inverse(w: Perm) -> Perm:
    inv = [0] * len(w)
    for i, j in enumerate(w):
        inv[j] = i
    return tuple(inv)


def perm_matrix(w: Perm) -> Matrix:
    n = len(w)
    return tuple(tuple(int(w[i] == j) for j in range(n)) for i in range(n))


def simple_reflection(i: int, n: int) -> Perm:
    """The transposition w_i of coordinates i, i+1 (1-based i)."""
    w = list(range(n))
    w[i - 1], w[i] = w[i], w[i - 1]
    return tuple(w)


def length(w: Perm) -> int:
    """l(w), computed as the inversion count."""
    return sum(1 for i in range(len(w)) for j in range(i + 1, len(w)) if w[i] > w[j])


def weyl_group(n: int) -> List[Perm]:
    """S_n ordered by length, then lexicographically."""
    return sorted(itertools.permutations(range(n)), key=lambda w: (length(w), w))


def word_lengths_bfs(n: int) -> Dict[Perm, int]:
    """Minimal word length in the generators w_i, by breadth-first search."""
    gens = [simple_reflection(i, n) for i in range(1, n)]
    start = tuple(range(n))
    dist = {start: 0}
    frontier = [start]
    while frontier:
        nxt = []
        for w in frontier:
            for s in gens:
                x = perm_mul(s, w)
                if x not in dist:
                    dist[x] = dist[w] + 1
                    nxt.append(x)
        frontier = nxt
    return dist


def reduced_word(w: Perm) -> List[int]:
    """1-based indices i_1..i_k with w = w_{i_1} * ... * w_{i_k}, k = l(w)."""
    n = len(w)
    word: List[int] = []
    cur = w
    while length(cur) > 0:
        for i in range(1, n):
            s = simple_reflection(i, n)
            x = perm_mul(s, cur)
            if length(x) < length(cur):
                word.append(i)
                cur = x
                break
    return word


def longest_element(n: int) -> Perm:
    return tuple(range(n - 1, -1, -1))


# ---------------------------------------------------------------------------
# subgroups


@dataclass(frozen=True)
class SubgroupDescriptor:
    """Names one of the standard subgroups of GL_n(F_p).

    ``tag`` is one of Borel, Unipotent, Parabolic, Full, Weyl,
    ElementaryAbelian; ``index`` is the i of Parabolic(i).
    """

    tag: str
    n: int
    p: int
    index: Optional[int] = None

    TAGS = ("Borel", "Unipotent", "Parabolic", "Full", "Weyl", "ElementaryAbelian", "Trivial")

    def __post_init__(self):
        if self.tag not in self.TAGS:
            raise ValueError(f"unknown subgroup tag {self.tag!r}")
        exactlin.check_prime(self.p)
        if self.n < 0:
            raise ValueError("rank must be non-negative")
        if self.tag == "Parabolic":
            if self.index is None or not 1 <= self.index <= self.n - 1:
                raise ValueError("Parabolic(i) requires 1 <= i <= n-1")

    @classmethod
    def parse(cls, text: str, n: int, p: int) -> "SubgroupDescriptor":
        text = text.strip()
        if text.startswith("Parabolic"):
            inner = text[len("Parabolic"):].strip("()")
            return cls("Parabolic", n, p, int(inner))
        return cls(text, n, p)

    def formula_order(self) -> int:
        n, p = self.n, self.p
        full = 1
        for i in range(n):
            full *= p**n - p**i
        unip = p ** (n * (n - 1) // 2)
        return {
            "Full": full,
            "Borel": (p - 1) ** n * unip,
            "Unipotent": unip,
            "Parabolic": (p - 1) ** n * unip * (p + 1),
            "Weyl": _factorial(n),
            "ElementaryAbelian": p**n,
            "Trivial": 1,
        }[self.tag]


def _factorial(n: int) -> int:
    out = 1
    for i in range(2, n + 1):
        out *= i
    return out


def _vectors(n: int, p: int) -> Iterator[Tuple[int, ...]]:
    return itertools.product(range(p), repeat=n)


def _enumerate_full(n: int, p: int) -> Iterator[Matrix]:
    # rows chosen one at a time outside the span of the earlier rows
    def rec(rows: List[Tuple[int, ...]], span: set):
        if len(rows) == n:
            yield tuple(rows)
            return
        for v in _vectors(n, p):
            if v in span:
                continue
            new_span = {tuple((a + c * b) % p for a, b in zip(s, v)) for s in span for c in range(p)}
            yield from rec(rows + [v], new_span)

    yield from rec([], {(0,) * n})


def _enumerate_pattern(n: int, p: int, allowed, diag_units: bool) -> Iterator[Matrix]:
    """Matrices supported on ``allowed`` (set of (i,j)) with unit or 1 diagonal."""
    free = sorted(pos for pos in allowed if pos[0] != pos[1])
    diag_choices = range(1, p) if diag_units else (1,)
    for diag in itertools.product(diag_choices, repeat=n):
        for vals in itertools.product(range(p), repeat=len(free)):
            m = [[0] * n for _ in range(n)]
            for i in range(n):
                m[i][i] = diag[i]
            for (i, j), v in zip(free, vals):
                m[i][j] = v
            t = tuple(tuple(r) for r in m)
            if mat_det(t, p):
                yield t


def enumerate_subgroup(desc: SubgroupDescriptor) -> List[Matrix]:
    """All elements of a standard subgroup, as matrices.

    ElementaryAbelian has no matrix model inside GL_n and is refused here.
    """
    est = desc.formula_order()
    if est > ORDER_GUARD:
        raise GuardError(f"enumerate {desc.tag} in GL_{desc.n}(F_{desc.p})", est, ORDER_GUARD)
    n, p = desc.n, desc.p
    upper = {(i, j) for i in range(n) for j in range(i, n)}
    if desc.tag == "Full":
        return list(_enumerate_full(n, p))
    if desc.tag == "Borel":
        return list(_enumerate_pattern(n, p, upper, True))
    if desc.tag == "Unipotent":
        return list(_enumerate_pattern(n, p, upper, False))
    if desc.tag == "Parabolic":
        i = desc.index - 1
        allowed = upper | {(i + 1, i)}
        # invertible matrices with this block pattern; diagonal entries may vanish
        free = sorted(allowed)
        out = []
        for vals in itertools.product(range(p), repeat=len(free)):
            m = [[0] * n for _ in range(n)]
            for (a, b), v in zip(free, vals):
                m[a][b] = v
            t = tuple(tuple(r) for r in m)
            if mat_det(t, p):
                out.append(t)
        return out
    if desc.tag == "Weyl":
        return [perm_matrix(w) for w in weyl_group(n)]
    if desc.tag == "Trivial":
        return [mat_identity(n)]
    raise ValueError(f"{desc.tag} is not a subgroup of GL_n")


def group_order(desc: SubgroupDescriptor) -> int:
    """Order by exhaustive enumeration (translations counted directly)."""
    est = desc.formula_order()
    if est > ORDER_GUARD:
        raise GuardError(f"order of {desc.tag} in rank {desc.n}, p={desc.p}", est, ORDER_GUARD)
    if desc.tag == "ElementaryAbelian":
        return sum(1 for _ in _vectors(desc.n, desc.p))
    return len(enumerate_subgroup(desc))


def parabolic_index(i: int, n: int, p: int) -> int:
    """[P_i : B_n], counted."""
    par = group_order(SubgroupDescriptor("Parabolic", n, p, i))
    bor = group_order(SubgroupDescriptor("Borel", n, p))
    assert par % bor == 0
    return par // bor


# ---------------------------------------------------------------------------
# cosets B\G and Bruhat cells


def flag_echelon(g: Matrix, p: int) -> Matrix:
    """Canonical representative of the coset B_n g.

    Left multiplication by an upper triangular matrix adds multiples of lower
    rows to higher rows and rescales rows, so B_n g is the flag of row spans
    read from the bottom.  Working upwards, each row is reduced against the
    pivot columns of the rows beneath it and scaled to a leading 1.
    """
    n = len(g)
    rows = [list(r) for r in g]
    pivots: List[Tuple[int, int]] = []
    for i in range(n - 1, -1, -1):
        r = rows[i]
        for j, c in pivots:
            if r[c]:
                f = r[c]
                r = [(x - f * y) % p for x, y in zip(r, rows[j])]
        c = next(k for k in range(n) if r[k])
        inv = pow(r[c], -1, p)
        r = [x * inv % p for x in r]
        rows[i] = r
        pivots.append((i, c))
    return tuple(tuple(r) for r in rows)


def bruhat_cell(g: Matrix, p: int) -> Perm:
    """The w with g in B w B.

    Row operations from below and column operations from the left reduce g
    to a monomial matrix; the row-to-column pivot pattern is w.
    """
    n = len(g)
    A = [list(r) for r in g]
    w = [None] * n
    used = set()
    for i in range(n - 1, -1, -1):
        c = next(k for k in range(n) if k not in used and A[i][k] % p)
        used.add(c)
        w[i] = c
        inv = pow(A[i][c], -1, p)
        # clear row i to the right of c by column operations (col j += t col c, j > c)
        for j in range(c + 1, n):
            if A[i][j]:
                t = (-A[i][j] * inv) % p
                for r in range(n):
                    A[r][j] = (A[r][j] + t * A[r][c]) % p
        # clear column c above row i by adding multiples of row i
        for r in range(i):
            if A[r][c]:
                t = (-A[r][c] * inv) % p
                A[r] = [(x + t * y) % p for x, y in zip(A[r], A[i])]
    return tuple(w)


def coset_count_formula(n: int, p: int) -> int:
    return sum(p ** length(w) for w in itertools.permutations(range(n)))


@lru_cache(maxsize=None)
def enumerate_cosets(n: int, p: int) -> Tuple[Matrix, ...]:
    """Canonical representatives of B_n\\GL_n, found by closing the trivial
    coset under right multiplication by generators of GL_n."""
    est = coset_count_formula(n, p)
    if est > COSET_GUARD:
        raise GuardError(f"cosets B_{n}\\GL_{n}(F_{p})", est, COSET_GUARD)
    if n == 0:
        return ((),)
    gens = gl_generators(n, p)
    start = flag_echelon(mat_identity(n), p)
    seen = {start}
    order = [start]
    frontier = [start]
    while frontier:
        nxt = []
        for c in frontier:
            for g in gens:
                x = flag_echelon(mat_mul(c, g, p), p)
                if x not in seen:
                    seen.add(x)
                    order.append(x)
                    nxt.append(x)
        frontier = nxt
    return tuple(sorted(order))


def gl_generators(n: int, p: int) -> List[Matrix]:
    gens = [perm_matrix(simple_reflection(i, n)) for i in range(1, n)]
    if n >= 2:
        e = [list(r) for r in mat_identity(n)]
        e[0][1] = 1
        gens.append(tuple(tuple(r) for r in e))
    if p > 2 and n >= 1:
        d = [list(r) for r in mat_identity(n)]
        d[0][0] = _primitive_root(p)
        gens.append(tuple(tuple(r) for r in d))
    return gens


def _primitive_root(p: int) -> int:
    if p == 2:
        return 1
    factors = {q for q in range(2, p) if (p - 1) % q == 0 and exactlin.is_prime(q)}
    for g in range(2, p):
        if all(pow(g, (p - 1) // q, p) != 1 for q in factors):
            return g
    raise ValueError("no primitive root")


def borel_double_coset_reps(w: Perm, p: int) -> List[Matrix]:
    """Canonical representatives of the cosets B x contained in B w B."""
    n = len(w)
    wm = perm_matrix(w)
    borel = enumerate_subgroup(SubgroupDescriptor("Borel", n, p))
    return sorted({flag_echelon(mat_mul(wm, b, p), p) for b in borel})


# ---------------------------------------------------------------------------
# counting (epimorphisms, wreath products)


def _rank_mod_p(rows: Sequence[Sequence[int]], p: int) -> int:
    if not rows or not rows[0]:
        return 0
    return exactlin.rank(np.array(rows, dtype=np.int64), p)


def count_epis_formula(m: int, n: int, p: int) -> int:
    if m < n:
        return 0
    out = 1
    for i in range(n):
        out *= p**m - p**i
    return out


def enumerate_epis(m: int, n: int, p: int) -> Iterator[Matrix]:
    """Surjections F_p^m -> F_p^n as m x n matrices (v -> v A)."""
    if p ** (m * n) > ORDER_GUARD:
        raise GuardError(f"Hom(E_{m}, E_{n}) at p={p}", p ** (m * n), ORDER_GUARD)
    for vals in itertools.product(range(p), repeat=m * n):
        A = tuple(tuple(vals[i * n:(i + 1) * n]) for i in range(m))
        if n == 0 or _rank_mod_p(A, p) == n:
            yield A


def count_epis(m: int, n: int, p: int, brute_force: bool = True) -> int:
    """Number of epimorphisms E_m -> E_n; brute force checked against the formula."""
    formula = count_epis_formula(m, n, p)
    if brute_force and p ** (m * n) <= ORDER_GUARD:
        counted = sum(1 for _ in enumerate_epis(m, n, p))
        if counted != formula:
            raise AssertionError(f"epi count {counted} != formula {formula}")
        return counted
    return formula


# iterated wreath product Z/p wr ... wr Z/p acting on the p^n leaves (points of F_p^n)


def _point_index(x: Sequence[int], p: int) -> int:
    out = 0
    for c in x:
        out = out * p + c
    return out


def wreath_generators(n: int, p: int) -> List[Perm]:
    """Generators of U~_n: bump coordinate j by 1 on the leaves below one
    vertex of depth j (the vertex fixed by the earlier coordinates)."""
    pts = list(_vectors(n, p))
    gens = []
    for j in range(n):
        for prefix in _vectors(j, p):
            img = []
            for x in pts:
                if tuple(x[:j]) == prefix:
                    y = list(x)
                    y[j] = (y[j] + 1) % p
                    img.append(_point_index(y, p))
                else:
                    img.append(_point_index(x, p))
            gens.append(tuple(img))
    return gens


def _compose(a: Perm, b: Perm) -> Perm:
    """Apply a, then b."""
    return tuple(b[a[i]] for i in range(len(a)))


def close_group(gens: Sequence[Perm], size: int) -> List[Perm]:
    ident = tuple(range(size))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for s in gens:
                x = _compose(g, s)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if len(seen) > WREATH_GUARD:
                        raise GuardError("iterated wreath product", len(seen), WREATH_GUARD)
        frontier = nxt
    return sorted(seen)


@lru_cache(maxsize=None)
def wreath_group(n: int, p: int) -> Tuple[Perm, ...]:
    est = p ** ((p**n - 1) // (p - 1)) if n else 1
    if est > WREATH_GUARD:
        raise GuardError(f"U~_{n} at p={p}", est, WREATH_GUARD)
    return tuple(close_group(wreath_generators(n, p), p**n))


def translation(v: Sequence[int], n: int, p: int) -> Perm:
    return tuple(_point_index([(a + b) % p for a, b in zip(x, v)], p) for x in _vectors(n, p))


def _is_transitive(gens: Sequence[Perm], size: int) -> bool:
    if size == 0:
        return True
    seen = {0}
    frontier = [0]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                if g[x] not in seen:
                    seen.add(g[x])
                    nxt.append(g[x])
        frontier = nxt
    return len(seen) == size


def transrep_injectivity(p: int, n: int, m: int) -> Dict[str, object]:
    """Compare Epi(E_m, E_n)/U_n with transitive representations E_m -> U~_n.

    Representations are homomorphisms up to conjugacy in U~_n.  The U_n
    action on epimorphisms is taken from the normaliser of the translation
    subgroup E_n in U~_n, so the comparison map is well defined by
    construction; the report also confirms that this normaliser induces
    exactly the unitriangular group.
    """
    if m > TRANSREP_GUARD:
        raise GuardError("transrep source rank", m, TRANSREP_GUARD)
    G = wreath_group(n, p)
    size = p**n
    ident = tuple(range(size))
    basis = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    trans = {translation(v, n, p): v for v in _vectors(n, p)}
    inv = {g: perm_inverse(g) for g in G}

    def conj(h: Perm, g: Perm) -> Perm:
        # g^{-1} h g, acting as: apply g^{-1}, then h, then g
        return _compose(_compose(inv[g], h), g)

    # automorphisms of E_n induced by its normaliser, as n x n matrices
    induced = set()
    for g in G:
        imgs = [conj(translation(b, n, p), g) for b in basis]
        if all(x in trans for x in imgs):
            induced.add(tuple(trans[x] for x in imgs))
    unitri = {
        m_
        for m_ in enumerate_subgroup(SubgroupDescriptor("Unipotent", n, p))
    } if n else {()}
    normaliser_is_unipotent = (
        {_transpose(a) for a in induced} == unitri or induced == unitri
    )

    epis = list(enumerate_epis(m, n, p))
    src_basis = [tuple(int(i == j) for j in range(m)) for i in range(m)]

    def rep_of(A: Matrix) -> Tuple[Perm, ...]:
        return tuple(translation(A[i], n, p) for i in range(m))

    def act(A: Matrix, u: Matrix) -> Matrix:
        return mat_mul(A, u, p) if m and n else A

    orbits = []
    placed = set()
    for A in epis:
        if A in placed:
            continue
        orb = {act(A, u) for u in induced} if induced else {A}
        placed |= orb
        orbits.append(min(orb))

    # transitive homomorphisms E_m -> U~_n: commuting p-torsion tuples
    order_p = [g for g in G if _power(g, p) == ident]
    homs = []
    for imgs in itertools.product(order_p, repeat=m):
        if all(_compose(a, b) == _compose(b, a) for a, b in itertools.combinations(imgs, 2)):
            if _is_transitive(imgs, size) and not (m == 0 and size > 1):
                homs.append(imgs)
    classes: Dict[Tuple[Perm, ...], int] = {}
    for h in homs:
        if h in classes:
            continue
        label = len(set(classes.values()))
        for g in G:
            classes[tuple(conj(x, g) for x in h)] = label
    transrep_count = len(set(classes.values()))

    images = [classes[rep_of(A)] for A in orbits]
    # the induced linear map sends basis vectors to basis vectors
    mat = np.zeros((max(transrep_count, 1), len(orbits)), dtype=np.int64)
    for j, lab in enumerate(images):
        mat[lab, j] = 1
    rk = exactlin.rank(mat, p) if orbits else 0
    return {
        "p": p,
        "n": n,
        "m": m,
        "epi_orbit_count": len(orbits),
        "transrep_count": transrep_count,
        "rank": rk,
        "injective": rk == len(orbits),
        "normaliser_induces_unipotent": normaliser_is_unipotent,
    }


def _transpose(a: Matrix) -> Matrix:
    return tuple(zip(*a)) if a else a


def _power(g: Perm, k: int) -> Perm:
    out = tuple(range(len(g)))
    for _ in range(k):
        out = _compose(out, g)
    return out
