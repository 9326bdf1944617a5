"""Group rings of GL_n(F_p) over Q and F_p, and the Steinberg idempotent.

Group elements are interned per (n, p) so that products are looked up
rather than recomputed.  Rational coefficients are ``Fraction``; reduction
mod p happens only at the end of a computation, after p-integrality has
been checked.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import chevalley, exactlin, hecke
from .chevalley import Matrix, SubgroupDescriptor
from .errors import GuardError

RINGS = ("Q", "Fp")


class GroupTable:
    """Interned elements of GL_n(F_p) with memoised products."""

    def __init__(self, n: int, p: int):
        self.n = n
        self.p = p
        self.index: Dict[Matrix, int] = {}
        self.elements: List[Matrix] = []
        self._products: Dict[Tuple[int, int], int] = {}

    def intern(self, g: Matrix) -> int:
        j = self.index.get(g)
        if j is None:
            j = len(self.elements)
            self.index[g] = j
            self.elements.append(g)
        return j

    def mul(self, a: int, b: int) -> int:
        key = (a, b)
        out = self._products.get(key)
        if out is None:
            out = self.intern(chevalley.mat_mul(self.elements[a], self.elements[b], self.p))
            self._products[key] = out
        return out


@lru_cache(maxsize=None)
def group_table(n: int, p: int) -> GroupTable:
    return GroupTable(n, p)


@dataclass
class GroupRingElement:
    """A finitely supported combination of group elements; zeros are not stored."""

    n: int
    p: int
    ring: str
    coeffs: Dict[int, object] = field(default_factory=dict)

    def __post_init__(self):
        if self.ring not in RINGS:
            raise ValueError(f"coefficient ring must be one of {RINGS}")
        self.coeffs = {g: c for g, c in self.coeffs.items() if c}

    @property
    def table(self) -> GroupTable:
        return group_table(self.n, self.p)

    @classmethod
    def from_matrices(cls, n: int, p: int, ring: str, terms: Dict[Matrix, object]) -> "GroupRingElement":
        t = group_table(n, p)
        out: Dict[int, object] = {}
        for g, c in terms.items():
            j = t.intern(g)
            out[j] = out.get(j, 0) + c
        return cls(n, p, ring, _normalise(out, ring, p))

    def terms(self) -> Dict[Matrix, object]:
        return {self.table.elements[j]: c for j, c in self.coeffs.items()}

    def __mul__(self, other: "GroupRingElement") -> "GroupRingElement":
        return gr_multiply(self, other)

    def __eq__(self, other) -> bool:
        if not isinstance(other, GroupRingElement):
            return NotImplemented
        return (self.n, self.p, self.ring) == (other.n, other.p, other.ring) and self.coeffs == other.coeffs

    def scale(self, c) -> "GroupRingElement":
        return GroupRingElement(self.n, self.p, self.ring, _normalise({g: c * x for g, x in self.coeffs.items()}, self.ring, self.p))

    def is_p_integral(self) -> bool:
        if self.ring == "Fp":
            return True
        return all(exactlin.p_local_check(Fraction(c), self.p) for c in self.coeffs.values())

    def reduce_mod_p(self) -> "GroupRingElement":
        """Image in F_p[G]; refuses non p-integral coefficients."""
        if self.ring == "Fp":
            return self
        red = {g: exactlin.reduce_mod_p(Fraction(c), self.p) for g, c in self.coeffs.items()}
        return GroupRingElement(self.n, self.p, "Fp", red)


def _normalise(coeffs: Dict[int, object], ring: str, p: int) -> Dict[int, object]:
    if ring == "Fp":
        coeffs = {g: int(c) % p for g, c in coeffs.items()}
    else:
        coeffs = {g: Fraction(c) for g, c in coeffs.items()}
    return {g: c for g, c in sorted(coeffs.items()) if c}


def gr_multiply(a: GroupRingElement, b: GroupRingElement) -> GroupRingElement:
    if (a.n, a.p, a.ring) != (b.n, b.p, b.ring):
        raise ValueError("group ring elements live in different rings")
    t = a.table
    out: Dict[int, object] = {}
    for g, x in a.coeffs.items():
        for h, y in b.coeffs.items():
            k = t.mul(g, h)
            out[k] = out.get(k, 0) + x * y
    return GroupRingElement(a.n, a.p, a.ring, _normalise(out, a.ring, a.p))


def subgroup_sum(desc: SubgroupDescriptor, ring: str = "Q") -> GroupRingElement:
    return GroupRingElement.from_matrices(desc.n, desc.p, ring, {g: 1 for g in chevalley.enumerate_subgroup(desc)})


def identity_element(n: int, p: int, ring: str = "Q") -> GroupRingElement:
    return GroupRingElement.from_matrices(n, p, ring, {chevalley.mat_identity(n): 1})


def signed_weyl_sum(n: int, p: int, ring: str = "Q") -> GroupRingElement:
    terms = {chevalley.perm_matrix(w): (-1) ** chevalley.length(w) for w in chevalley.weyl_group(n)}
    return GroupRingElement.from_matrices(n, p, ring, terms)


@lru_cache(maxsize=None)
def steinberg(n: int, p: int) -> GroupRingElement:
    """e^St_n = [GL_n : U_n]^{-1} * (signed Weyl sum) * (Borel sum), over Q.

    For n = 1 this is the average of the scalar matrices F_p^x, which is
    [e] only when p = 2.
    """
    full = SubgroupDescriptor("Full", n, p).formula_order()
    if full > chevalley.ORDER_GUARD:
        raise GuardError(f"GL_{n}(F_{p})", full, chevalley.ORDER_GUARD)
    index = Fraction(full, SubgroupDescriptor("Unipotent", n, p).formula_order())
    prod = signed_weyl_sum(n, p) * subgroup_sum(SubgroupDescriptor("Borel", n, p))
    return prod.scale(1 / index)


def embed(x: GroupRingElement, extra: int = 1) -> GroupRingElement:
    """Push forward along GL_k -> GL_{k+extra}, g -> diag(g, 1)."""
    one = chevalley.mat_identity(extra)
    terms = {chevalley.block_diag(g, one): c for g, c in x.terms().items()}
    return GroupRingElement.from_matrices(x.n + extra, x.p, x.ring, terms)


def steinberg_check(n: int, p: int) -> Dict[str, object]:
    e = steinberg(n, p)
    return {
        "n": n,
        "p": p,
        "support": len(e.coeffs),
        "idempotent": e * e == e,
        "p_integral": e.is_p_integral(),
    }


def steinberg_chain(k: int, p: int) -> bool:
    """e^St_k e^St_{k+1} = e^St_{k+1} = e^St_{k+1} e^St_k in Q[GL_{k+1}]."""
    small = embed(steinberg(k, p))
    big = steinberg(k + 1, p)
    return small * big == big and big * small == big


# ---------------------------------------------------------------------------
# coinvariants of the regular module


@dataclass(frozen=True)
class CoinvariantSpace:
    """F_p[H\\G] for the regular module F_p[G]: basis = right cosets Hg."""

    n: int
    p: int
    subgroup: SubgroupDescriptor
    labels: Tuple[int, ...]  # coset label of each element of G (in enumeration order)
    count: int

    @property
    def dim(self) -> int:
        return self.count


@lru_cache(maxsize=None)
def _full_group(n: int, p: int) -> Tuple[Matrix, ...]:
    return tuple(sorted(chevalley.enumerate_subgroup(SubgroupDescriptor("Full", n, p))))


@lru_cache(maxsize=None)
def coinvariant_space(desc: SubgroupDescriptor) -> CoinvariantSpace:
    G = _full_group(desc.n, desc.p)
    H = chevalley.enumerate_subgroup(desc)
    work = len(G) * len(H)
    if work > chevalley.ORDER_GUARD:
        raise GuardError("coset partition of the regular module", work, chevalley.ORDER_GUARD)
    pos = {g: j for j, g in enumerate(G)}
    labels = [-1] * len(G)
    count = 0
    for j, g in enumerate(G):
        if labels[j] >= 0:
            continue
        for h in H:
            labels[pos[chevalley.mat_mul(h, g, desc.p)]] = count
        count += 1
    return CoinvariantSpace(desc.n, desc.p, desc, tuple(labels), count)


def _is_subgroup(K: SubgroupDescriptor, H: SubgroupDescriptor) -> bool:
    hs = set(chevalley.enumerate_subgroup(H))
    return all(k in hs for k in chevalley.enumerate_subgroup(K))


def coinvariants_and_transfer(H: SubgroupDescriptor, K: SubgroupDescriptor) -> Tuple[np.ndarray, np.ndarray]:
    """Quotient M_K -> M_H and transfer M_H -> M_K for M = F_p[G], K < H.

    Matrices act on column vectors indexed by coset labels.  The transfer
    sends Hg to the sum of K h g over representatives h of K\\H.
    """
    if (H.n, H.p) != (K.n, K.p):
        raise ValueError("subgroups of different groups")
    if not _is_subgroup(K, H):
        raise ValueError(f"{K.tag} is not a subgroup of {H.tag}")
    p = H.p
    G = _full_group(H.n, p)
    pos = {g: j for j, g in enumerate(G)}
    MH, MK = coinvariant_space(H), coinvariant_space(K)
    quotient = np.zeros((MH.dim, MK.dim), dtype=np.int64)
    for j in range(len(G)):
        quotient[MH.labels[j], MK.labels[j]] = 1
    # representatives of K\H
    reps: List[Matrix] = []
    seen = set()
    kset = chevalley.enumerate_subgroup(K)
    for h in sorted(chevalley.enumerate_subgroup(H)):
        if h in seen:
            continue
        reps.append(h)
        seen |= {chevalley.mat_mul(k, h, p) for k in kset}
    transfer = np.zeros((MK.dim, MH.dim), dtype=np.int64)
    done = set()
    for j, g in enumerate(G):
        c = MH.labels[j]
        if c in done:
            continue
        done.add(c)
        for h in reps:
            transfer[MK.labels[pos[chevalley.mat_mul(h, g, p)]], c] += 1
    return np.mod(quotient, p), np.mod(transfer, p)


# ---------------------------------------------------------------------------
# Steinberg element against the Hecke algebra


def steinberg_on_cosets(n: int, p: int, seed: Optional[int] = None) -> np.ndarray:
    """The composite F_p[B\\G] -> F_p[G] -> F_p[B\\G] given by e^St_n.

    The section picks the stored canonical representative of each coset, or
    with ``seed`` set, a random left B-translate of it.
    """
    e = steinberg(n, p)
    cosets = chevalley.enumerate_cosets(n, p)
    index = {c: j for j, c in enumerate(cosets)}
    borel = sorted(chevalley.enumerate_subgroup(SubgroupDescriptor("Borel", n, p)))
    rng = random.Random(seed)
    terms = e.terms()
    M = [[Fraction(0)] * len(cosets) for _ in cosets]
    for j, c in enumerate(cosets):
        g = c if seed is None else chevalley.mat_mul(rng.choice(borel), c, p)
        for x, coef in terms.items():
            M[index[chevalley.flag_echelon(chevalley.mat_mul(x, g, p), p)]][j] += coef
    return np.array([[exactlin.reduce_mod_p(v, p) for v in row] for row in M], dtype=np.int64)


def steinberg_vs_hecke(n: int, p: int) -> bool:
    """The projected Steinberg element equals e_n acting on F_p[B\\G], for two sections."""
    target = hecke.representation(hecke.longest_idempotent(n, p))
    first = steinberg_on_cosets(n, p)
    second = steinberg_on_cosets(n, p, seed=12345)
    return bool(np.array_equal(first, target) and np.array_equal(second, target))
