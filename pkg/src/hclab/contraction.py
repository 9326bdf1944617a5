"""The total-length-m complex of summand models and its certificate.

Nodes are (n, k) with n + k = m, listed from L_m = (0, m) down to
R_mL_0 = (m, 0).  The map d goes (n, k) -> (n+1, k-1) and is left
multiplication by ê_{n+1}e_k; s goes back and is e_kê_{n+1}.  Both scalars
are fixed to 1; verify_homotopy sweeps every nonzero pair (λ, μ).

Two backends:

* ``hecke-regular``: the regular left module H_m, node spaces the images of
  the node idempotents ê_ne_k.  Ungraded; one pseudo-degree, reported as
  null.
* ``invariants``: the graded p = 2 model of ``invariants``, one block per
  homological degree d <= D.

Ends: at (0, m) only s∘d exists and equals e_m on the node; at (m, 0) only
d∘s exists and equals ê_m.  The map out of (m, 0) is zero.  At m = 0 the
single node L_0 is exact against its augmentation, which is counted as
its outgoing map.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

import numpy as np

from . import exactlin, hecke, invariants
from .errors import GuardError

BACKENDS = ("hecke-regular", "invariants")
REGULAR_TOTAL_GUARD = 5

Node = Tuple[int, int]


@dataclass
class TotalComplex:
    m: int
    p: int
    backend: str
    D: Optional[int]
    nodes: List[Node]
    degrees: List[Optional[int]]
    # basis[(node, d)]: columns spanning the node inside the ambient module
    basis: Dict[Tuple[Node, Optional[int]], np.ndarray] = field(default_factory=dict)
    # d_maps[(node, d)]: matrix node -> next node; s_maps[(node, d)]: next node -> node
    d_maps: Dict[Tuple[Node, Optional[int]], np.ndarray] = field(default_factory=dict)
    s_maps: Dict[Tuple[Node, Optional[int]], np.ndarray] = field(default_factory=dict)

    def dim(self, node: Node, d: Optional[int]) -> int:
        b = self.basis.get((node, d))
        return 0 if b is None else int(b.shape[1])

    def next(self, node: Node) -> Optional[Node]:
        n, k = node
        return (n + 1, k - 1) if k >= 1 else None

    def prev(self, node: Node) -> Optional[Node]:
        n, k = node
        return (n - 1, k + 1) if n >= 1 else None


def _nodes(m: int) -> List[Node]:
    return [(m - k, k) for k in range(m, -1, -1)]


def _restricted(op: np.ndarray, src: np.ndarray, dst: np.ndarray, p: int) -> np.ndarray:
    if src.shape[1] == 0 or dst.shape[1] == 0:
        return np.zeros((dst.shape[1], src.shape[1]), dtype=np.int64)
    return exactlin.restrict(op, src, exactlin.Coordinates(dst, p), p)


def build_total_complex(m: int, p: int, backend: str, D: Optional[int] = None) -> TotalComplex:
    if backend not in BACKENDS:
        raise ValueError(f"unknown backend {backend!r}; choose from {BACKENDS}")
    exactlin.check_prime(p)
    if m < 0:
        raise ValueError("m must be non-negative")
    if backend == "hecke-regular":
        if D is not None:
            raise ValueError("the hecke-regular backend is ungraded; do not pass a degree bound")
        if m > REGULAR_TOTAL_GUARD:
            raise GuardError("total length (hecke-regular)", m, REGULAR_TOTAL_GUARD)
        return _build_regular(m, p)
    if p != 2:
        raise ValueError("the invariants backend exists at p = 2 only")
    if D is None:
        raise ValueError("the invariants backend needs a degree bound D")
    if m > invariants.MODEL_TOTAL_GUARD:
        raise GuardError("total length (invariants)", m, invariants.MODEL_TOTAL_GUARD)
    if D > invariants.MODEL_DEGREE_GUARD:
        raise GuardError("degree bound", D, invariants.MODEL_DEGREE_GUARD)
    return _build_invariants(m, D)


def _build_regular(m: int, p: int) -> TotalComplex:
    A = hecke.algebra(m, p)
    c = TotalComplex(m, p, "hecke-regular", None, _nodes(m), [None])
    for n, k in c.nodes:
        c.basis[((n, k), None)] = exactlin.column_basis(A.left_matrix(hecke.node_idempotent(n, k, p)), p)
    for node in c.nodes:
        nxt = c.next(node)
        if nxt is None:
            continue
        d, s = hecke.ds_elements(node[0], node[1], p)
        src, dst = c.basis[(node, None)], c.basis[(nxt, None)]
        c.d_maps[(node, None)] = _restricted(A.left_matrix(d.vector), src, dst, p)
        c.s_maps[(node, None)] = _restricted(A.left_matrix(s.vector), dst, src, p)
    return c


def _build_invariants(m: int, D: int) -> TotalComplex:
    p = invariants.P
    if m == 0:
        L0 = invariants.module_model(0, 0, D)
        c = TotalComplex(0, p, "invariants", D, [(0, 0)], [d for d in range(D + 1) if L0.dim(d)])
        for d in c.degrees:
            c.basis[((0, 0), d)] = L0.basis[d]
        return c
    T = invariants.total_model(m, D)
    degrees = [d for d in T.degrees if T.dim(d)]
    c = TotalComplex(m, p, "invariants", D, _nodes(m), degrees)
    for n, k in c.nodes:
        model = invariants.module_model(n, k, D)
        for d in degrees:
            c.basis[((n, k), d)] = model.basis[d]
    for node in c.nodes:
        nxt = c.next(node)
        if nxt is None:
            continue
        d_el, s_el = hecke.ds_elements(node[0], node[1], p)
        for deg in degrees:
            src, dst = c.basis[(node, deg)], c.basis[(nxt, deg)]
            c.d_maps[(node, deg)] = _restricted(T.element(d_el.vector, deg), src, dst, p)
            c.s_maps[(node, deg)] = _restricted(T.element(s_el.vector, deg), dst, src, p)
    return c


def verify_chain(c: TotalComplex) -> Tuple[bool, bool]:
    """(d∘d = 0, s∘s = 0) over every pair of consecutive maps and degree."""
    d_ok = s_ok = True
    for node in c.nodes:
        mid = c.next(node)
        if mid is None or c.next(mid) is None:
            continue
        for deg in c.degrees:
            d1, d2 = c.d_maps[(node, deg)], c.d_maps[(mid, deg)]
            s1, s2 = c.s_maps[(node, deg)], c.s_maps[(mid, deg)]
            d_ok = d_ok and not np.mod(d2 @ d1, c.p).any()
            s_ok = s_ok and not np.mod(s1 @ s2, c.p).any()
    return bool(d_ok), bool(s_ok)


def node_operator(c: TotalComplex, node: Node, deg: Optional[int], lam: int, mu: int) -> np.ndarray:
    """λ·(d∘s) + μ·(s∘d) on one node and degree; absent composites dropped."""
    r = c.dim(node, deg)
    op = np.zeros((r, r), dtype=np.int64)
    if c.m == 0:
        return np.eye(r, dtype=np.int64)  # the augmentation composite
    prv, nxt = c.prev(node), c.next(node)
    if prv is not None:
        op += lam * (c.d_maps[(prv, deg)] @ c.s_maps[(prv, deg)])
    if nxt is not None:
        op += mu * (c.s_maps[(node, deg)] @ c.d_maps[(node, deg)])
    return np.mod(op, c.p)


def _verdict(op: np.ndarray, p: int):
    if op.shape[0] == 0:
        return "invertible"
    rk, K = exactlin.rank_and_kernel(op, p)
    if rk == op.shape[0]:
        return "invertible"
    return {"singular": [int(x) for x in K[:, 0]]}


def verify_homotopy(c: TotalComplex, lam: int, mu: int) -> Dict[Tuple[Node, Optional[int]], object]:
    """Verdict per (node, degree): "invertible" or {"singular": kernel vector}."""
    if lam % c.p == 0 or mu % c.p == 0:
        raise ValueError("λ and μ must be nonzero mod p")
    return {
        (node, deg): _verdict(node_operator(c, node, deg, lam, mu), c.p)
        for node in c.nodes
        for deg in c.degrees
    }


def degenerate_scalars_singular(c: TotalComplex) -> bool:
    """With λ = 0 or μ = 0 the operator is singular at interior nodes whose two parts are both nonzero."""
    for node in c.nodes:
        prv, nxt = c.prev(node), c.next(node)
        if prv is None or nxt is None:
            continue
        for deg in c.degrees:
            if c.dim(node, deg) == 0:
                continue
            first = np.mod(c.d_maps[(prv, deg)] @ c.s_maps[(prv, deg)], c.p)
            second = np.mod(c.s_maps[(node, deg)] @ c.d_maps[(node, deg)], c.p)
            if not first.any() or not second.any():
                continue
            r = c.dim(node, deg)
            if exactlin.rank(first, c.p) == r or exactlin.rank(second, c.p) == r:
                return False
    return True


def _ranks(c: TotalComplex, node: Node, deg: Optional[int]) -> Tuple[int, int]:
    if c.m == 0:
        return 0, c.dim(node, deg)
    prv, nxt = c.prev(node), c.next(node)
    rank_in = exactlin.rank(c.d_maps[(prv, deg)], c.p) if prv is not None else 0
    rank_out = exactlin.rank(c.d_maps[(node, deg)], c.p) if nxt is not None else 0
    return rank_in, rank_out


def exactness_certificate(c: TotalComplex, pairs: Optional[List[Tuple[int, int]]] = None) -> Dict[str, object]:
    """Ranks, homotopy verdicts (all nonzero (λ, μ) unless ``pairs`` is given) and chain checks."""
    d_zero, s_zero = verify_chain(c)
    if pairs is None:
        pairs = [(a, b) for a in range(1, c.p) for b in range(1, c.p)]
    verdicts = {pair: verify_homotopy(c, *pair) for pair in pairs}
    exact = True
    nodes = []
    for node in c.nodes:
        entries = []
        for deg in c.degrees:
            dim = c.dim(node, deg)
            rank_in, rank_out = _ranks(c, node, deg)
            exact = exact and rank_in + rank_out == dim
            entries.append({
                "d": deg,
                "dim": dim,
                "rank_in": rank_in,
                "rank_out": rank_out,
                "homotopy": {f"{a},{b}": verdicts[(a, b)][(node, deg)] for a, b in pairs},
            })
        nodes.append({"n": node[0], "k": node[1], "degrees": entries})
    return {
        "m": c.m,
        "p": c.p,
        "backend": c.backend,
        "D": c.D,
        "nodes": nodes,
        "d_squared_zero": d_zero,
        "s_squared_zero": s_zero,
        "exact": bool(exact),
    }


def certificate_json(cert: Dict[str, object]) -> str:
    """Canonical serialisation: same certificate, same bytes."""
    return json.dumps(cert, ensure_ascii=False, separators=(",", ":"), sort_keys=False) + "\n"


def all_invertible(cert: Dict[str, object]) -> bool:
    return all(
        v == "invertible"
        for node in cert["nodes"]  # type: ignore[union-attr]
        for entry in node["degrees"]
        for v in entry["homotopy"].values()
    )
