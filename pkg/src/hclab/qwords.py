"""Dyer-Lashof word combinatorics on the degree-1 class ι.

A word is written left to right in the usual notation,
β^{ε_1}Q^{s_1} ... β^{ε_n}Q^{s_n} ι, and is applied right to left: the last
pair acts first.  At p = 2 every ε is 0 and Q^s raises degree by s; at odd p,
β^εQ^s raises degree by 2(p-1)s - ε.

Conventions (odd p ones chosen so that the bottom class of the length-k
completely inadmissible words sits in degree 2p^k - 1 - k, alone):

* unstable: Q^s x needs s >= |x| at p = 2, and 2s - ε >= |x| at odd p;
* admissible pair β^{ε}Q^{s} β^{ε'}Q^{s'}: s <= 2s' at p = 2,
  s <= p s' - ε' at odd p; strictly inadmissible otherwise.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from functools import lru_cache
from math import comb
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import exactlin
from .errors import GuardError

DEGREE_GUARD = 64
Op = Tuple[int, int]  # (ε, s)


@dataclass(frozen=True)
class QWord:
    p: int
    ops: Tuple[Op, ...]

    def __post_init__(self):
        exactlin.check_prime(self.p)
        for eps, s in self.ops:
            if s < 1 or eps not in (0, 1):
                raise ValueError(f"bad operation (ε={eps}, s={s})")
            if self.p == 2 and eps:
                raise ValueError("no Bocksteins at p = 2")

    @classmethod
    def of(cls, p: int, *indices: int) -> "QWord":
        """A p = 2 style word from plain indices, e.g. QWord.of(2, 3, 1) = Q^3Q^1ι."""
        return cls(p, tuple((0, s) for s in indices))

    def __len__(self) -> int:
        return len(self.ops)

    def __str__(self) -> str:
        parts = [("β" if e else "") + f"Q^{s}" for e, s in self.ops]
        return "".join(parts) + "ι"


def op_degree(p: int, op: Op) -> int:
    eps, s = op
    return s if p == 2 else 2 * (p - 1) * s - eps


def argument_degrees(w: QWord) -> List[int]:
    """Degree of the argument of each operation, in written order."""
    deg = 1
    out = [0] * len(w.ops)
    for j in range(len(w.ops) - 1, -1, -1):
        out[j] = deg
        deg += op_degree(w.p, w.ops[j])
    return out


def word_degree(w: QWord) -> int:
    return 1 + sum(op_degree(w.p, op) for op in w.ops)


def unstable_ok(p: int, op: Op, deg: int) -> bool:
    eps, s = op
    return s >= deg if p == 2 else 2 * s - eps >= deg


def is_unstable(w: QWord) -> bool:
    """True when every operation clears the instability bound on its argument."""
    return all(unstable_ok(w.p, op, d) for op, d in zip(w.ops, argument_degrees(w)))


def pair_admissible(p: int, left: Op, right: Op) -> bool:
    if p == 2:
        return left[1] <= 2 * right[1]
    return left[1] <= p * right[1] - right[0]


def is_admissible_pair(w: QWord, j: int) -> bool:
    """Is the pair (ops[j], ops[j+1]) admissible?"""
    return pair_admissible(w.p, w.ops[j], w.ops[j + 1])


def is_admissible(w: QWord) -> bool:
    return all(is_admissible_pair(w, j) for j in range(len(w) - 1))


def is_completely_inadmissible(w: QWord) -> bool:
    return all(not is_admissible_pair(w, j) for j in range(len(w) - 1))


# ---------------------------------------------------------------------------
# enumeration
#
# Words are grown in application order: ops are prepended on the left.  A
# pattern gives, for each pair of consecutive applied operations, 'A'
# (admissible), 'I' (strictly inadmissible) or None (free).


def _ops_for(p: int) -> Sequence[int]:
    return (0,) if p == 2 else (0, 1)


def _grow(p: int, pattern: Sequence[Optional[str]], length: int, dmax: int):
    """Yield (degree, ops) for unstable words of the given length with degree <= dmax."""
    def rec(ops: Tuple[Op, ...], deg: int):
        if len(ops) == length:
            yield deg, ops
            return
        pos = len(ops)  # number already applied
        for eps in _ops_for(p):
            s = 1
            while True:
                op = (eps, s)
                step = op_degree(p, op)
                if deg + step > dmax:
                    break
                if step > 0 and unstable_ok(p, op, deg):
                    rule = pattern[pos - 1] if pos >= 1 else None
                    ok = True
                    if rule is not None:
                        adm = pair_admissible(p, op, ops[0])
                        ok = adm if rule == "A" else not adm
                    if ok:
                        yield from rec((op,) + ops, deg + step)
                s += 1

    yield from rec((), 1)


def _count_by_degree(p: int, pattern: Sequence[Optional[str]], length: int, dmax: int) -> Dict[int, int]:
    counts: Dict[int, int] = defaultdict(int)
    for d, _ in _grow(p, pattern, length, dmax):
        counts[d] += 1
    return dict(counts)


def node_pattern(n: int, k: int, bridge_admissible: bool = False) -> List[Optional[str]]:
    """Pair constraints for R_nL_k in application order.

    The first k operations (the L_k part) are pairwise strictly inadmissible,
    the last n pairwise admissible.  The pair joining the two blocks is left
    free unless ``bridge_admissible``; with it free the node dimensions
    satisfy the exactness rank equation of the total complex.
    """
    m = n + k
    pattern: List[Optional[str]] = []
    for j in range(1, m):  # pair between applied ops j and j+1
        if j < k:
            pattern.append("I")
        elif j == k:
            pattern.append("A" if bridge_admissible else None)
        else:
            pattern.append("A")
    return pattern


def _check_degree(d: int) -> None:
    if d > DEGREE_GUARD:
        raise GuardError("word enumeration degree", d, DEGREE_GUARD)


@lru_cache(maxsize=None)
def count_series(p: int, n: int, k: int, dmax: int, bridge_admissible: bool = False) -> Tuple[Tuple[int, int], ...]:
    _check_degree(dmax)
    counts = _count_by_degree(p, node_pattern(n, k, bridge_admissible), n + k, dmax)
    return tuple(sorted(counts.items()))


def enumerate_count(p: int, n: int, k: int, d: int, bridge_admissible: bool = False) -> int:
    """Dimension of the word model of R_nL_k in degree d."""
    return dict(count_series(p, n, k, d, bridge_admissible)).get(d, 0)


@lru_cache(maxsize=None)
def free_series(p: int, m: int, dmax: int) -> Tuple[Tuple[int, int], ...]:
    _check_degree(dmax)
    return tuple(sorted(_count_by_degree(p, [None] * max(m - 1, 0), m, dmax).items()))


def free_count(p: int, m: int, d: int) -> int:
    """All unstable words of length m in degree d (the model of R_1^m L_0)."""
    return dict(free_series(p, m, d)).get(d, 0)


def admissible_count(p: int, m: int, d: int) -> int:
    return enumerate_count(p, m, 0, d)


def inadmissible_count(p: int, m: int, d: int) -> int:
    return enumerate_count(p, 0, m, d)


def words(p: int, pattern: Sequence[Optional[str]], length: int, d: int) -> List[QWord]:
    _check_degree(d)
    return sorted(
        (QWord(p, ops) for deg, ops in _grow(p, pattern, length, d) if deg == d),
        key=lambda w: w.ops,
    )


def bottom_degree(p: int, k: int, start_bound: int = 8) -> Dict[str, int]:
    """Lowest degree carrying a completely inadmissible unstable word of length k.

    The search bound doubles until a word is found; the multiplicity is the
    number of words in that degree.
    """
    exactlin.check_prime(p)
    if k == 0:
        return {"p": p, "k": 0, "degree": 1, "multiplicity": 1}
    bound = start_bound
    pattern = ["I"] * (k - 1)
    while True:
        counts = _count_by_degree(p, pattern, k, bound)
        if counts:
            d = min(counts)
            return {"p": p, "k": k, "degree": d, "multiplicity": counts[d]}
        bound *= 2
        if bound > 1 << 16:
            raise GuardError("bottom degree search bound", bound, 1 << 16)


# ---------------------------------------------------------------------------
# Adem rewriting at p = 2


def _adem_pair(r: int, s: int) -> List[Tuple[int, int]]:
    """Q^rQ^s for r > 2s as a list of admissible pairs (mod 2 coefficients)."""
    out = []
    for i in range((r + 1) // 2, r - s):
        if comb(i - s - 1, 2 * i - r) % 2:
            out.append((r + s - i, i))
    return out


def adem_rewrite(w: QWord) -> Dict[Tuple[int, ...], int]:
    """Rewrite a p = 2 word into a sum of admissible unstable words.

    Returns a map from index tuples to coefficients in F_2 (zeros dropped).
    Terms that violate instability are zero and are discarded at each step.
    """
    if w.p != 2:
        raise ValueError("Adem rewriting is implemented at p = 2 only")
    result: Dict[Tuple[int, ...], int] = defaultdict(int)
    todo: Dict[Tuple[int, ...], int] = defaultdict(int)
    start = tuple(s for _, s in w.ops)
    if is_unstable(w):
        todo[start] = 1
    while todo:
        idx = max(todo)  # deterministic processing order
        c = todo.pop(idx)
        if not c:
            continue
        bad = next((j for j in range(len(idx) - 1) if idx[j] > 2 * idx[j + 1]), None)
        if bad is None:
            result[idx] = (result[idx] + c) % 2
            continue
        for a, b in _adem_pair(idx[bad], idx[bad + 1]):
            new = idx[:bad] + (a, b) + idx[bad + 2:]
            if is_unstable(QWord.of(2, *new)):
                todo[new] = (todo[new] + c) % 2
    return {k: v for k, v in sorted(result.items()) if v}


def adem_matrix(m: int, d: int) -> Tuple[np.ndarray, List[QWord], List[QWord]]:
    """Matrix of adem_rewrite from free words to admissible words in degree d."""
    free = words(2, [None] * (m - 1), m, d)
    adm = words(2, ["A"] * (m - 1), m, d)
    index = {tuple(s for _, s in w.ops): j for j, w in enumerate(adm)}
    M = np.zeros((len(adm), len(free)), dtype=np.int64)
    for j, w in enumerate(free):
        for idx, c in adem_rewrite(w).items():
            M[index[idx], j] = c
    return M, free, adm
