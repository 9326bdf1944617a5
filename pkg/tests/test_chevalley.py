import itertools

import pytest
from hypothesis import given, settings, strategies as st

from hclab import chevalley as ch
from hclab.chevalley import SubgroupDescriptor as SD
from hclab.errors import GuardError


def _all_invertible(n, p):
    out = []
    for entries in itertools.product(range(p), repeat=n * n):
        g = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        if ch.mat_det(g, p):
            out.append(g)
    return out


@pytest.mark.parametrize("n,p,expected", [(2, 2, 6), (1, 5, 4), (1, 3, 2), (3, 2, 168), (2, 3, 48)])
def test_full_group_order(n, p, expected):
    assert ch.group_order(SD("Full", n, p)) == expected
    assert SD("Full", n, p).formula_order() == expected


def test_full_group_order_against_brute_force():
    assert len(_all_invertible(2, 3)) == ch.group_order(SD("Full", 2, 3))


@pytest.mark.parametrize("tag", ["Borel", "Unipotent", "Weyl", "Full"])
@pytest.mark.parametrize("n,p", [(2, 2), (2, 3), (3, 2)])
def test_subgroup_orders_match_formula(tag, n, p):
    desc = SD(tag, n, p)
    assert len(ch.enumerate_subgroup(desc)) == desc.formula_order()


def test_enumerated_subgroups_are_closed():
    for desc in (SD("Borel", 3, 2), SD("Parabolic", 3, 2, 1), SD("Unipotent", 2, 3)):
        G = set(ch.enumerate_subgroup(desc))
        assert all(ch.mat_mul(a, b, desc.p) in G for a in G for b in G)


@pytest.mark.parametrize("n,p,count", [(1, 2, 1), (2, 2, 3), (2, 3, 4), (3, 2, 21), (3, 3, 52)])
def test_coset_counts(n, p, count):
    cosets = ch.enumerate_cosets(n, p)
    assert len(cosets) == count == ch.coset_count_formula(n, p)
    # canonical representative is idempotent and distinct
    assert all(ch.flag_echelon(c, p) == c for c in cosets)
    assert len(set(cosets)) == len(cosets)


def test_cosets_cover_group_against_brute_force():
    p = 3
    seen = {ch.flag_echelon(g, p) for g in _all_invertible(2, p)}
    assert seen == set(ch.enumerate_cosets(2, p))


def test_flag_echelon_constant_on_borel_cosets():
    p = 2
    borel = ch.enumerate_subgroup(SD("Borel", 3, p))
    for g in _all_invertible(3, p)[::7]:
        reps = {ch.flag_echelon(ch.mat_mul(b, g, p), p) for b in borel}
        assert len(reps) == 1


def test_bruhat_cell_examples():
    assert ch.bruhat_cell(ch.mat_identity(3), 2) == (0, 1, 2)
    for w in ch.weyl_group(3):
        assert ch.bruhat_cell(ch.perm_matrix(w), 3) == w
    assert ch.bruhat_cell(((1, 0), (1, 1)), 2) == ch.simple_reflection(1, 2)


def test_bruhat_cell_constant_on_double_cosets():
    p = 2
    borel = ch.enumerate_subgroup(SD("Borel", 3, p))
    for g in _all_invertible(3, p)[::11]:
        w = ch.bruhat_cell(g, p)
        for b in borel[::3]:
            for c in borel[::4]:
                assert ch.bruhat_cell(ch.mat_mul(ch.mat_mul(b, g, p), c, p), p) == w


def test_double_coset_sizes():
    p = 3
    for w in ch.weyl_group(3):
        assert len(ch.borel_double_coset_reps(w, p)) == p ** ch.length(w)


@pytest.mark.parametrize("i,n,p,idx", [(1, 2, 2, 3), (1, 3, 2, 3), (1, 2, 3, 4), (2, 3, 3, 4)])
def test_parabolic_index(i, n, p, idx):
    assert ch.parabolic_index(i, n, p) == idx == p + 1


def test_permutations():
    n = 4
    W = ch.weyl_group(n)
    assert len(W) == 24
    lengths = ch.word_lengths_bfs(n)
    for w in W:
        word = ch.reduced_word(w)
        assert len(word) == ch.length(w) == lengths[w]
        x = tuple(range(n))
        for i in word:
            x = ch.perm_mul(x, ch.simple_reflection(i, n))
        assert x == w
    w0 = ch.longest_element(n)
    assert ch.length(w0) == 6


@settings(max_examples=40, deadline=None)
@given(st.permutations(range(4)), st.permutations(range(4)))
def test_permutation_matrix_is_a_homomorphism(u, v):
    u, v = tuple(u), tuple(v)
    assert ch.perm_matrix(ch.perm_mul(u, v)) == ch.mat_mul(ch.perm_matrix(u), ch.perm_matrix(v), 2)
    assert ch.perm_mul(u, ch.perm_inverse(u)) == tuple(range(4))


def _brute_epis(m, n, p):
    count = 0
    for entries in itertools.product(range(p), repeat=m * n):
        rows = [entries[i * n:(i + 1) * n] for i in range(m)]
        if ch._rank_mod_p(rows, p) == n:
            count += 1
    return count


@pytest.mark.parametrize("m,n,p,expected", [(2, 1, 2, 3), (1, 2, 2, 0), (2, 2, 2, 6), (3, 2, 3, 624)])
def test_count_epis_examples(m, n, p, expected):
    assert ch.count_epis(m, n, p) == expected


def test_count_epis_formula_vs_brute_force():
    for p in (2, 3):
        for m in range(4):
            for n in range(4):
                if p ** (m * n) <= 20000:
                    assert ch.count_epis_formula(m, n, p) == _brute_epis(m, n, p)


def test_transrep_examples():
    r = ch.transrep_injectivity(2, 1, 1)
    assert (r["epi_orbit_count"], r["transrep_count"], r["injective"]) == (1, 1, True)
    r = ch.transrep_injectivity(2, 1, 0)
    assert (r["epi_orbit_count"], r["transrep_count"], r["injective"]) == (0, 0, True)
    r = ch.transrep_injectivity(2, 2, 2)
    assert r["injective"] and r["normaliser_induces_unipotent"]


def test_wreath_group_order():
    assert len(ch.wreath_group(1, 2)) == 2
    assert len(ch.wreath_group(2, 2)) == 8


def test_guards():
    with pytest.raises(GuardError) as info:
        ch.enumerate_subgroup(SD("Full", 5, 3))
    assert info.value.estimate > info.value.limit
    with pytest.raises(GuardError):
        ch.enumerate_cosets(6, 3)
    with pytest.raises(ValueError):
        SD("Parabolic", 3, 2, 3)
    with pytest.raises(ValueError):
        SD("Nonsense", 2, 2)
