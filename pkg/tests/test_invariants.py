import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hclab import exactlin, invariants as inv, qwords
from hclab.chevalley import SubgroupDescriptor as SD
from hclab.errors import GuardError


def _matrices(n):
    for entries in itertools.product(range(2), repeat=n * n):
        yield tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))


def test_monomial_counts():
    assert inv.monomial_count(2, 3) == 4
    assert inv.monomial_count(3, 2) == 6
    assert len(inv.monomials(3, 4)) == inv.monomial_count(3, 4)


def test_trivial_subgroup_gives_all_monomials():
    assert inv.invariant_basis(SD("Trivial", 2, 2), 3).dim == 4


def test_borel_degree_one():
    assert inv.invariant_dim(2, 1) == 1


def test_dickson_series():
    # polynomial algebra on generators of degrees 2 and 3
    expected = [sum(1 for a in range(d + 1) for b in range(d + 1) if 2 * a + 3 * b == d) for d in range(13)]
    assert [inv.invariant_dim(2, d, "Full") for d in range(13)] == expected


def test_invariants_fixed_by_whole_group():
    from hclab import chevalley

    desc = SD("Borel", 3, 2)
    B = inv.invariant_basis(desc, 4).basis
    for g in chevalley.enumerate_subgroup(desc):
        assert np.array_equal(np.mod(inv.substitution_matrix(g, 4) @ B, 2), B)


def test_euler_class_examples():
    assert inv.euler_class(1) == {(1,): 1}
    assert inv.euler_class(2) == {(2, 1): 1, (1, 2): 1}
    # y -> x: both variables go to x
    assert inv.substitute(inv.euler_class(2), ((1, 1), (0, 0))) == {}


@pytest.mark.parametrize("n", [2, 3])
def test_euler_class_invariant_or_killed(n):
    c = inv.euler_class(n)
    assert sum(next(iter(c))) == 2**n - 1
    from hclab import chevalley

    for g in _matrices(n):
        image = inv.substitute(c, g)
        if chevalley.mat_det(g, 2):
            assert image == c
        else:
            assert image == {}


def test_steenrod_examples():
    assert np.array_equal(inv.steenrod_matrix(0, 2, 3), np.eye(4, dtype=np.int64))
    assert inv.steenrod_matrix(1, 1, 1).tolist() == [[1]]
    assert not inv.steenrod_matrix(3, 2, 2).any()


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 4), st.integers(0, 4), st.integers(0, 8), st.data())
def test_cartan_formula(a, b, k, data):
    n = 2
    f = {m: 1 for m in data.draw(st.sets(st.sampled_from(inv.monomials(n, a)), min_size=1))}
    g = {m: 1 for m in data.draw(st.sets(st.sampled_from(inv.monomials(n, b)), min_size=1))}
    fg = inv._poly_mul(f, g)
    lhs = np.mod(inv.steenrod_matrix(k, n, a + b) @ inv.poly_from_dict(n, a + b, fg), 2) if k <= a + b else None
    if lhs is None:
        return
    rhs = {}
    for i in range(k + 1):
        if i > a or k - i > b:
            continue
        sf = inv.poly_to_dict(n, a + i, np.mod(inv.steenrod_matrix(i, n, a) @ inv.poly_from_dict(n, a, f), 2))
        sg = inv.poly_to_dict(n, b + k - i, np.mod(inv.steenrod_matrix(k - i, n, b) @ inv.poly_from_dict(n, b, g), 2))
        for m, c in inv._poly_mul(sf, sg).items():
            rhs[m] = (rhs.get(m, 0) + c) % 2
    rhs = {m: c for m, c in rhs.items() if c}
    assert inv.poly_to_dict(n, a + b + k, lhs) == rhs


def test_twisted_square_is_square_of_product():
    # Sq^k(c_n f) computed on c_n f directly agrees with the cofactor formula
    n = 2
    c = inv.euler_class(n)
    for j in range(4):
        for k in range(j + 4):
            T = inv.twisted_steenrod_matrix(k, n, j)
            for col, m in enumerate(inv.monomials(n, j)):
                cf = inv._poly_mul(c, {m: 1})
                direct = np.mod(inv.steenrod_matrix(k, n, j + 3) @ inv.poly_from_dict(n, j + 3, cf), 2)
                via = inv._poly_mul(c, inv.poly_to_dict(n, j + k, T[:, col]))
                assert inv.poly_to_dict(n, j + k + 3, direct) == via


def test_hecke_operator_examples():
    # (n, d) = (2, 4)
    eh = inv.hecke_operator(1, 2, 4)
    e = inv.hecke_operator(1, 2, 4, hat=False)
    assert np.array_equal(np.mod(eh @ eh, 2), eh)
    assert not np.mod(e @ eh, 2).any()


def test_hecke_operator_identity_on_parabolic_invariants():
    n, i = 2, 1
    for j in range(6):
        V = inv._invariant_basis(SD("Borel", n, 2), j)
        W = inv._invariant_basis(SD("Parabolic", n, 2, i), j)
        if W.size == 0:
            continue
        C = inv.transfer_matrix(i, n, j)
        assert np.array_equal(np.mod(C @ W, 2), W)


def test_transfer_independent_of_representatives():
    n, i, j = 3, 2, 4
    reps = list(inv.parabolic_coset_reps(i, n))
    from hclab import chevalley

    borel = sorted(chevalley.enumerate_subgroup(SD("Borel", n, 2)))
    shuffled = [chevalley.mat_mul(g, borel[(5 * t + 3) % len(borel)], 2) for t, g in enumerate(reversed(reps))]
    V = inv._invariant_basis(SD("Borel", n, 2), j)
    a = np.mod(inv.transfer_matrix(i, n, j) @ V, 2)
    b = np.mod(inv.transfer_matrix(i, n, j, shuffled) @ V, 2)
    assert np.array_equal(a, b)


@pytest.mark.parametrize("n", [2, 3])
def test_hecke_commutes_with_squares(n):
    for j in range(0, 7):
        for k in range(1, 6):
            S = inv.twisted_steenrod_on_invariants(k, n, j)
            if S.size == 0:
                continue
            for i in range(1, n):
                d = j + 2**n - 1
                lo, hi = inv.hecke_operator(i, n, d), inv.hecke_operator(i, n, d + k)
                assert np.array_equal(np.mod(S @ lo, 2), np.mod(hi @ S, 2))


def test_module_model_examples():
    L1 = inv.module_model(0, 1, 12)
    assert [L1.dim(d) for d in range(13)] == [0, 0] + [1] * 11
    L2 = inv.module_model(0, 2, 12)
    assert min(d for d in range(13) if L2.dim(d)) == 5 and L2.dim(5) == 1
    assert inv.module_model(2, 0, 12).dim(5) == 0
    L0 = inv.module_model(0, 0, 5)
    assert [L0.dim(d) for d in range(6)] == [0, 1, 0, 0, 0, 0]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_model_bottom_degree(k):
    D = 2 * 2**k - 1 - k
    model = inv.module_model(0, k, D)
    dims = [model.dim(d) for d in range(D + 1)]
    assert dims[:D] == [0] * D and dims[D] == 1


def test_model_dims_match_idempotent_rank():
    T = inv.total_model(3, 16)
    from hclab import hecke

    for n, k in [(1, 2), (2, 1)]:
        M = inv.module_model(n, k, 16)
        for d in T.degrees:
            if T.dim(d):
                assert M.dim(d) == exactlin.rank(T.element(hecke.node_idempotent(n, k, 2), d), 2)
                assert M.dim(d) == inv.node_dim(n, k, d)


def test_key_identity_split_ranks():
    from hclab import hecke

    A = hecke.algebra(3, 2)
    T = inv.total_model(3, 18)
    for n, k in [(1, 2), (2, 1)]:
        corner = hecke.node_idempotent(n, k, 2)
        first = A.multiply(A.multiply(A.longest(k, n, True), A.longest(0, k + 1)), A.longest(k, n, True))
        second = A.multiply(A.multiply(A.longest(0, k), A.longest(k - 1, n + 1, True)), A.longest(0, k))
        for d in T.degrees:
            if T.dim(d):
                r = lambda x: exactlin.rank(T.element(x, d), 2)
                assert r(first) + r(second) == r(corner)


@pytest.mark.parametrize("n,k", [(1, 1), (2, 0), (0, 2), (2, 1), (1, 2), (3, 0), (0, 3)])
def test_model_matches_free_bridge_word_counts(n, k):
    report = inv.word_model_agreement(n, k, 24)
    assert report["agree"], report


def test_admissible_bridge_variant_disagrees_and_reports_both():
    report = inv.word_model_agreement(1, 1, 12, bridge_admissible=True)
    assert not report["agree"]
    assert report["model"][5] == 1 and report["words"][5] == 0


@pytest.mark.parametrize("m", [1, 2, 3])
def test_hilbert_bridge(m):
    hs = inv.hilbert_series(m, 21)
    assert hs[0] == 0
    for d in range(1, 22):
        assert hs[d] == qwords.free_count(2, m, d)


def test_parallel_series_is_identical():
    assert inv.node_series(1, 1, 18, jobs=2).series() == inv.node_series(1, 1, 18).series()
    assert inv.hilbert_series(2, 16, jobs=2).series() == inv.hilbert_series(2, 16).series()


def test_steenrod_on_models_commutes_with_node_idempotent():
    T = inv.total_model(2, 16)
    from hclab import hecke

    e = hecke.node_idempotent(1, 1, 2)
    for d in T.degrees:
        for s in range(1, d - T.shift + 1):
            if T.dim(d) and T.dim(d - s):
                S = T.sq(d, s)
                assert np.array_equal(np.mod(S @ T.element(e, d), 2), np.mod(T.element(e, d - s) @ S, 2))


def test_truncated_hom_small_cases():
    L0 = inv.module_model(0, 0, 16)
    assert inv.truncated_hom(L0, L0, 16) == 1
    models = {nk: inv.module_model(*nk, 24) for nk in [(0, 1), (1, 1), (2, 0), (0, 2)]}
    # End(R_1L_1) is the two-dimensional H_2; the other Hom spaces here are one-dimensional
    assert inv.truncated_hom(models[(1, 1)], models[(1, 1)], 16) == 2
    assert inv.truncated_hom(models[(1, 1)], models[(2, 0)], 16) == 1
    assert inv.truncated_hom(models[(0, 2)], models[(1, 1)], 16) == 1
    assert inv.truncated_hom(models[(1, 1)], models[(0, 2)], 16) == 1
    assert inv.truncated_hom(models[(0, 1)], models[(0, 1)], 16) == 1


def test_plain_truncation_counts_boundary_maps():
    # without room above D the top classes can go to primitives
    S, T = inv.module_model(0, 1, 16), inv.module_model(0, 2, 16)
    assert inv.truncated_hom(S, T, 16, 16) > 0
    S, T = inv.module_model(0, 1, 24), inv.module_model(0, 2, 24)
    assert inv.truncated_hom(S, T, 16, 24) == 0


def test_truncated_hom_argument_checks():
    S = inv.module_model(0, 1, 16)
    with pytest.raises(ValueError):
        inv.truncated_hom(S, S, 16, 12)
    with pytest.raises(ValueError):
        inv.truncated_hom(S, S, 16, 20)


def test_operator_independence():
    for m in (1, 2, 3):
        r = inv.hecke_operator_independence(m, 12)
        assert r["rank"] == r["operators"]


def test_guards():
    with pytest.raises(GuardError):
        inv.total_model(5, 10)
    with pytest.raises(GuardError):
        inv.module_model(1, 1, 31)
    with pytest.raises(ValueError):
        inv.invariant_basis(SD("Borel", 2, 3), 2)
