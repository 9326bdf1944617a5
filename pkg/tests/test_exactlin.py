import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from hclab import exactlin
from hclab.errors import SingularMatrixError


def _brute_kernel_size(M, p):
    rows, cols = M.shape
    return sum(1 for v in itertools.product(range(p), repeat=cols) if not np.mod(M @ np.array(v), p).any())


@st.composite
def small_matrix(draw, p=None):
    p = draw(st.sampled_from([2, 3, 5])) if p is None else p
    r = draw(st.integers(1, 4))
    c = draw(st.integers(1, 4))
    entries = draw(st.lists(st.integers(0, p - 1), min_size=r * c, max_size=r * c))
    return np.array(entries, dtype=np.int64).reshape(r, c), p


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_rank_matches_null_vector_count(mp):
    M, p = mp
    r = exactlin.rank(M, p)
    assert _brute_kernel_size(M, p) == p ** (M.shape[1] - r)


@settings(max_examples=60, deadline=None)
@given(small_matrix())
def test_kernel_is_kernel_of_right_size(mp):
    M, p = mp
    r, K = exactlin.rank_and_kernel(M, p)
    assert K.shape == (M.shape[1], M.shape[1] - r)
    assert not np.mod(M @ K, p).any()
    assert exactlin.rank(K.T, p) == K.shape[1] if K.size else True


@settings(max_examples=60, deadline=None)
@given(small_matrix(p=2))
def test_bit_backend_agrees_with_dense(mp):
    M, _ = mp
    r1, K1 = exactlin.rank_and_kernel(M, 2, backend="bits")
    r2, K2 = exactlin.rank_and_kernel(M, 2, backend="generic")
    assert r1 == r2
    assert K1.shape == K2.shape
    assert not np.mod(M @ K1, 2).any()


def test_unknown_backend_refused():
    with pytest.raises(ValueError):
        exactlin.rank_and_kernel(np.eye(2, dtype=np.int64), 2, backend="dense")


def test_invert_roundtrip_and_singular():
    A = np.array([[1, 2], [3, 4]])
    inv = exactlin.invert(A, 5)
    assert np.array_equal(np.mod(A @ inv, 5), np.eye(2, dtype=np.int64))
    with pytest.raises(SingularMatrixError):
        exactlin.invert(np.array([[1, 2], [2, 4]]), 5)


def test_coordinates_and_restrict():
    B = np.array([[1, 0], [1, 1], [0, 1]])
    coords = exactlin.Coordinates(B, 2)
    v = np.mod(B @ np.array([1, 1]), 2)
    assert coords(v).ravel().tolist() == [1, 1]
    with pytest.raises(ValueError):
        coords(np.array([1, 0, 0]))
    op = np.eye(3, dtype=np.int64)
    assert np.array_equal(exactlin.restrict(op, B, coords, 2), np.eye(2, dtype=np.int64))


def test_p_local_rationals():
    assert exactlin.p_local_check(Fraction(1, 3), 2)
    assert not exactlin.p_local_check(Fraction(1, 2), 2)
    assert exactlin.reduce_mod_p(Fraction(1, 3), 2) == 1
    assert exactlin.reduce_mod_p(Fraction(2, 3), 5) == 4
    with pytest.raises(ValueError):
        exactlin.reduce_mod_p(Fraction(1, 2), 2)


def test_prime_checks():
    assert [q for q in range(12) if exactlin.is_prime(q)] == [2, 3, 5, 7, 11]
    with pytest.raises(ValueError):
        exactlin.check_prime(9)


def test_hilbert_series_drops_zeros_and_shifts():
    h = exactlin.HilbertSeries.from_pairs(5, [(0, 0), (2, 1), (4, 3)])
    assert h.series() == [[2, 1], [4, 3]]
    assert h[3] == 0
    assert h.shifted(1).series() == [[3, 1], [5, 3]]
    with pytest.raises(ValueError):
        exactlin.HilbertSeries.from_pairs(2, [(3, 1)])


def test_column_basis_spans():
    M = np.array([[1, 1, 0], [0, 0, 1], [1, 1, 1]])
    B = exactlin.column_basis(M, 2)
    assert B.shape[1] == exactlin.rank(M, 2) == 2
