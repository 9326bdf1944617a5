import json

import numpy as np
import pytest

from hclab import contraction as C
from hclab import qwords
from hclab.errors import GuardError


def test_m1_maps_are_the_unit():
    c = C.build_total_complex(1, 2, "hecke-regular")
    assert c.nodes == [(0, 1), (1, 0)]
    assert c.d_maps[((0, 1), None)].tolist() == [[1]]
    assert c.s_maps[((0, 1), None)].tolist() == [[1]]


def test_m2_invariants_degree_five():
    c = C.build_total_complex(2, 2, "invariants", 12)
    dims = [c.dim(node, 5) for node in c.nodes]
    assert dims == [1, 1, 0]
    assert dims[1] == qwords.enumerate_count(2, 1, 1, 5)


@pytest.mark.parametrize("m", [0, 1, 2, 3, 4])
@pytest.mark.parametrize("p", [2, 3])
def test_regular_backend_certifies(m, p):
    c = C.build_total_complex(m, p, "hecke-regular")
    cert = C.exactness_certificate(c)
    assert cert["d_squared_zero"] and cert["s_squared_zero"] and cert["exact"]
    assert C.all_invertible(cert)
    assert C.degenerate_scalars_singular(c)


@pytest.mark.parametrize("m", [0, 1, 2, 3])
def test_invariants_backend_certifies(m):
    c = C.build_total_complex(m, 2, "invariants", 18)
    cert = C.exactness_certificate(c)
    assert cert["d_squared_zero"] and cert["s_squared_zero"] and cert["exact"]
    assert C.all_invertible(cert)
    assert C.degenerate_scalars_singular(c)


def test_invariants_node_dims_match_word_counts():
    c = C.build_total_complex(3, 2, "invariants", 20)
    for n, k in c.nodes:
        for d in c.degrees:
            assert c.dim((n, k), d) == qwords.enumerate_count(2, n, k, d)


def test_end_node_operators_are_identity():
    c = C.build_total_complex(3, 3, "hecke-regular")
    for node in [(0, 3), (3, 0)]:
        op = C.node_operator(c, node, None, 1, 1)
        assert np.array_equal(op, np.eye(op.shape[0], dtype=np.int64))


def test_interior_operator_singular_at_zero_scalar():
    c = C.build_total_complex(2, 2, "hecke-regular")
    op = C.node_operator(c, (1, 1), None, 1, 0)
    from hclab import exactlin

    assert exactlin.rank(op, 2) < op.shape[0]


def test_shapes_match_node_dimensions():
    c = C.build_total_complex(3, 2, "invariants", 14)
    for node in c.nodes:
        nxt = c.next(node)
        if nxt is None:
            continue
        for d in c.degrees:
            assert c.d_maps[(node, d)].shape == (c.dim(nxt, d), c.dim(node, d))
            assert c.s_maps[(node, d)].shape == (c.dim(node, d), c.dim(nxt, d))


def test_certificate_is_byte_identical_and_shaped():
    a = C.certificate_json(C.exactness_certificate(C.build_total_complex(2, 3, "hecke-regular")))
    b = C.certificate_json(C.exactness_certificate(C.build_total_complex(2, 3, "hecke-regular")))
    assert a == b
    doc = json.loads(a)
    assert list(doc) == ["m", "p", "backend", "D", "nodes", "d_squared_zero", "s_squared_zero", "exact"]
    entry = doc["nodes"][0]["degrees"][0]
    assert list(entry) == ["d", "dim", "rank_in", "rank_out", "homotopy"]
    assert set(entry["homotopy"]) == {"1,1", "1,2", "2,1", "2,2"}


def test_singular_verdict_names_a_kernel_vector():
    op = np.array([[1, 1], [1, 1]])
    verdict = C._verdict(op, 2)
    v = np.array(verdict["singular"])
    assert v.any() and not np.mod(op @ v, 2).any()


def test_bad_requests():
    with pytest.raises(ValueError):
        C.build_total_complex(2, 2, "hecke-regular", 12)
    with pytest.raises(ValueError):
        C.build_total_complex(2, 2, "invariants")
    with pytest.raises(ValueError):
        C.build_total_complex(2, 3, "invariants", 12)
    with pytest.raises(ValueError):
        C.build_total_complex(2, 2, "nonsense")
    with pytest.raises(GuardError):
        C.build_total_complex(6, 2, "hecke-regular")
    with pytest.raises(GuardError):
        C.build_total_complex(5, 2, "invariants", 12)
    c = C.build_total_complex(1, 3, "hecke-regular")
    with pytest.raises(ValueError):
        C.verify_homotopy(c, 0, 1)
