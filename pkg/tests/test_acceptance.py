"""The twelve acceptance criteria, exact arithmetic and zero tolerance.

Each test records one PASS/FAIL line; tests/conftest.py prints them at the
end of the run.  Runtime limits are part of the criteria and are asserted.
"""

import time
from contextlib import contextmanager

import numpy as np
import pytest

from hclab import chevalley, contraction, exactlin, groupring, hecke, invariants as inv, qwords, workbench as wb

RESULTS = {}


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        within = elapsed < limit
        verdict = "PASS" if ok and within else "FAIL"
        note = "" if within else f" over the {limit:.0f}s limit"
        RESULTS[number] = f"criterion {number:2d} {verdict}  {title} ({elapsed:.1f}s{note})"
    assert elapsed < limit, f"criterion {number} took {elapsed:.1f}s, limit {limit}s"


def test_01_hecke_presentation():
    with criterion(1, "Hecke presentation and dimension n!", 30):
        for p in (2, 3, 5):
            for n in range(1, 6):
                r = hecke.verify_presentation(n, p)
                assert r["verified"] and r["dimension"] == chevalley._factorial(n), r


def test_02_longest_word_idempotents():
    with criterion(2, "longest-word idempotents", 10):
        p = 2
        prod = hecke.e(1, 4, p)
        for i in (2, 3, 1, 2, 1):
            prod = prod * hecke.e(i, 4, p)
        assert hecke.longest_idempotent(4, p) == prod
        for n in range(1, 5):
            for hat in (False, True):
                assert hecke.absorption_space_dim(n, p, hat) == 1
        for k in range(1, 5):
            for hat in (False, True):
                assert hecke.ek_recursion_check(k, k + 1, p, hat)


def test_03_key_identity_and_corner_invertibility():
    with criterion(3, "key identity, orthogonality, corner invertibility", 60):
        for p in (2, 3):
            for total in range(1, 6):
                for k in range(total + 1):
                    n = total - k
                    assert all(hecke.key_identity(n, k, p).values()), (n, k, p)
                    for lam in range(1, p):
                        for mu in range(1, p):
                            assert hecke.corner_invertibility(n, k, p, lam, mu), (n, k, p, lam, mu)


def test_04_chain_products():
    with criterion(4, "d^2 = 0 and s^2 = 0 in the Hecke algebra", 10):
        for p in (2, 3):
            for m in range(0, 6):
                r = hecke.chain_products(m, p)
                assert r["d_squared_zero"] and r["s_squared_zero"], (m, p)


def test_05_steinberg():
    with criterion(5, "Steinberg idempotent, chain, Hecke comparison", 60):
        for p, n in [(2, 2), (2, 3), (3, 2)]:
            r = groupring.steinberg_check(n, p)
            assert r["idempotent"] and r["p_integral"], r
        for p, k in [(2, 1), (2, 2), (3, 1)]:
            assert groupring.steinberg_chain(k, p)
        for n in range(1, 4):
            assert groupring.steinberg_vs_hecke(n, 2)


def test_06_two_model_hilbert_agreement():
    with criterion(6, "free word counts equal invariant dimensions one degree down", 120):
        for m in range(1, 4):
            cm = 2**m - 1
            for d in range(1, 22):
                poly_degree = d - 1
                model = inv.invariant_dim(m, poly_degree - cm) if poly_degree >= cm else 0
                assert qwords.free_count(2, m, d) == model, (m, d)


def test_07_connectivity():
    with criterion(7, "bottom degree 2p^k - 1 - k with multiplicity one", 30):
        for p, ks in [(2, range(1, 7)), (3, range(1, 5))]:
            for k in ks:
                r = qwords.bottom_degree(p, k)
                assert r["degree"] == 2 * p**k - 1 - k and r["multiplicity"] == 1, r
        for k in range(1, 4):
            c = 2 * 2**k - 1 - k
            model = inv.module_model(0, k, c)
            assert [model.dim(d) for d in range(c)] == [0] * c and model.dim(c) == 1


def test_08_steenrod_hecke_commutation():
    with criterion(8, "e(i) and ehat(i) commute with every Sq^k through degree 20", 120):
        for n in (2, 3):
            cn = 2**n - 1
            for j in range(0, 21 - cn):
                for k in range(1, 21 - cn - j):
                    S = inv.twisted_steenrod_on_invariants(k, n, j)
                    if S.size == 0:
                        continue
                    for i in range(1, n):
                        for hat in (True, False):
                            lo = inv.hecke_operator(i, n, j + cn, hat)
                            hi = inv.hecke_operator(i, n, j + cn + k, hat)
                            assert np.array_equal(np.mod(S @ lo, 2), np.mod(hi @ S, 2)), (n, i, j, k, hat)


def test_09_truncated_hom_and_operator_independence():
    with criterion(9, "truncated Hom vanishing and Hecke-to-End injectivity", 300):
        D, reach = 16, 24
        models = {(n, k): inv.module_model(n, k, reach) for t in (1, 2, 3) for k in range(t + 1) for n in [t - k]}
        for lo in (1, 2):
            for src in [nk for nk in models if sum(nk) == lo]:
                for dst in [nk for nk in models if sum(nk) == lo + 1]:
                    assert inv.truncated_hom(models[src], models[dst], D) == 0, (src, dst)
        for m in range(1, 4):
            r = inv.hecke_operator_independence(m, 12)
            assert r["operators"] == chevalley._factorial(m) and r["rank"] == r["operators"], r


def test_10_contraction_certificates():
    with criterion(10, "contraction certificates exact with invertible homotopies", 300):
        for p in (2, 3):
            for m in range(0, 5):
                cert = contraction.exactness_certificate(contraction.build_total_complex(m, p, "hecke-regular"))
                assert cert["exact"] and contraction.all_invertible(cert), (m, p)
        for m in range(0, 4):
            cert = contraction.exactness_certificate(contraction.build_total_complex(m, 2, "invariants", 24))
            assert cert["exact"] and contraction.all_invertible(cert), m


def test_11_counting():
    with criterion(11, "epimorphism counts and transitive-representation injectivity", 30):
        for p in (2, 3):
            for m in range(1, 4):
                for n in range(1, 4):
                    assert chevalley.count_epis_formula(m, n, p) == chevalley.count_epis(m, n, p, brute_force=True)
        for n in range(1, 3):
            for m in range(1, 3):
                assert chevalley.transrep_injectivity(2, n, m)["injective"], (n, m)


DETERMINISM_REQUESTS = [
    ("hecke", "verify", dict(p=3, n=3)),
    ("hecke", "identity", dict(p=3, n=1, k=2)),
    ("hecke", "ds", dict(p=2, m=4)),
    ("steinberg", "check", dict(p=2, n=2)),
    ("steinberg", "chain", dict(p=2, k=1)),
    ("invariants", "hilbert", dict(p=2, n=1, k=1, max_degree=16)),
    ("invariants", "hom", dict(p=2, n=1, k=1, target="2,0", max_degree=16, window=24)),
    ("words", "count", dict(p=2, n=1, k=2, max_degree=20)),
    ("words", "bottom", dict(p=3, k=2)),
    ("words", "adem", dict(p=2, m=3, max_degree=12)),
    ("contraction", "certify", dict(p=2, m=2, backend="invariants", max_degree=14)),
    ("contraction", "certify", dict(p=3, m=3, backend="hecke-regular")),
    ("chevalley", "epi", dict(p=3, m=2, n=2)),
    ("chevalley", "transrep", dict(p=2, n=2, m=2)),
]


def test_12_determinism_across_jobs():
    with criterion(12, "reports byte-identical across --jobs values", 300):
        for command, action, params in DETERMINISM_REQUESTS:
            req = wb.make_request(command, action, **params)
            a = wb.run(req, policy="off", jobs=1)
            b = wb.run(req, policy="off", jobs=3)
            assert a.exit_code == 0, (command, action, a.text)
            assert a.text.encode() == b.text.encode(), (command, action)
        csv = wb.make_request("words", "count", fmt="csv", p=2, n=0, k=2, max_degree=20)
        assert wb.run(csv, policy="off", jobs=1).text == wb.run(csv, policy="off", jobs=4).text
