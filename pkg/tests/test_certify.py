from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from kothe.certify import (
    ai_defect,
    check_ai_witness,
    check_bai_witness,
    check_lbai_witness,
    construct_bai_net,
    construct_lbai_element,
    geometric_truncation,
    lbai_certificate,
    per_level_report,
    search_witness,
    tail_defect_formula,
    truncation_sweep,
)
from kothe.counterexample import cex_weight, phi
from kothe.errors import KotheError, WindowExhausted
from kothe.seq import FinSeq, basis_e, brute_product
from kothe.weights import KotheSet, Weight, seminorm

from conftest import finseqs, random_finseq

e = basis_e
ONE = Weight.const(1)
LINEAR = Weight(lambda n: n, "linear")
weights = st.sampled_from([ONE, LINEAR] + [cex_weight(k) for k in range(1, 6)])


def defect_by_brute_force(a, b, p):
    return seminorm(a - brute_product(a, b), p)


def test_ai_defect_examples():
    assert ai_defect(e(3), e(5), ONE) == 0
    assert ai_defect(e(5), e(3), ONE) == 2
    assert ai_defect(FinSeq(), FinSeq({2: 7}), LINEAR) == 0


def test_tail_formula_examples():
    assert tail_defect_formula(FinSeq({1: 1, 2: 1, 3: 1}), 2, ONE) == 2
    assert tail_defect_formula(FinSeq({1: 1, 2: 1, 3: 1}), 3, ONE) == 0
    assert tail_defect_formula(e(5), 2, ONE) == 2


@given(finseqs, st.integers(1, 45), weights)
def test_tail_formula_matches_product(a, n, p):
    assert tail_defect_formula(a, n, p) == defect_by_brute_force(a, e(n), p)


@given(finseqs, weights)
def test_far_basis_vector_annihilates_defect(a, p):
    n = max(a.max_index(), 1)
    assert ai_defect(a, e(n), p) == 0
    assert ai_defect(a, e(n + 3), p) == 0


@given(finseqs, finseqs, st.integers(1, 6))
def test_defect_monotone_in_weight(a, b, k):
    assert ai_defect(a, b, cex_weight(k)) <= ai_defect(a, b, cex_weight(k + 1))


def test_check_ai_witness():
    assert check_ai_witness([e(1), e(2)], e(2), ONE, 0).ok
    w = check_ai_witness([e(3)], e(1), ONE, 1)
    assert not w.ok and w.defects == (2,)
    assert check_ai_witness([], e(1), ONE, 0).ok
    with pytest.raises(KotheError):
        check_ai_witness([], e(1), ONE, -1)


def test_check_lbai_witness():
    p2 = cex_weight(2)
    r = check_lbai_witness([e(1)], e(3), p2, 0, 3)
    assert r.ok and r.norm_b == 2
    assert not check_lbai_witness([e(1)], e(3), p2, 0, 1).ok
    assert check_lbai_witness([e(1)], FinSeq(), ONE, 2, 1).ok
    with pytest.raises(KotheError):
        check_lbai_witness([e(1)], e(3), p2, 0, 0)


def test_check_bai_witness_a1(rng):
    P = KotheSet([ONE], 100)
    for _ in range(20):
        F = [random_finseq(rng, 5, 40) for _ in range(3)]
        n = max(a.max_index() for a in F) + 1
        c = check_bai_witness(F, e(n), P, {"const:1/1": 0}, {"const:1/1": 1})
        assert c.ok and c.norms["const:1/1"] == 1


def test_check_bai_witness_bound_fails_across_family():
    P = KotheSet([cex_weight(1), cex_weight(2)], 1000)
    C = 10
    for j in range(1, 12):
        b = e(phi(2, j))
        assert seminorm(b, cex_weight(2)) == 2 * j
        c = check_bai_witness([e(1)], b, P, {"cex:k=1": 0}, {"cex:k=1": 2, "cex:k=2": C})
        assert c.defect_ok
        assert c.bounds_ok == (2 * j <= C)


def test_check_bai_witness_errors():
    P = KotheSet([cex_weight(1), cex_weight(2)], 100)
    with pytest.raises(KotheError):
        check_bai_witness([e(1)], e(2), P, {"cex:k=1": 0}, {"cex:k=1": 2})
    c = check_bai_witness([e(1)], FinSeq(), KotheSet([ONE], 10), {"const:1/1": 0}, {"const:1/1": 1})
    assert not c.ok


@given(finseqs, finseqs)
def test_bai_witness_is_lbai_witness(a, b):
    P = KotheSet([ONE, cex_weight(1), cex_weight(2)], 100)
    eps = Fraction(1, 2)
    C = {d: 50 for d in P.descriptors()}
    c = check_bai_witness([a], b, P, {d: eps for d in C}, C)
    if c.ok:
        for p in P.members:
            assert check_lbai_witness([a], b, p, eps, 50).ok


def test_construct_lbai_element():
    b = construct_lbai_element([e(1) + e(2)], 1)
    assert b == e(3)
    r = check_lbai_witness([e(1) + e(2)], b, cex_weight(1), 0, 2)
    assert r.ok and r.witness.defects == (0,)
    assert construct_lbai_element([], 5) == e(phi(6, 1))


@given(st.lists(finseqs, max_size=4), st.integers(1, 8))
def test_lbai_constant_independent_of_family(F, k):
    b = construct_lbai_element(F, k)
    assert seminorm(b, cex_weight(k)) == k + 1
    assert check_lbai_witness(F, b, cex_weight(k), 0, k + 1).ok


def test_lbai_certificate_bundle():
    cert = lbai_certificate([[e(4)], [FinSeq({2: 1, 30: -1})]], [1, 2, 3], 500)
    assert cert.ok and len(cert.records) == 6
    assert set(cert.constants().values()) == {2, 3, 4}


def test_construct_bai_net_a1():
    P = KotheSet([ONE], 200)
    res = construct_bai_net(list(range(1, 201)), [FinSeq({3: 1, 9: -2})], P)
    assert res.bounded and res.b == e(10)
    assert res.C_family == {"const:1/1": 1}
    assert res.certificate.ok


def test_construct_bai_net_single_cex_weight():
    P = KotheSet([cex_weight(1)], 2000)
    rows = [phi(2, j) for j in range(1, 60)]
    res = construct_bai_net(rows, [e(7)], P)
    assert res.bounded and res.C_family == {"cex:k=1": 2}


def test_construct_bai_net_reports_growth():
    P = KotheSet([cex_weight(1), cex_weight(2)], 2000)
    rows = [phi(2, j) for j in range(1, 60)]
    res = construct_bai_net(rows, [e(7)], P)
    assert not res.bounded
    assert res.growing() == ["cex:k=2"]
    # sup of 2j over the indices within the horizon
    last_j = max(j for j in range(1, 60) if phi(2, j) <= 2000)
    assert res.C_family["cex:k=2"] == 2 * last_j


def test_construct_bai_net_refuses():
    with pytest.raises(WindowExhausted):
        construct_bai_net([1, 2, 3], [e(5)], KotheSet([ONE], 100))


def test_per_level_report_cex():
    P = KotheSet([cex_weight(k) for k in range(1, 5)], 1000)
    F = [FinSeq({3: 1, 17: -1}), e(40)]
    rep = per_level_report(P, F, 0, window=1000)
    assert rep.ok
    assert rep.constants() == {f"cex:k={k}": k + 1 for k in range(1, 5)}
    for lv in rep.levels:
        assert lv.witness.defects == (0, 0)


def test_per_level_report_a1():
    rep = per_level_report(KotheSet([ONE], 100), [e(3)], 0, window=100)
    assert rep.ok and rep.constants() == {"const:1/1": 1}


def test_per_level_report_unbounded_level():
    small = per_level_report(KotheSet([LINEAR], 400), [e(3)], 0, window=200)
    large = per_level_report(KotheSet([LINEAR], 400), [e(3)], 0, window=400)
    assert not small.ok and not small.levels[0].stable
    assert large.constants()["linear"] > small.constants()["linear"]


def test_search_witness():
    assert search_witness([e(4)], [ONE], 0, 10) == e(4)
    # n=4 and 5 carry p^(1) values 3 and 2
    assert search_witness([e(4)], [cex_weight(1)], 0, 10, {"cex:k=1": 2}) == e(5)
    with pytest.raises(WindowExhausted):
        search_witness([e(40)], [ONE], 0, 10)


def test_truncation_sweep_decreases():
    m = 12
    sweep = truncation_sweep(m, range(1, m + 3))
    vals = [d for _, d in sweep]
    expected = [2 * sum((Fraction(1, 2**i) for i in range(n + 1, m + 1)), Fraction(0)) for n in range(1, m + 3)]
    assert vals == expected
    assert all(a > b for a, b in zip(vals[: m - 1], vals[1:m]))
    assert vals[m - 1:] == [0, 0, 0]
    assert geometric_truncation(3) == FinSeq({1: Fraction(1, 2), 2: Fraction(1, 4), 3: Fraction(1, 8)})
