import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from bfdesign import boolfun as bf


def random_tt(rng, n):
    return bf.TruthTable(n, tuple(int(b) for b in rng.integers(0, 2, 1 << n)))


def test_hex_round_trip_known_vector():
    tt = bf.TruthTable.from_hex("111E")
    assert tt.n == 4
    assert tt.to_hex() == "111E"
    # x1*x2 XOR x3*x4 with x1 as the most significant input bit
    for u in range(16):
        x1, x2, x3, x4 = (u >> 3) & 1, (u >> 2) & 1, (u >> 1) & 1, u & 1
        assert tt.bits[u] == (x1 & x2) ^ (x3 & x4)


def test_known_vector_is_bent_with_nl_6():
    ws = bf.walsh_transform(bf.TruthTable.from_hex("111E"))
    assert bf.nonlinearity(ws) == 6
    assert bf.is_bent(ws)


def test_fwht_matches_naive_transform():
    rng = np.random.default_rng(11)
    for n in (2, 3, 4, 5):
        for _ in range(20):
            tt = random_tt(rng, n)
            assert bf.walsh_transform(tt).coefficients == bf.walsh_transform_naive(tt).coefficients


def test_inverse_walsh_round_trip():
    rng = np.random.default_rng(12)
    for n in range(1, 9):
        tt = random_tt(rng, n)
        ws = bf.walsh_transform(tt)
        assert bf.inverse_walsh(ws).entries == bf.sign_vector(tt).entries


def test_resiliency_profile_linear_function():
    # f = x1 XOR x2 XOR x3 is 2-resilient
    tt = bf.TruthTable(3, tuple((bf.popcount(u) & 1) for u in range(8)))
    balanced, ci, resil = bf.resiliency_profile(tt)
    assert balanced and ci == 2 and resil == 2


def test_resiliency_profile_constant():
    tt = bf.TruthTable(2, (0, 0, 0, 0))
    balanced, ci, resil = bf.resiliency_profile(tt)
    assert not balanced and ci == 2 and resil is None


def test_anf_degree_and_round_trip():
    tt = bf.TruthTable.from_hex("111E")
    form = bf.anf(tt)
    assert bf.algebraic_degree(form) == 2
    assert bf.from_anf(form) == tt
    # monomials x1x2 (mask 1100) and x3x4 (mask 0011) only
    assert {u for u, c in enumerate(form.coefficients) if c} == {0b1100, 0b0011}


def test_degree_of_constants():
    assert bf.algebraic_degree(bf.anf(bf.TruthTable(2, (0, 0, 0, 0)))) == 0
    assert bf.algebraic_degree(bf.anf(bf.TruthTable(2, (1, 1, 1, 1)))) == 0


def test_complement_preserves_nonlinearity():
    rng = np.random.default_rng(13)
    for _ in range(10):
        tt = random_tt(rng, 4)
        nl = bf.nonlinearity(bf.walsh_transform(tt))
        assert bf.nonlinearity(bf.walsh_transform(tt.complement())) == nl


def test_walsh_spectrum_rejects_parseval_violations():
    with pytest.raises(ValueError):
        bf.WalshSpectrum(2, (4, 4, 0, 0))


@given(st.integers(1, 6), st.data())
@settings(max_examples=50, deadline=None)
def test_parseval_property(n, data):
    bits = data.draw(st.lists(st.integers(0, 1), min_size=1 << n, max_size=1 << n))
    ws = bf.walsh_transform(bf.TruthTable(n, tuple(bits)))
    assert sum(c * c for c in ws.coefficients) == 1 << (2 * n)


def test_analysis_record_fields():
    rec = bf.analysis_record(bf.TruthTable.from_hex("111E"))
    assert rec["tt_hex"] == "111E"
    assert rec["nonlinearity"] == 6
    assert rec["bent"] is True
    assert rec["balanced"] is False
    assert rec["degree"] == 2
