from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from gkm14.series import (
    PuiseuxSeries, TruncationError, ZeroLeadingTerm, eta_quotient, eta_quotient_lead,
    eisenstein_e4, j_invariant,
)

H = Fraction(1, 2)


def naive_product(factor_exps, n):
    """Coefficients of prod_k (1 - q^k)^(e_k) below q^n by repeated multiplication."""
    out = [1] + [0] * (n - 1)
    for k, e in factor_exps:
        for _ in range(abs(e)):
            if e > 0:
                for i in range(n - 1, k - 1, -1):
                    out[i] -= out[i - k]
            else:
                for i in range(k, n):
                    out[i] += out[i - k]
    return out


# Ramanujan tau(1..10), frozen from the naive product below
TAU = [1, -24, 252, -1472, 4830, -6048, -16744, 84480, -113643, -115920]


def test_naive_oracle_matches_frozen_tau():
    coeffs = naive_product([(k, 24) for k in range(1, 11)], 10)
    assert coeffs == TAU


def test_delta_from_two_eta12_factors():
    eta12 = eta_quotient({1: 12}, 11)
    delta = (eta12 * eta12).truncate(11)
    assert [delta.coeff(n) for n in range(1, 11)] == TAU
    assert delta.valuation() == 1


def test_delta_leading_coefficient():
    assert eta_quotient({1: 24}, 3).coeff(1) == 1


def test_h_is_inverse_of_eta_2tau_12():
    h = eta_quotient({2: -12}, 8)
    # h * eta(2 tau)^12 = 1 term by term
    prod = (h * eta_quotient({2: 12}, 10)).truncate(7)
    assert prod == PuiseuxSeries.monomial(1, 0, trunc=7)
    assert [(int(e), c) for e, c in h.items()] == [(-1, 1), (1, 12), (3, 90), (5, 520), (7, 2535)]


def test_h_against_naive_oracle():
    inv = naive_product([(k, -12) for k in range(1, 8)], 8)  # prod (1-x^k)^-12, x = q^2
    h = eta_quotient({2: -12}, 13)
    for i, c in enumerate(inv[:7]):
        assert h.coeff(2 * i - 1) == c


def test_eta12_over_eta2_12():
    # leading exponent (12 - 2*12)/24 = -1/2
    s = eta_quotient({1: 12, 2: -12}, 3)
    assert s.valuation() == -H
    assert [s.coeff(-H + k) for k in range(3)] == [1, -12, 66]


def test_half_scale_needs_fine_grid():
    s = eta_quotient({H: 1}, 2)
    assert s.valuation() == Fraction(1, 48)
    assert 48 % s.denom == 0
    assert eta_quotient_lead({H: -12, 1: 12}) == Fraction(1, 4)


def test_geometric_series():
    one_minus_q = PuiseuxSeries.from_exponents({0: 1, 1: -1})
    geo = one_minus_q.invert(order=10)
    assert [geo.coeff(n) for n in range(10)] == [1] * 10
    assert (one_minus_q * geo).truncate(10) == PuiseuxSeries.monomial(1, 0, trunc=10)


def test_half_exponents_add():
    r = PuiseuxSeries.monomial(1, H) * PuiseuxSeries.monomial(1, H)
    assert r == PuiseuxSeries.monomial(1, 1)
    assert r.denom == 1


def test_invert_delta_leading_exponent():
    assert eta_quotient({1: 24}, 6).invert(order=3).valuation() == -1


def test_zero_leading_term():
    with pytest.raises(ZeroLeadingTerm):
        PuiseuxSeries.zero(trunc=5).invert()


def test_coefficient_beyond_truncation_is_an_error():
    s = eta_quotient({1: 24}, 3)
    with pytest.raises(TruncationError):
        s.coeff(3)


def test_product_truncation_is_pessimistic():
    a = PuiseuxSeries.from_exponents({-1: 1, 0: 2}, trunc=3)
    b = PuiseuxSeries.from_exponents({1: 1}, trunc=4)
    # a*b is known below min(3 + 1, 4 - 1) = 3
    assert (a * b).trunc == 3


def test_j_invariant_frozen():
    j = j_invariant(4)
    assert [j.coeff(n) for n in range(-1, 4)] == [1, 744, 196884, 21493760, 864299970]


def test_e4_frozen():
    assert [eisenstein_e4(4).coeff(n) for n in range(4)] == [1, 240, 2160, 6720]


def test_json_round_trip():
    s = eta_quotient({H: 12, 1: -3}, 3)
    assert PuiseuxSeries.from_json(s.to_json()) == s
    terms = s.to_json()["terms"]
    assert terms == sorted(terms, key=lambda t: Fraction(t[0], t[1]))


# -- ring laws on random sparse series ------------------------------------------

exponent = st.integers(-4, 12).map(lambda k: Fraction(k, 4))
coefficient = st.fractions(max_denominator=7).filter(lambda c: c != 0)
series = st.builds(
    lambda m, t: PuiseuxSeries.from_exponents(m, trunc=t),
    st.dictionaries(exponent, coefficient, max_size=6),
    st.integers(0, 6),
)


@given(series, series)
def test_add_mul_commute(a, b):
    assert a + b == b + a
    assert a * b == b * a


@given(series, series, series)
def test_associative_and_distributive(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert ((a * b) * c).agrees_with(a * (b * c))
    assert (a * (b + c)).agrees_with(a * b + a * c)


@given(series)
def test_invert_two_sided(a):
    if a.is_zero():
        return
    inv = a.invert()
    one = PuiseuxSeries.monomial(1, 0)
    assert (a * inv).agrees_with(one)
    assert (inv * a).agrees_with(one)


@given(series)
def test_canonical_form(a):
    assert all(c != 0 for c in a.terms.values())
    for e in a.exponents():
        assert (e * a.denom).denominator == 1
        assert a.trunc is None or e < a.trunc
