"""Exact coefficient arithmetic: Laurent polynomials in the half twist u,
canonical rational functions, truncated series, plethystic Exp/Log."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quiverdt.exactalg import (
    ExactAlgError,
    LaurentPoly,
    RationalFunction,
    TruncSeries,
    adams,
    eval_at_q,
    mobius,
    pleth_exp,
    pleth_log,
    series_invert,
)

Q = LaurentPoly.q_power
U = LaurentPoly.u_power
ONE = LaurentPoly.one()


# -- LaurentPoly ----------------------------------------------------------------

def test_q_power_is_even_u_power():
    assert Q(3) == U(6)
    assert Q(-1) == U(-2)
    assert Q(0) == ONE


def test_from_q_dict_roundtrip():
    p = LaurentPoly.from_q_dict({2: Fraction(3), 0: Fraction(-1)})
    assert p.q_dict() == {2: Fraction(3), 0: Fraction(-1)}
    assert p.is_even()


def test_add_mul_neg():
    p = Q(1) + ONE
    assert (p * p).q_dict() == {2: Fraction(1), 1: Fraction(2), 0: Fraction(1)}
    assert (p - p).is_zero()
    assert ((-p) + p).is_zero()


def test_min_max_exp():
    p = U(-3) + U(5)
    assert p.min_exp() == -3 and p.max_exp() == 5
    assert not p.is_even()


def test_substitute_u_power_inverts_exponents():
    p = Q(2) + Q(1).scale(Fraction(3))
    assert p.substitute_u_power(-1).q_dict() == {-2: Fraction(1), -1: Fraction(3)}
    assert p.substitute_u_power(-1).substitute_u_power(-1) == p


def test_eval_q_rejects_odd_support():
    with pytest.raises(ExactAlgError):
        U(1).eval_q(2)
    assert U(2).eval_q(5) == 5
    assert (Q(-1)).eval_q(2) == Fraction(1, 2)


def test_eval_u_at_zero_with_negative_exponent_rejected():
    with pytest.raises(ExactAlgError):
        U(-1).eval_u(0)


def test_pow():
    assert (Q(1) + ONE) ** 0 == ONE
    assert ((Q(1) + ONE) ** 3).eval_q(1) == 8


_small_fracs = st.integers(min_value=-4, max_value=4).map(Fraction)
_polys = st.dictionaries(
    st.integers(min_value=-4, max_value=4), _small_fracs, max_size=4
).map(lambda d: LaurentPoly(d))


@settings(max_examples=60, deadline=None)
@given(_polys, _polys, _polys)
def test_laurent_ring_laws(a, b, c):
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a + LaurentPoly.zero() == a
    assert a * ONE == a


# -- RationalFunction -------------------------------------------------------------

def test_rf_canonical_equality():
    q = Q(1)
    a = RationalFunction(q * q - q, q - ONE)  # q(q-1)/(q-1) == q
    assert a == RationalFunction.from_laurent(q)
    assert a.is_laurent()
    assert a.as_laurent() == q


def test_rf_division_and_zero():
    a = RationalFunction.from_laurent(Q(1) - ONE)
    b = RationalFunction.from_laurent(Q(1))
    assert (a / b) * b == a
    with pytest.raises(ExactAlgError):
        _ = a / RationalFunction.zero()


def test_rf_non_polynomial_rejected_by_as_laurent():
    r = RationalFunction(ONE, Q(1) - ONE)  # 1/(q-1)
    assert not r.is_laurent()
    with pytest.raises(ExactAlgError):
        r.as_laurent()


def test_rf_negative_power():
    r = RationalFunction.from_laurent(Q(1) - ONE) ** -2
    assert r.eval_q(3) == Fraction(1, 4)


def test_rf_eval_matches_fraction_arithmetic():
    r = RationalFunction(Q(2) + ONE, Q(1) - ONE)
    assert r.eval_q(4) == Fraction(16 + 1, 4 - 1)


def test_rf_substitute_u_power():
    r = RationalFunction(Q(1), Q(1) - ONE)  # q/(q-1)
    s = r.substitute_u_power(-1)  # (1/q)/((1/q)-1) = 1/(1-q)
    assert s.eval_q(3) == Fraction(1, 1 - 3)


@settings(max_examples=40, deadline=None)
@given(_polys, _polys)
def test_rf_field_laws(a, b):
    ra, rb = RationalFunction.from_laurent(a), RationalFunction.from_laurent(b)
    assert ra + rb == rb + ra
    assert ra * rb == rb * ra
    if not rb.is_zero():
        assert (ra / rb) * rb == ra


def test_eval_at_q_guardrails():
    assert eval_at_q(Q(2), 3) == 9
    assert eval_at_q(RationalFunction(Q(1), Q(1) - ONE), 2) == 2
    with pytest.raises(ExactAlgError):
        eval_at_q(Q(1), 1)  # below the smallest prime power
    with pytest.raises(ExactAlgError):
        eval_at_q(Q(1), "2")


# -- TruncSeries --------------------------------------------------------------------

V = ("x", "y")


def _mono(exps, coeff=1):
    return TruncSeries.monomial(V, 5, exps, coeff)


def test_series_truncates_products():
    t = _mono((1, 0))
    s = (TruncSeries.one(V, 5) + t) ** 6
    assert s.coeff((5, 0)) == RationalFunction.from_int(6)
    with pytest.raises(ExactAlgError):
        s.coeff((6, 0))


def test_series_mismatched_variables_rejected():
    with pytest.raises(ExactAlgError):
        TruncSeries.one(("x",), 3) + TruncSeries.one(("x", "y"), 3)


def test_series_invert_geometric():
    one = TruncSeries.one(V, 5)
    s = one - _mono((1, 0))
    inv = series_invert(s)
    for k in range(6):
        assert inv.coeff((k, 0)) == RationalFunction.from_int(1)
    assert (s * inv - one).is_zero()


def test_series_invert_requires_unit_constant():
    with pytest.raises(ExactAlgError):
        series_invert(_mono((1, 0)))


def test_series_division():
    one = TruncSeries.one(V, 5)
    a = one + _mono((1, 0))
    b = one - _mono((0, 1))
    assert ((a / b) * b - a).is_zero()


def test_slice_var_extracts_and_drops_variable():
    g = TruncSeries.monomial(("x", "y"), 4, (1, 2), Q(1)) + TruncSeries.monomial(
        ("x", "y"), 4, (0, 1), 7
    )
    s1 = g.slice_var("x", 1)
    assert s1.variables == ("y",)
    assert s1.order == 3
    assert s1.coeff((2,)) == RationalFunction.from_laurent(Q(1))
    s0 = g.slice_var("x", 0)
    assert s0.coeff((1,)) == RationalFunction.from_int(7)


def test_valuation():
    assert TruncSeries.zero(V, 5).valuation() == 6  # order + 1 for the zero series
    assert (_mono((1, 1)) + _mono((3, 0))).valuation() == 2


def test_series_json_roundtrip():
    g = _mono((1, 0), RationalFunction(Q(1), Q(1) - ONE)) + _mono((0, 2), -3)
    data = g.to_json_list()
    h = TruncSeries.from_json_list(V, 5, data)
    assert (g - h).is_zero()


# -- Adams operations and plethystic Exp/Log ------------------------------------------

def test_adams_identity_and_composition():
    f = _mono((1, 0), Q(1)) + _mono((1, 1), -2) + _mono((0, 3))
    assert (adams(1, f) - f).is_zero()
    assert (adams(2, adams(3, f)) - adams(6, f)).is_zero()


def test_adams_is_multiplicative():
    f = TruncSeries.one(V, 5) + _mono((1, 0), Q(1))
    g = TruncSeries.one(V, 5) + _mono((0, 1), -1)
    assert (adams(2, f * g) - adams(2, f) * adams(2, g)).is_zero()


def test_adams_scales_exponents_and_coefficients():
    f = _mono((1, 0), Q(1))
    a = adams(3, f)
    assert a.coeff((3, 0)) == RationalFunction.from_laurent(Q(3))


def test_mobius_values():
    assert [mobius(n) for n in range(1, 11)] == [1, -1, -1, 0, -1, 1, -1, 0, 0, 1]


def test_exp_requires_zero_constant_term():
    with pytest.raises(ExactAlgError):
        pleth_exp(TruncSeries.one(V, 3))


def test_log_requires_unit_constant_term():
    with pytest.raises(ExactAlgError):
        pleth_log(TruncSeries.zero(V, 3))


def test_exp_of_single_variable_is_geometric():
    # Exp(t) = 1/(1-t): all coefficients 1
    t = TruncSeries.monomial(("t",), 6, (1,), 1)
    g = pleth_exp(t)
    for k in range(7):
        assert g.coeff((k,)) == RationalFunction.from_int(1)


def test_exp_qminus1_t_closed_form():
    # Exp((q-1) t) = (1-t)/(1-qt)
    t = TruncSeries.monomial(("t",), 6, (1,), Q(1) - ONE)
    g = pleth_exp(t)
    one = TruncSeries.one(("t",), 6)
    qt = TruncSeries.monomial(("t",), 6, (1,), Q(1))
    closed = (one - TruncSeries.monomial(("t",), 6, (1,), 1)) * series_invert(one - qt)
    assert (g - closed).is_zero()


def test_exp_log_inverse_on_structured_example():
    f = _mono((1, 0), Q(1)) + _mono((0, 1), -1) + _mono((2, 1), Q(2) + ONE)
    assert (pleth_log(pleth_exp(f)) - f).is_zero()
    g = TruncSeries.one(V, 5) + _mono((1, 1), Q(1))
    assert (pleth_exp(pleth_log(g)) - g).is_zero()


def test_exp_is_multiplicative_on_sums():
    f = _mono((1, 0), Q(1))
    g = _mono((0, 1), -2)
    lhs = pleth_exp(f + g)
    rhs = pleth_exp(f) * pleth_exp(g)
    assert (lhs - rhs).is_zero()
