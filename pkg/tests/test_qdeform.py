import math
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreals.cf import ContinuedFraction, hj_cf_expand, parse_cf, regular_cf_expand
from qreals.exactalg import IntPoly, LaurentPoly, RationalFunction, TruncatedLaurentSeries, q_int_poly
from qreals.qdeform import (
    S_Q,
    T_Q,
    DegenerateQuadratic,
    StabilizationNotReached,
    ZeroInverse,
    apply_word,
    functional_equation,
    q_cf_hj_eval,
    q_cf_regular_eval,
    q_generators,
    q_invert,
    q_negate,
    q_rational_recursive,
    q_real_series,
    series_from_equation,
    stabilize,
    word_matrix,
)

coprime = st.tuples(st.integers(-60, 60), st.integers(1, 40)).filter(lambda t: math.gcd(*t) == 1)


def rf(num, den):
    return RationalFunction(IntPoly(num), IntPoly(den))


# q_rational_recursive -----------------------------------------------------------


def test_recursive_examples():
    assert q_rational_recursive(1, 2).value == rf([0, 1], [1, 1])
    assert q_rational_recursive(5, 2).value == rf([1, 2, 1, 1], [1, 1])
    assert q_rational_recursive(-1, 2).value == rf([-1], [0, 1, 1])
    for n in range(1, 8):
        assert q_rational_recursive(n, 1).value == RationalFunction(q_int_poly(n))


@given(coprime)
def test_specializes_at_one(rs):
    qr = q_rational_recursive(*rs)
    assert qr.value.at_one() == Fraction(*rs)


@given(coprime.filter(lambda t: t[0] > 0))
def test_positive_coefficients(rs):
    v = q_rational_recursive(*rs).value
    assert all(c >= 0 for c in v.num.coeffs) and all(c >= 0 for c in v.den.coeffs)


@given(coprime)
def test_translation_and_inversion_rules(rs):
    r, s = rs
    x = q_rational_recursive(r, s).value
    q = RationalFunction(IntPoly([0, 1]))
    assert q_rational_recursive(r + s, s).value == q * x + 1
    if r:
        rr, ss = (-s, r) if r > 0 else (s, -r)
        assert q_rational_recursive(rr, ss).value == -RationalFunction(1) / (q * x)


# q-continued fractions ------------------------------------------------------------


def test_regular_eval_examples():
    assert q_cf_regular_eval(ContinuedFraction.regular([1, 1, 1, 1])).value == rf([1, 1, 2, 1], [1, 1, 1])
    assert q_cf_regular_eval(ContinuedFraction.regular([2, 2])).value == rf([1, 2, 1, 1], [1, 1])


@pytest.mark.parametrize("a1", range(0, 6))
@pytest.mark.parametrize("a2", range(1, 6))
def test_regular_eval_matches_recursive(a1, a2):
    cf = ContinuedFraction.regular([a1, a2])
    x = cf.value()
    assert q_cf_regular_eval(cf).value == q_rational_recursive(x.numerator, x.denominator).value


def test_hj_eval_examples():
    assert q_cf_hj_eval(ContinuedFraction.hj([2, 3])).value == rf([1, 1, 2, 1], [1, 1, 1])
    assert q_cf_hj_eval(ContinuedFraction.hj([5])).value == RationalFunction(q_int_poly(5))
    assert q_cf_hj_eval(ContinuedFraction.hj([3, 3])).value == q_rational_recursive(8, 3).value


@given(coprime.filter(lambda t: t[0] > 0))
def test_three_constructions_agree(rs):
    rec = q_rational_recursive(*rs).value
    assert q_cf_regular_eval(regular_cf_expand(*rs)).value == rec
    assert q_cf_hj_eval(hj_cf_expand(*rs)).value == rec


# negation and inversion -----------------------------------------------------------


def test_invert_two():
    assert q_invert(q_rational_recursive(2, 1)).value == rf([0, 1], [1, 1])


def test_negate_half():
    assert q_negate(q_rational_recursive(1, 2)).value == rf([-1], [0, 1, 1])


@given(coprime)
def test_negate_involution(rs):
    x = q_rational_recursive(*rs)
    assert q_negate(q_negate(x)).value == x.value
    assert q_negate(x).value == q_rational_recursive(-rs[0], rs[1]).value


@given(coprime.filter(lambda t: t[0] != 0))
def test_invert_involution(rs):
    x = q_rational_recursive(*rs)
    assert q_invert(q_invert(x)).value == x.value
    inv = q_invert(x)
    assert inv.value == q_rational_recursive(inv.r, inv.s).value


def test_invert_zero():
    with pytest.raises(ZeroInverse):
        q_invert(q_rational_recursive(0, 1))


# generators ------------------------------------------------------------------------


def test_generator_relations():
    t, s = q_generators()
    assert (t, s) == (T_Q, S_Q)
    q = LaurentPoly.monomial(1)
    # with S_q = [[0,-1],[q,0]] both central elements carry a sign: -q Id and -q^3 Id
    ts = t @ s
    assert (s @ s).scalar() == -q
    assert (ts @ ts @ ts).scalar() == -(q * q * q)


@given(st.lists(st.sampled_from(["T", "S", "T-1"]), max_size=8))
def test_word_determinant_is_monomial(word):
    det = word_matrix(word).det()
    assert len([c for c in det.poly.coeffs if c]) == 1
    assert abs(sum(det.poly.coeffs)) == 1


def test_apply_translation():
    x = q_rational_recursive(3, 2)
    assert apply_word(["T"], x).value == q_rational_recursive(5, 2).value


@given(coprime, st.lists(st.sampled_from(["T", "S", "T-1"]), max_size=6))
def test_action_is_equivariant(rs, word):
    x = q_rational_recursive(*rs)
    y = x.x
    for g in reversed(word):  # the rightmost generator acts first
        if g == "S":
            if y == 0:
                return  # passes through infinity
            y = -1 / y
        else:
            y = y + 1 if g == "T" else y - 1
    assert apply_word(word, x).value == q_rational_recursive(y.numerator, y.denominator).value


def test_center_acts_trivially():
    x = q_rational_recursive(7, 3)
    assert apply_word(["S", "S"], x).value == x.value
    assert apply_word(["T", "S"] * 3, x).value == x.value


# series ----------------------------------------------------------------------------------


def test_golden_series():
    s = q_real_series(ContinuedFraction.regular([], [1]), 11)
    assert s.coefficients() == [1, 0, 1, -1, 2, -4, 8, -17, 37, -82, 185]


def test_silver_series():
    s = q_real_series(ContinuedFraction.regular([2], [2]), 12)
    assert s.coefficients() == [1, 1, 0, 0, 1, 0, -2, 1, 4, -5, -7, 18]


def test_stabilization_fails_for_rational_limit():
    # convergents 2, 3/2 + ..., alternating around 3/2: 3/2 = [1,2]; approach via [1,2,n]
    seq = [q_cf_regular_eval(ContinuedFraction.regular([1, 1, n])) for n in range(1, 200)]
    seq = [s for pair in zip(seq, [q_rational_recursive(3, 2)] * len(seq)) for s in pair]
    with pytest.raises(StabilizationNotReached):
        stabilize(seq, 6, max_depth=200)


def test_one_sided_rational_limit_is_not_the_limit():
    seq = [q_cf_regular_eval(ContinuedFraction.regular([1, 1, n])) for n in range(1, 60)]
    series, _ = stabilize(seq, 6)
    target = q_rational_recursive(3, 2).value
    from qreals.exactalg import taylor_expand

    assert series != taylor_expand(target, 6)


def test_series_of_rational_and_negative():
    s = q_real_series(parse_cf("5/2"), 6)
    from qreals.exactalg import taylor_expand

    assert s.series == taylor_expand(q_rational_recursive(5, 2).value, 6)
    neg = q_real_series(parse_cf("[-2,1;(1)]"), 6)
    assert neg.low == -2  # -2 <= x < -1
    assert neg.series.coefficient(-2) == -1


@given(st.integers(0, 3), st.lists(st.integers(1, 4), min_size=1, max_size=3), st.integers(4, 20))
def test_series_recurrences(a0, period, order):
    cf = ContinuedFraction.regular([a0 + 1], period)
    shifted = ContinuedFraction.regular([a0 + 2], period)
    x = q_real_series(cf, order).series
    y = q_real_series(shifted, order).series
    assert y == (x * IntPoly([0, 1]) + 1).truncate(order)


def test_series_truncation_consistent():
    cf = ContinuedFraction.regular([1], [1, 2])
    assert q_real_series(cf, 30).series.truncate(10) == q_real_series(cf, 10).series


# functional equations -------------------------------------------------------------------


def test_golden_equation():
    eq = functional_equation(ContinuedFraction.regular([], [1]))
    assert [list(p.coeffs) for p in eq] == [[0, 1], [1, -1, -1], [-1]]


def test_silver_equation():
    eq = functional_equation(ContinuedFraction.regular([2], [2]))
    assert [list(p.coeffs) for p in eq] == [[0, 1], [1, -2, 0, -1], [-1]]


@pytest.mark.parametrize("text", ["[1;(1)]", "[2;(2)]", "[1;(1,2)]", "[(2,2,1,1)]", "[3,1;(4,1,2)]", "hj:[2;(5,3)]"])
def test_equation_residual_vanishes(text):
    cf = parse_cf(text)
    eq = functional_equation(cf)
    res = eq.residual(q_real_series(cf, 40).series)
    assert all(res.coefficient(k) == 0 for k in range(min(res.low, 0), res.order))


def test_series_from_equation_matches_stabilization():
    cf = ContinuedFraction.regular([], [1])
    assert series_from_equation(functional_equation(cf), 20) == q_real_series(cf, 20).series


def test_degenerate_quadratic():
    with pytest.raises(DegenerateQuadratic):
        functional_equation(ContinuedFraction.regular([1, 1]))


def test_qrealseries_json():
    js = q_real_series(ContinuedFraction.regular([2], [2]), 5).to_json()
    assert js["coeffs"] == [1, 1, 0, 0, 1] and js["low"] == 0 and js["order"] == 5
    assert isinstance(TruncatedLaurentSeries(0, js["coeffs"]), TruncatedLaurentSeries)
