import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from qreals.exactalg import IntPoly
from qreals.families import GAUSS_4_2, QINT3, Family, family_poly
from qreals.radius import R_SQRT2, R_STAR
from qreals.roots import (
    AnnulusReport,
    DenominatorVanishes,
    NonConvergence,
    annulus_check,
    evaluate,
    family_rouche_margin,
    find_roots,
    rouche_margin,
    tightness_trend,
)


def expand(roots):
    c = np.array([1.0 + 0j])
    for z in roots:
        c = np.convolve(c, [1.0, -z])
    return c


# find_roots --------------------------------------------------------------------


def test_golden_quadratic():
    rs = find_roots(IntPoly([1, 3, 1]))
    assert np.allclose(sorted(rs.roots.real), [-1 / R_STAR, -R_STAR], atol=1e-14)
    assert np.all(rs.roots.imag == 0)


def test_cyclotomic():
    rs = find_roots(QINT3)
    expected = {cmath.exp(2j * math.pi / 3), cmath.exp(-2j * math.pi / 3)}
    for z in rs.roots:
        assert min(abs(z - e) for e in expected) < 1e-14
    assert np.allclose(rs.moduli, 1.0)


def test_pell_ten_moduli():
    p = family_poly(Family.PELL, 10)
    rs = find_roots(p)
    assert abs(rs.min_modulus - 0.5668) <= 1e-3
    # P_10 is palindromic, so the largest modulus is the reciprocal of the smallest
    assert list(p.coeffs) == list(reversed(p.coeffs))
    assert abs(rs.max_modulus * rs.min_modulus - 1) < 1e-12
    assert abs(rs.max_modulus - 1.7643) < 1e-3


def test_multiplicity_and_zero_roots():
    p = IntPoly([1, 1]) ** 3 * IntPoly([0, 0, 1]) * IntPoly([2, 0, 1])
    rs = find_roots(p)
    assert len(rs) == p.degree
    assert sorted(rs.multiplicity.tolist()) == [1, 1, 2, 2, 3, 3, 3]
    assert np.sum(np.abs(rs.roots + 1) < 1e-12) == 3
    assert np.sum(rs.roots == 0) == 2


def test_degree_zero_rejected():
    with pytest.raises(ValueError):
        find_roots(IntPoly([5]))


def test_non_convergence():
    with pytest.raises(NonConvergence):
        find_roots(IntPoly([1, 3, 5, 7, 9, 11, 13]), tol=1e-300, max_iter=3)


@given(st.lists(st.integers(-9, 9), min_size=2, max_size=12).filter(lambda c: c[-1] != 0))
def test_reexpansion_and_conjugate_closure(c):
    p = IntPoly(c)
    rs = find_roots(p)
    assert len(rs) == p.degree
    mono = np.array(list(reversed(c)), dtype=float) / c[-1]
    assert np.allclose(expand(rs.roots).real, mono, atol=1e-8 * max(1, np.abs(mono).max()))
    conj = np.sort_complex(np.conj(rs.roots))
    assert np.allclose(np.sort_complex(rs.roots), conj, atol=1e-8)
    assert rs.max_residual < 1e-12


@pytest.mark.parametrize("n", [5, 12, 25, 40])
def test_mirror_root_duality(n):
    a = np.sort(find_roots(family_poly(Family.FIBONACCI, n)).moduli)
    b = np.sort(1 / find_roots(family_poly(Family.FIBONACCI_TILDE, n)).moduli)
    assert np.allclose(a, b, atol=1e-8)


def test_high_degree_accuracy():
    # ill-conditioned deep Pell member: residual-checked roots stay inside the annulus
    rs = find_roots(family_poly(Family.PELL, 45))
    assert rs.min_modulus > R_SQRT2
    assert np.all(rs.errors < 1e-9)


def test_rootset_exports():
    rs = find_roots(IntPoly([1, 3, 1]))
    rows = rs.to_rows()
    assert len(rows) == 2 and abs(rows[0][2] - R_STAR) < 1e-14
    js = rs.to_json()
    assert js["poly"] == [1, 3, 1] and len(js["roots"]) == 2


# evaluate -------------------------------------------------------------------------


def exact_value(p, w):
    x, y = Fraction(w.real), Fraction(w.imag)
    re, im = Fraction(0), Fraction(0)
    for c in reversed(p.coeffs):
        re, im = re * x - im * y + c, re * y + im * x
    return complex(float(re), float(im))


def test_evaluate_bounds():
    p = family_poly(Family.PELL, 30)
    z = R_SQRT2 * np.exp(1j * np.linspace(0, 2 * np.pi, 64, endpoint=False))
    v, err = evaluate(p, z)
    exact = np.array([exact_value(p, w) for w in z])
    # the exact value is itself rounded to a float for the comparison
    assert np.all(np.abs(v - exact) <= err + 2 * np.finfo(float).eps * np.abs(exact))
    assert np.all(err <= 1e-12 * np.abs(v))


@given(st.floats(-1e3, 1e3, allow_nan=False), st.integers(8, 1100))
def test_fixed_point_conversion_exact(x, bits):
    from qreals.roots import _float_to_fixed

    assert _float_to_fixed(x, bits) == round(Fraction(x) * 2**bits)


# annulus ---------------------------------------------------------------------------


def test_annulus_report_pass_flag():
    r = AnnulusReport("x", 2, 0.5, 2.0, 0.4, 2.5)
    assert r.passed
    assert not AnnulusReport("x", 2, 0.4, 2.0, 0.4, 2.5).passed
    assert r.to_json()["pass"] is True


def test_fibonacci_annulus_40():
    reports = annulus_check(Family.FIBONACCI, 40, R_STAR, 1 / R_STAR)
    assert all(r.passed for r in reports)
    assert {r.label for r in reports} >= {"fib40", "fib~40"}


def test_pell_annulus_40():
    reports = annulus_check(Family.PELL, 40, R_SQRT2, 1 / R_SQRT2)
    assert all(r.passed for r in reports)


def test_pell_inside_looser_annulus():
    assert R_STAR < R_SQRT2
    reports = annulus_check(Family.PELL, 40, R_STAR, 1 / R_STAR)
    assert all(r.passed for r in reports)


def test_tightness_trend():
    reports = [r for r in annulus_check(Family.FIBONACCI, 30, R_STAR, 1 / R_STAR) if "~" not in r.label]
    trend = tightness_trend(reports)
    gaps = {int(lbl[3:]): g for lbl, _, g in trend}
    assert all(g > 0 for g in gaps.values())
    for parity in (0, 1):
        seq = [gaps[n] for n in sorted(gaps) if n % 2 == parity and n >= 10]
        assert all(b < a for a, b in zip(seq, seq[1:]))


# Rouche margins ---------------------------------------------------------------------


def test_fibonacci_margin_n10():
    assert family_rouche_margin(Family.FIBONACCI, 10, R_STAR) > 0
    direct = rouche_margin(QINT3, family_poly(Family.FIBONACCI, 8), family_poly(Family.FIBONACCI, 10), 2, R_STAR)
    assert direct == family_rouche_margin(Family.FIBONACCI, 10, R_STAR)


def test_pell_margin_n10():
    assert rouche_margin(GAUSS_4_2, family_poly(Family.PELL, 8), family_poly(Family.PELL, 10), 4, R_SQRT2) > 0


def test_margin_matches_dense_sampling():
    num, den = family_poly(Family.FIBONACCI, 6), family_poly(Family.FIBONACCI, 8)
    z = R_STAR * np.exp(2j * np.pi * np.arange(4096) / 4096)
    g = np.abs(z * z + z + 1) - R_STAR**2 * np.abs(np.polyval(list(reversed(num.coeffs)), z) / np.polyval(list(reversed(den.coeffs)), z))
    m = rouche_margin(QINT3, num, den, 2, R_STAR)
    assert abs(m - g.min()) < 1e-12
    assert rouche_margin(QINT3, num, den, 2, R_STAR, safety=True) < m


def test_denominator_vanishes():
    with pytest.raises(DenominatorVanishes):
        rouche_margin(QINT3, IntPoly([1]), IntPoly([-1, 1]), 2, 1.0, samples=64)


def test_tilde_index_guard():
    with pytest.raises(ValueError):
        family_rouche_margin(Family.FIBONACCI_TILDE, 3, R_STAR)
