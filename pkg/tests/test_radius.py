import math

import numpy as np
import pytest

from qreals.cf import ContinuedFraction, parse_cf
from qreals.exactalg import IntPoly, TruncatedLaurentSeries
from qreals.qdeform import DegenerateQuadratic, q_real_series
from qreals.radius import (
    R_SQRT2,
    R_STAR,
    InsufficientCoefficients,
    Method,
    genthm_check,
    hj_denominator_values,
    hj_denominators,
    odd_part,
    radius_by_depth,
    radius_exact,
    radius_numeric,
    radius_rational,
)
from qreals.roots import find_roots

PHI = ContinuedFraction.regular([], [1])
SILVER = ContinuedFraction.regular([2], [2])
SQRT3 = ContinuedFraction.regular([1], [1, 2])
BRONZE = ContinuedFraction.regular([], [2, 2, 1, 1])


def certificate_root_modulus(rep):
    return find_roots(rep.certificate.factor).min_modulus


# exact --------------------------------------------------------------------------


def test_golden_radius():
    rep = radius_exact(PHI)
    assert rep.method is Method.EXACT_DISCRIMINANT
    assert abs(rep.value - (3 - math.sqrt(5)) / 2) < 1e-15
    assert rep.certificate.factor == IntPoly([1, 3, 1])
    assert abs(rep.value**2 - 3 * rep.value + 1) < 1e-12
    assert rep.numeric_consistent


def test_silver_radius():
    rep = radius_exact(SILVER, crosscheck=False)
    expected = (1 + math.sqrt(2) - math.sqrt(2 * math.sqrt(2) - 1)) / 2
    assert abs(rep.value - expected) < 1e-14 and abs(R_SQRT2 - expected) < 1e-15
    assert rep.certificate.factor == IntPoly([1, 1, 4, 1, 1])
    r = rep.value
    assert abs(r**4 - 2 * r**3 + r**2 - 2 * r + 1) < 1e-12


def test_sqrt3_radius():
    rep = radius_exact(SQRT3, crosscheck=False)
    assert abs(rep.value - 0.527756) < 1e-6
    assert rep.certificate.factor == IntPoly([1, 2, 3, 0, 3, 2, 1])


def test_bronze_radius():
    rep = radius_exact(BRONZE, crosscheck=False)
    assert abs(rep.value - (1 + math.sqrt(13) - math.sqrt(2 * (math.sqrt(13) - 1))) / 4) < 1e-12


def test_ordering():
    values = [radius_exact(cf, crosscheck=False).value for cf in (PHI, SQRT3, SILVER)]
    assert values[0] < values[1] < values[2]


@pytest.mark.parametrize("text", ["[1;(1)]", "[2;(2)]", "[1;(1,2)]", "[(2,2,1,1)]", "[3;(1,4)]", "[[(5,7)]]"])
def test_certificate_matches_value(text):
    rep = radius_exact(parse_cf(text), crosscheck=False)
    assert abs(certificate_root_modulus(rep) - rep.value) < 1e-10
    assert rep.certificate.residual < 1e-10


def test_odd_part_removes_square_factors():
    p = IntPoly([1, 1]) ** 2 * IntPoly([1, 3, 1]) * IntPoly([2, 0, 1]) ** 3
    assert odd_part(p) == IntPoly([1, 3, 1]) * IntPoly([2, 0, 1]) or odd_part(p) == -(IntPoly([1, 3, 1]) * IntPoly([2, 0, 1]))


def test_orbit_translates_share_radius():
    for text in ("[2;(1)]", "[0;(1)]", "[-1;(1)]", "[5,1;(1)]", "[1,2;(1)]", "[1,3;(1)]"):
        assert abs(radius_exact(parse_cf(text), crosscheck=False).value - R_STAR) < 1e-12


def test_numeric_agreement_tightens():
    exact = radius_exact(PHI, crosscheck=False).value
    gaps = [abs(e["R_limsup"] - exact) for _, e in radius_by_depth(PHI, [50, 100, 200])]
    assert gaps[-1] < 0.05
    assert gaps[0] > gaps[1] > gaps[2]


def test_degenerate_input():
    with pytest.raises(DegenerateQuadratic):
        radius_exact(ContinuedFraction.regular([1, 1]))


def test_json():
    js = radius_exact(PHI, crosscheck=False).to_json()
    assert js["method"] == "ExactDiscriminant"
    assert js["certificate"]["factor_coeffs"] == [1, 3, 1]


# numeric --------------------------------------------------------------------------


def test_golden_ratio_estimate():
    rep = radius_numeric(q_real_series(PHI, 21))
    assert abs(rep.estimates["rho_ratio"] - 1032004 / 424748) < 1e-12
    assert abs(rep.estimates["rho_ratio"] - 2.4297) < 1e-4


def test_geometric_series():
    rep = radius_numeric([2**k for k in range(30)])
    assert rep.estimates["rho_ratio"] == pytest.approx(2.0, rel=1e-12)
    assert rep.estimates["R_ratio"] == pytest.approx(0.5, rel=1e-12)


def test_silver_depths():
    depths = [28, 60, 120]
    rows = radius_by_depth(SILVER, depths)
    gaps = [e["R_limsup"] - R_SQRT2 for _, e in rows]
    assert abs(gaps[0]) < 0.15
    assert all(g > 0 for g in gaps)
    assert gaps[0] > gaps[1] > gaps[2]


def test_insufficient_coefficients():
    with pytest.raises(InsufficientCoefficients):
        radius_numeric([1] * 15)
    with pytest.raises(InsufficientCoefficients):
        radius_numeric(TruncatedLaurentSeries(0, [1] + [0] * 20))


def test_uncertainty_is_spread():
    rep = radius_numeric(q_real_series(PHI, 40))
    assert rep.uncertainty == pytest.approx(abs(rep.estimates["R_root"] - rep.estimates["R_ratio"]))


# rationals ---------------------------------------------------------------------------


def test_rational_radius_is_nearest_pole():
    rep = radius_rational(parse_cf("8/5"))
    assert rep.method is Method.EXACT_POLES
    assert abs(rep.value - find_roots(IntPoly([1, 2, 1, 1])).min_modulus) < 1e-14


# the coefficients-at-least-four criterion ------------------------------------------------


def test_hj_denominators_recurrence():
    dens = hj_denominators([2, 3, 3])
    assert dens[0] == IntPoly([1])
    assert dens[1] == IntPoly([1, 1, 1])
    assert dens[2] == IntPoly([1, 1, 1]) ** 2 - IntPoly([0, 0, 1])
    assert [d(1) for d in dens] == [1, 3, 8]


def test_denominator_values_match_polynomials():
    coeffs = [2, 4, 4, 5, 4]
    z = 0.4 * np.exp(1j * np.linspace(0, 2 * np.pi, 16, endpoint=False))
    vals, errs = hj_denominator_values(coeffs, z)
    for row, p in zip(vals, hj_denominators(coeffs)):
        assert np.allclose(row, np.polyval(list(reversed(p.coeffs)), z), rtol=1e-12, atol=1e-14)


def test_genthm_sqrt3_tail():
    rep = genthm_check(ContinuedFraction.hj([2], [4]), 60)
    assert rep.guaranteed and rep.threshold_index == 2
    assert rep.empirical_pass
    assert max(c.n for c in rep.checks) == 60


def test_genthm_fibonacci_case():
    rep = genthm_check(ContinuedFraction.hj([], [3]), 60)
    assert not rep.guaranteed
    assert rep.empirical_pass


def test_genthm_all_large():
    rep = genthm_check(ContinuedFraction.hj([], [5, 7]), 40)
    assert rep.guaranteed and rep.threshold_index == 1 and rep.empirical_pass


def test_genthm_regular_input_and_prefix():
    rep = genthm_check(parse_cf("hj:[3,2,5;(4,6)]"), 30)
    assert rep.guaranteed and rep.threshold_index == 3
    assert not genthm_check(SILVER, 20).guaranteed


def test_genthm_detects_zeros_inside():
    # [[(2,3)]] has denominators with zeros well inside |q| < 0.6
    rep = genthm_check(ContinuedFraction.hj([], [2, 3]), 12, radius=0.6)
    counted = {c.n: c.zeros_inside for c in rep.checks}
    for n, k in counted.items():
        p = hj_denominators(ContinuedFraction.hj([], [2, 3]).terms(12))[n - 1]
        assert k == int(np.sum(find_roots(p).moduli < 0.6))
    assert not rep.empirical_pass
