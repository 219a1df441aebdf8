"""Radius of convergence of q-reals: exact from the quadratic equation, numeric from coefficients."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np
import sympy

from .cf import ContinuedFraction, Kind, regular_to_hj
from .errors import QRealsError
from .exactalg import IntPoly, TruncatedLaurentSeries, format_poly, q_int_poly, squarefree_factors
from .qdeform import FunctionalEquation, QRealSeries, functional_equation, q_cf_hj_eval, q_cf_regular_eval, q_real_series
from .roots import _from_fixed, _to_fixed, find_roots

R_STAR = (3 - math.sqrt(5)) / 2
R_SQRT2 = (1 + math.sqrt(2) - math.sqrt(2 * math.sqrt(2) - 1)) / 2


class InsufficientCoefficients(QRealsError, ValueError):
    pass


class Method(str, Enum):
    EXACT_DISCRIMINANT = "ExactDiscriminant"
    EXACT_POLES = "ExactPoles"
    NUMERIC_RATIO = "NumericRatio"
    NUMERIC_ROOT = "NumericRoot"


@dataclass
class Certificate:
    """Irreducible integer polynomial with a root whose modulus is the radius.

    ``kind`` is "branch" for an odd-multiplicity zero of the discriminant and
    "pole" for a zero of the leading coefficient where the series branch
    blows up.
    """

    kind: str
    factor: IntPoly
    root: complex
    residual: float
    discriminant: IntPoly | None = None

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "factor": format_poly(self.factor),
            "factor_coeffs": list(self.factor.coeffs),
            "degree": self.factor.degree,
            "root": [self.root.real, self.root.imag],
            "residual": self.residual,
            "discriminant": format_poly(self.discriminant) if self.discriminant is not None else None,
        }


@dataclass
class RadiusReport:
    method: Method
    value: float
    certificate: Certificate | None = None
    coefficient_count: int = 0
    estimates: dict = field(default_factory=dict)
    uncertainty: float | None = None
    numeric_consistent: bool | None = None

    def to_json(self) -> dict:
        return {
            "method": self.method.value,
            "value": self.value,
            "certificate": self.certificate.to_json() if self.certificate else None,
            "coefficient_count": self.coefficient_count,
            "estimates": self.estimates,
            "uncertainty": self.uncertainty,
            "numeric_consistent": self.numeric_consistent,
        }


# ---------------------------------------------------------------------------
# numeric estimates


def radius_numeric(series: QRealSeries | TruncatedLaurentSeries | Sequence[int], window: float = 0.25) -> RadiusReport:
    """Radius estimates from Taylor coefficients kappa_0, kappa_1, ...

    rho is estimated three ways at the deepest available n: the root test
    |kappa_n|^(1/n), the ratio |kappa_n / kappa_{n-1}|, and the maximum of
    the root test over the last ``window`` fraction of indices (a finite
    stand-in for the limsup).  The reported radius is 1/limsup; the
    uncertainty is the spread between the root and ratio radii.
    """
    if isinstance(series, QRealSeries):
        series = series.series
    if isinstance(series, TruncatedLaurentSeries):
        coeffs = [series.coefficient(k) for k in range(0, series.order)]
    else:
        coeffs = list(series)
    if len(coeffs) < 16:
        raise InsufficientCoefficients(f"need at least 16 coefficients, got {len(coeffs)}")
    nonzero = [n for n in range(1, len(coeffs)) if coeffs[n]]
    if not nonzero:
        raise InsufficientCoefficients("series is constant; the radius is infinite")
    roots = {n: math.exp(_log_abs(coeffs[n]) / n) for n in nonzero}
    n_last = nonzero[-1]
    rho_root = roots[n_last]
    rho_ratio = None
    for n in reversed(nonzero):
        if coeffs[n - 1]:
            rho_ratio = math.exp(_log_abs(coeffs[n]) - _log_abs(coeffs[n - 1]))
            break
    start = int(len(coeffs) * (1 - window))
    rho_sup = max(v for n, v in roots.items() if n >= start) if any(n >= start for n in roots) else rho_root
    est = {"rho_root": rho_root, "rho_ratio": rho_ratio, "rho_limsup": rho_sup, "deepest_index": n_last}
    r_root = 1 / rho_root
    r_ratio = 1 / rho_ratio if rho_ratio else None
    est.update(R_root=r_root, R_ratio=r_ratio, R_limsup=1 / rho_sup)
    unc = abs(r_root - r_ratio) if r_ratio is not None else None
    return RadiusReport(Method.NUMERIC_ROOT, 1 / rho_sup, None, len(coeffs), est, unc)


def radius_by_depth(cf: ContinuedFraction, depths: Sequence[int]) -> list[tuple[int, dict]]:
    """Numeric estimates from the first d coefficients of [x]_q, for each d in depths."""
    series = q_real_series(cf, max(depths)).series
    coeffs = [series.coefficient(k) for k in range(series.order)]
    return [(d, radius_numeric(coeffs[:d]).estimates) for d in sorted(depths)]


def _log_abs(n: int) -> float:
    n = abs(int(n))
    k = max(n.bit_length() - 60, 0)
    return math.log(n >> k) + k * math.log(2)


# ---------------------------------------------------------------------------
# exact radius


def _sympy_poly(p: IntPoly) -> sympy.Poly:
    return sympy.Poly(list(reversed(p.coeffs)), sympy.Symbol("q"), domain="ZZ")


def _from_sympy(p: sympy.Poly) -> IntPoly:
    return IntPoly([int(c) for c in reversed(p.all_coeffs())])


def irreducible_factors(p: IntPoly) -> list[tuple[IntPoly, int]]:
    """Factorization over the integers into (factor, multiplicity), constants dropped."""
    _, fl = sympy.factor_list(_sympy_poly(p))
    return [(_from_sympy(f), m) for f, m in fl if f.degree() >= 1]


def _precise_roots(f: IntPoly, accuracy: float) -> list[complex]:
    return [complex(z) for z in find_roots(f, accuracy=accuracy).roots]


def odd_part(p: IntPoly) -> IntPoly:
    """Product of the square-free parts of p that occur to an odd power."""
    out = IntPoly([1])
    for i, f in enumerate(squarefree_factors(p)):
        if i % 2 == 0:
            out = out * f
    return out


def _homogeneous_roots(a: complex, b: complex, c: complex) -> list[np.ndarray]:
    """Both roots of a X^2 + b X + c as unit vectors (X : 1) in C^2."""
    sd = np.sqrt(complex(b * b - 4 * a * c))
    out = []
    for s in (1, -1):
        v1 = np.array([-b + s * sd, 2 * a])
        v2 = np.array([2 * c, -b - s * sd])
        v = v1 if np.linalg.norm(v1) >= np.linalg.norm(v2) else v2
        n = np.linalg.norm(v)
        out.append(v / n if n else np.array([1.0, 0.0]))
    return out


def _chordal(u: np.ndarray, v: np.ndarray) -> float:
    return abs(u[0] * v[1] - u[1] * v[0])


def branch_has_pole(eq: FunctionalEquation, series: TruncatedLaurentSeries, point: complex, steps: int = 2000) -> bool:
    """Whether the branch given by ``series`` blows up at a zero of eq.a.

    The root of the quadratic is followed from a small multiple of
    ``point`` (where the truncated series is accurate) to ``point`` along the
    segment, as a point of the Riemann sphere; at ``point`` one root is
    infinite and the other is -C/B.  The caller must make sure no branch
    point lies on the segment.
    """
    t0 = min(0.05 / abs(point), 0.5)
    z0 = point * t0
    x0 = complex(series(z0))
    v = np.array([x0, 1.0]) / math.hypot(abs(x0), 1.0)
    for t in np.linspace(t0, 1.0, steps)[1:]:
        z = point * t
        a, b, c = (complex(p(z)) for p in eq)
        v = min(_homogeneous_roots(a, b, c), key=lambda r: _chordal(r, v))
    b = complex(eq.b(point))
    if b == 0:
        return True
    finite = -complex(eq.c(point)) / b
    return _chordal(v, np.array([1.0, 0.0])) < _chordal(v, np.array([finite, 1.0]) / math.hypot(abs(finite), 1.0))


def radius_exact(
    cf: ContinuedFraction, crosscheck: bool = True, numeric_order: int = 160, accuracy: float = 1e-14
) -> RadiusReport:
    """Radius of convergence of [x]_q for an eventually periodic x.

    [x]_q solves A X^2 + B X + C = 0, so its only possible singularities are
    the odd-multiplicity zeros of B^2 - 4AC (branch points, always
    singular) and zeros of A at which the chosen branch has a pole.  The
    radius is the smallest modulus among the certified candidates; the
    origin is excluded.  With ``crosscheck`` the value is compared with the
    numeric estimate from ``numeric_order`` coefficients.
    """
    eq = functional_equation(cf)
    disc = eq.discriminant()
    odd = odd_part(disc)
    odd = odd.shift(-odd.valuation())
    candidates: list[Certificate] = []
    for f, _ in irreducible_factors(odd) if odd.degree >= 1 else []:
        roots = [z for z in _precise_roots(f, accuracy) if z != 0]
        z = min(roots, key=abs)
        candidates.append(Certificate("branch", f, z, abs(complex(f(z))), disc))
    branch_min = min((abs(c.root) for c in candidates), default=math.inf)

    series = None
    a = eq.a.shift(-eq.a.valuation())
    if a.degree >= 1:
        pole_points = []
        for f, _ in irreducible_factors(a):
            for z in _precise_roots(f, accuracy):
                if abs(z) < branch_min:
                    pole_points.append((abs(z), f, z))
        pole_points.sort(key=lambda t: t[0])
        for _, f, z in pole_points:
            if series is None:
                series = q_real_series(cf, 60).series
            if branch_has_pole(eq, series, z):
                candidates.append(Certificate("pole", f, z, abs(complex(f(z))), disc))
                break
    if not candidates:
        raise QRealsError("no singularity found; the series would be entire")
    best = min(candidates, key=lambda c: abs(c.root))
    report = RadiusReport(Method.EXACT_DISCRIMINANT, abs(best.root), best)
    if crosscheck:
        num = radius_numeric(q_real_series(cf, numeric_order))
        report.coefficient_count = num.coefficient_count
        report.estimates = num.estimates
        report.uncertainty = num.uncertainty
        report.numeric_consistent = numeric_consistent(report.value, num)
    return report


def numeric_consistent(exact: float, numeric: RadiusReport, slack: float = 0.1) -> bool:
    """Exact and numeric radii agree up to the numeric spread plus ``slack``.

    Finite-depth root tests overestimate the radius, so the check is
    deliberately loose; it catches a candidate that is far off, such as a
    removable factor taken for a singularity.
    """
    spread = numeric.uncertainty or 0.0
    return abs(exact - numeric.value) <= slack + spread


def radius_rational(cf: ContinuedFraction) -> RadiusReport:
    """Radius of a q-rational: the smallest modulus of a pole of the reduced fraction."""
    value = (q_cf_regular_eval if cf.kind is Kind.REGULAR else q_cf_hj_eval)(cf).value
    den = value.den
    den = den.shift(-den.valuation())
    if den.degree < 1:
        return RadiusReport(Method.EXACT_POLES, math.inf)
    rs = find_roots(den)
    k = int(np.argmin(rs.moduli))
    return RadiusReport(Method.EXACT_POLES, rs.min_modulus, Certificate("pole", den, complex(rs.roots[k]), float(rs.residuals[k])))


# ---------------------------------------------------------------------------
# the all-coefficients-at-least-four criterion


@dataclass
class DenominatorCheck:
    n: int
    degree: int
    zeros_inside: int
    min_on_circle: float

    @property
    def root_free(self) -> bool:
        return self.zeros_inside == 0 and self.min_on_circle > 0

    def to_json(self) -> dict:
        return {"n": self.n, "degree": self.degree, "zeros_inside": self.zeros_inside,
                "min_on_circle": self.min_on_circle, "root_free": self.root_free}


@dataclass
class GenThmReport:
    cf: str
    guaranteed: bool
    threshold_index: int | None
    radius: float
    checks: list[DenominatorCheck]

    @property
    def empirical_pass(self) -> bool:
        return all(c.root_free for c in self.checks)

    def to_json(self) -> dict:
        return {
            "cf": self.cf,
            "guaranteed": self.guaranteed,
            "N": self.threshold_index,
            "radius": self.radius,
            "empirical_pass": self.empirical_pass,
            "checked_up_to": max((c.n for c in self.checks), default=0),
            "checks": [c.to_json() for c in self.checks],
        }


def hj_denominators(coeffs: Sequence[int]) -> list[IntPoly]:
    """S_1, S_2, ... with S_{n+1} = [c_{n+1}]_q S_n - q^(c_n - 1) S_{n-1}, S_0 = 0, S_1 = 1."""
    out = [IntPoly([1])]
    prev = IntPoly()
    for i in range(1, len(coeffs)):
        nxt = q_int_poly(coeffs[i]) * out[-1] - prev.shift(coeffs[i - 1] - 1)
        prev = out[-1]
        out.append(nxt)
    return out


def hj_denominator_values(coeffs: Sequence[int], z: np.ndarray, bits: int = 256) -> tuple[np.ndarray, np.ndarray]:
    """S_1(z), ..., S_n(z) through the three-term recurrence in exact fixed point.

    Returns values and error bounds, both of shape (n, len(z)).  The bound
    is the truncation per step amplified by the magnitude recurrence
    M_{n+1} = [c]_{|z|} M_n + |z|^(c-1) M_{n-1}, which dominates every
    partial sum.
    """
    z = np.asarray(z, dtype=complex)
    one = 1 << bits
    zr, zi = _to_fixed(z, bits)
    top = max(coeffs)
    pw = [(np.full(len(z), one, dtype=object), np.zeros(len(z), dtype=object))]
    for _ in range(top):
        ar, ai = pw[-1]
        pw.append(((ar * zr - ai * zi) >> bits, (ar * zi + ai * zr) >> bits))
    qint = {}
    for c in set(coeffs):
        qint[c] = (sum(pw[k][0] for k in range(c)), sum(pw[k][1] for k in range(c)))
    r = np.abs(z)
    n = len(coeffs)
    vals = np.empty((n, len(z)), dtype=complex)
    errs = np.empty((n, len(z)))
    pr, pi = np.zeros(len(z), dtype=object), np.zeros(len(z), dtype=object)
    sr, si = np.full(len(z), one, dtype=object), np.zeros(len(z), dtype=object)
    m_prev, m_cur = np.zeros(len(z)), np.ones(len(z))
    unit = math.ldexp(1.0, -bits)
    vals[0], errs[0] = 1.0, 0.0
    for i in range(1, n):
        c, cp = coeffs[i], coeffs[i - 1]
        ar, ai = qint[c]
        br, bi = pw[cp - 1]
        nr = ((ar * sr - ai * si) >> bits) - ((br * pr - bi * pi) >> bits)
        ni = ((ar * si + ai * sr) >> bits) - ((br * pi + bi * pr) >> bits)
        pr, pi, sr, si = sr, si, nr, ni
        m_prev, m_cur = m_cur, sum(r**k for k in range(c)) * m_cur + r ** (cp - 1) * m_prev
        vals[i] = _from_fixed(sr, si, bits)
        errs[i] = 8 * (i + 1) * (top + 2) * unit * (m_cur + 1)
    return vals, errs


def winding_counts(values: np.ndarray) -> np.ndarray:
    """Winding number around 0 of each row of closed-curve samples."""
    steps = np.angle(np.roll(values, -1, axis=1) / values)
    return np.rint(steps.sum(axis=1) / (2 * np.pi)).astype(int), np.abs(steps).max(axis=1)


def genthm_check(cf: ContinuedFraction, n_max: int = 60, radius: float = R_STAR) -> GenThmReport:
    """Check the sufficient condition c_i >= 4 (eventually) and test denominators.

    ``guaranteed`` holds when every Hirzebruch-Jung coefficient from some
    index N on is at least 4.  Independently, the q-denominators S_n of the
    first ``n_max`` convergents are checked to have no zeros in |q| <= radius.
    """
    hj = cf if cf.kind is Kind.HJ else regular_to_hj(cf)
    if hj.is_periodic:
        guaranteed = min(hj.period) >= 4
        threshold = None
        if guaranteed:
            threshold = len(hj.prefix) + 1
            while threshold > 1 and hj.prefix[threshold - 2] >= 4:
                threshold -= 1
    else:
        guaranteed, threshold = True, len(hj.prefix) + 1
    coeffs = hj.terms(n_max) if hj.is_periodic else list(hj.prefix)[:n_max]
    degrees = np.cumsum([0] + [c - 1 for c in coeffs[1:]])
    samples = 4096
    while True:
        z = radius * np.exp(2j * np.pi * np.arange(samples) / samples)
        bits = 256
        vals, errs = hj_denominator_values(coeffs, z, bits)
        while not np.all(np.abs(vals) > 8 * errs) and bits < 4096:
            bits *= 2
            vals, errs = hj_denominator_values(coeffs, z, bits)
        counts, jumps = winding_counts(vals)
        if jumps[1:].max(initial=0) < np.pi / 4 or samples >= 1 << 16:
            break
        samples *= 2
    separated = np.all(np.abs(vals) > 8 * errs, axis=1)
    checks = [
        DenominatorCheck(n, int(degrees[n - 1]), int(counts[n - 1]) if separated[n - 1] else -1,
                         float(np.abs(vals[n - 1]).min()) if separated[n - 1] else 0.0)
        for n in range(2, len(coeffs) + 1)
        if degrees[n - 1] >= 1
    ]
    return GenThmReport(str(hj), guaranteed, threshold, radius, checks)
