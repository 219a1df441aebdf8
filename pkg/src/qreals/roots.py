"""Complex roots of integer polynomials, annulus checks and Rouché margins."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import QRealsError
from .exactalg import IntPoly, squarefree_factors

EPS = np.finfo(float).eps


class NonConvergence(QRealsError, ArithmeticError):
    def __init__(self, iterations: int, residual: float):
        super().__init__(f"root iteration did not converge after {iterations} steps (residual {residual:.3g})")
        self.iterations = iterations
        self.residual = residual


class DenominatorVanishes(QRealsError, ZeroDivisionError):
    pass


@dataclass
class RootSet:
    """All complex roots, repeated according to multiplicity.

    ``residuals`` are relative backward errors |p(z)| / sum |a_i| |z|^i;
    ``multiplicity[k]`` is the exact multiplicity of ``roots[k]`` as a root
    of the input, taken from its square-free decomposition; ``errors`` are
    first-order bounds on the distance to the true root.
    """

    poly: IntPoly
    roots: np.ndarray
    residuals: np.ndarray
    multiplicity: np.ndarray
    errors: np.ndarray

    def __len__(self):
        return len(self.roots)

    @property
    def moduli(self) -> np.ndarray:
        return np.abs(self.roots)

    @property
    def min_modulus(self) -> float:
        return float(self.moduli.min())

    @property
    def max_modulus(self) -> float:
        return float(self.moduli.max())

    @property
    def max_residual(self) -> float:
        return float(self.residuals.max()) if len(self.residuals) else 0.0

    def to_rows(self) -> list[tuple[float, float, float]]:
        return [(float(z.real), float(z.imag), float(abs(z))) for z in self.roots]

    def to_json(self) -> dict:
        return {
            "poly": list(self.poly.coeffs),
            "roots": [[float(z.real), float(z.imag)] for z in self.roots],
            "residuals": [float(r) for r in self.residuals],
            "errors": [float(e) for e in self.errors],
            "multiplicity": [int(m) for m in self.multiplicity],
            "min_modulus": self.min_modulus,
            "max_modulus": self.max_modulus,
        }


# ---------------------------------------------------------------------------
# float kernels (coefficient arrays are high-first)


def _horner(c: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Value and derivative at every point of z."""
    p = np.full(z.shape, c[0], dtype=complex)
    dp = np.zeros(z.shape, dtype=complex)
    for a in c[1:]:
        dp = dp * z + p
        p = p * z + a
    return p, dp


def _newton_ratio(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """p(z)/p'(z), through the reversed polynomial outside the unit disc."""
    n = len(c) - 1
    out = np.empty(z.shape, dtype=complex)
    inside = np.abs(z) <= 1
    with np.errstate(all="ignore"):
        if inside.any():
            p, dp = _horner(c, z[inside])
            out[inside] = p / dp
        if (~inside).any():
            zo = z[~inside]
            w = 1 / zo
            r, dr = _horner(c[::-1], w)
            out[~inside] = zo / (n - w * dr / r)
    return out


def backward_error(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """|p(z)| / sum |c_i| |z|^i."""
    out = np.empty(z.shape, dtype=float)
    inside = np.abs(z) <= 1
    with np.errstate(all="ignore"):
        for mask, cc, zz in ((inside, c, z), (~inside, c[::-1], 1 / z)):
            if mask.any():
                p, _ = _horner(cc, zz[mask])
                s, _ = _horner(np.abs(cc), np.abs(zz[mask]).astype(complex))
                out[mask] = np.abs(p) / np.abs(s)
    return out


def forward_error(c: np.ndarray, z: np.ndarray) -> np.ndarray:
    """First-order bound on |z - root| for a float evaluation: (|p| + rounding) / |p'|."""
    p, dp = _horner(c, z)
    s, _ = _horner(np.abs(c), np.abs(z).astype(complex))
    with np.errstate(divide="ignore", invalid="ignore"):
        return (np.abs(p) + 4 * len(c) * EPS * np.abs(s)) / np.abs(dp)


def aberth(c: np.ndarray, z0: np.ndarray, tol: float, max_iter: int) -> tuple[np.ndarray, int]:
    """Aberth-Ehrlich simultaneous iteration from the initial guesses z0."""
    z = z0.astype(complex).copy()
    active = np.ones(len(z), dtype=bool)
    for it in range(1, max_iter + 1):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            return z, it
        w = _aberth_step(_newton_ratio(c, z[idx]), z, idx)
        z[idx] -= w
        done = (np.abs(w) <= 4 * EPS * np.abs(z[idx])) | (backward_error(c, z[idx]) <= tol * 1e-2)
        active[idx[done]] = False
    return z, max_iter


def _aberth_step(ratio: np.ndarray, z: np.ndarray, idx: np.ndarray) -> np.ndarray:
    diff = z[idx, None] - z[None, :]
    diff[np.arange(len(idx)), idx] = np.inf
    with np.errstate(all="ignore"):
        w = ratio / (1 - ratio * (1 / diff).sum(axis=1))
    bad = ~np.isfinite(w)
    w[bad] = ratio[bad]
    w[~np.isfinite(w)] = 0
    return w


# ---------------------------------------------------------------------------
# exact fixed-point kernels: numbers are Python ints scaled by 2**bits


def _fix_to_float(x: int, bits: int) -> float:
    x = int(x)
    sh = max(abs(x).bit_length() - 60, 0)
    try:
        return math.ldexp(x >> sh, sh - bits)
    except OverflowError:
        return math.copysign(math.inf, x)


def _float_to_fixed(x: float, bits: int) -> int:
    # floats are dyadic, so the scaled value is an exact integer once bits >= 1074
    m, e = math.frexp(x)
    k = e - 53 + bits
    mant = int(math.ldexp(m, 53))
    return mant << k if k >= 0 else round(mant / (1 << -k)) if -k < 1100 else 0


def _to_fixed(z: np.ndarray, bits: int) -> tuple[np.ndarray, np.ndarray]:
    zr = np.array([_float_to_fixed(v.real, bits) for v in z], dtype=object)
    zi = np.array([_float_to_fixed(v.imag, bits) for v in z], dtype=object)
    return zr, zi


def _from_fixed(zr: np.ndarray, zi: np.ndarray, bits: int) -> np.ndarray:
    return np.array([complex(_fix_to_float(a, bits), _fix_to_float(b, bits)) for a, b in zip(zr, zi)])


def _fixed_eval(coeffs: list[int], zr: np.ndarray, zi: np.ndarray, bits: int, derivative: bool = True):
    """p (and p') at (zr + i zi)/2**bits with exact integer Horner steps."""
    one = 1 << bits
    pr = np.array([coeffs[0] * one] * len(zr), dtype=object)
    pi = np.zeros(len(zr), dtype=object)
    dr = np.zeros(len(zr), dtype=object)
    di = np.zeros(len(zr), dtype=object)
    for a in coeffs[1:]:
        if derivative:
            dr, di = ((dr * zr - di * zi) >> bits) + pr, ((dr * zi + di * zr) >> bits) + pi
        pr, pi = ((pr * zr - pi * zi) >> bits) + a * one, (pr * zi + pi * zr) >> bits
    return pr, pi, dr, di


def _fixed_ratio(pr, pi, dr, di) -> np.ndarray:
    """(pr + i pi)/(dr + i di) in floating point without overflow."""
    out = np.empty(len(pr), dtype=complex)
    for k, (a, b, c, d) in enumerate(zip(pr, pi, dr, di)):
        sh = max(abs(int(c)).bit_length(), abs(int(d)).bit_length()) - 60
        den = complex(_fix_to_float(c, sh), _fix_to_float(d, sh))
        out[k] = complex(_fix_to_float(a, sh), _fix_to_float(b, sh)) / den if den else complex(math.inf)
    return out


def refine_fixed(coeffs: list[int], z0: np.ndarray, bits: int, max_iter: int = 100) -> np.ndarray:
    """Aberth-Ehrlich iteration with p and p' evaluated exactly in fixed point.

    Only the correction is formed in floating point; near convergence it
    needs relative accuracy only, so the roots reach about 2**-bits.
    """
    zr, zi = _to_fixed(z0, bits)
    active = np.ones(len(z0), dtype=bool)
    floor = math.ldexp(1.0, 8 - bits)
    abs_coeffs = np.abs(np.array([float(a) for a in coeffs]))
    for _ in range(max_iter):
        idx = np.nonzero(active)[0]
        if len(idx) == 0:
            break
        pr, pi, dr, di = _fixed_eval(coeffs, zr[idx], zi[idx], bits)
        z = _from_fixed(zr, zi, bits)
        w = _aberth_step(_fixed_ratio(pr, pi, dr, di), z, idx)
        wr, wi = _to_fixed(w, bits)
        zr[idx] -= wr
        zi[idx] -= wi
        # steps at the level of the evaluation rounding cannot improve the root
        s, _ = _horner(abs_coeffs, np.abs(z[idx]).astype(complex))
        with np.errstate(divide="ignore", invalid="ignore"):
            noise = len(coeffs) * math.ldexp(16.0, -bits) * (np.abs(s) + 1) / np.abs(_from_fixed(dr, di, bits))
        stop = (np.abs(w) <= floor * np.maximum(np.abs(z[idx]), 1.0)) | (np.abs(w) <= noise)
        active[idx[stop]] = False
    return _from_fixed(zr, zi, bits)


def _fixed_errors(coeffs: list[int], z: np.ndarray, bits: int) -> np.ndarray:
    """Newton step plus fixed-point rounding, divided by |p'|."""
    zr, zi = _to_fixed(z, bits)
    pr, pi, dr, di = _fixed_eval(coeffs, zr, zi, bits)
    newton = np.abs(_fixed_ratio(pr, pi, dr, di))
    dp = np.abs(_from_fixed(dr, di, bits))
    s, _ = _horner(np.abs(np.array([float(a) for a in coeffs])), np.abs(z).astype(complex))
    with np.errstate(divide="ignore"):
        return newton + len(coeffs) * math.ldexp(4.0, -bits) * (np.abs(s) + 1) / dp


# ---------------------------------------------------------------------------
# root finding


def _roots_squarefree(p: IntPoly, tol: float, max_iter: int, accuracy: float):
    coeffs = list(reversed(p.coeffs))
    c = np.array([float(x) for x in coeffs])
    c = c / np.abs(c).max()
    if p.degree == 1:
        z = np.array([-c[1] / c[0]], dtype=complex)
        return z, backward_error(c, z), forward_error(c, z)
    init = np.roots(c).astype(complex)
    z, _ = aberth(c, init, tol, max_iter)
    res = backward_error(c, z)
    if not np.all(np.isfinite(z)) or res.max() > tol:
        # fall back on the companion eigenvalues
        res0 = backward_error(c, init)
        if res0.max() > tol:
            raise NonConvergence(max_iter, float(min(res.max(), res0.max())))
        z, res = init, res0
    err = forward_error(c, z)
    scale = np.maximum(np.abs(z), 1.0)
    if np.all(err <= accuracy * scale):
        return z, res, err
    # ill-conditioned: refine in fixed point with bits for the condition number
    cond = float(np.max(err / scale)) / EPS
    bits = 64 + int(math.log2(max(cond, 2.0))) + int(-math.log2(accuracy))
    for _ in range(4):
        z = refine_fixed(coeffs, z, bits)
        err = _fixed_errors(coeffs, z, bits)
        if np.all(err <= accuracy * np.maximum(np.abs(z), 1.0)):
            return z, backward_error(c, z), err
        bits *= 2
    raise NonConvergence(max_iter, float(np.max(err)))


def find_roots(
    p: IntPoly | Sequence[int], tol: float = 1e-12, max_iter: int = 200, accuracy: float = 1e-10
) -> RootSet:
    """All complex roots of an integer polynomial, with multiplicities.

    The polynomial is split exactly into square-free parts.  Each part is
    solved by Aberth-Ehrlich iteration seeded with companion-matrix
    eigenvalues, which are kept if the iteration fails.  Where the float
    roots cannot meet ``accuracy`` (relative to max(1, |z|)) because of
    ill-conditioning, they are refined with exact fixed-point evaluation.
    """
    p = p if isinstance(p, IntPoly) else IntPoly(p)
    if p.degree < 1:
        raise ValueError("polynomial must have degree >= 1")
    roots, res, err, mult = [], [], [], []
    v = p.valuation()
    roots += [0j] * v
    res += [0.0] * v
    err += [0.0] * v
    mult += [v] * v
    core = p.shift(-v)
    if core.degree >= 1:
        for i, f in enumerate(squarefree_factors(core)):
            if f.degree < 1:
                continue
            z, r, e = _roots_squarefree(f, tol, max_iter, accuracy)
            for _ in range(i + 1):
                roots += list(z)
                res += list(r)
                err += list(e)
                mult += [i + 1] * len(z)
    order = np.lexsort((np.angle(roots), np.abs(roots)))
    return RootSet(
        p,
        np.array(roots, dtype=complex)[order],
        np.array(res, dtype=float)[order],
        np.array(mult, dtype=int)[order],
        np.array(err, dtype=float)[order],
    )


# ---------------------------------------------------------------------------
# accurate evaluation on a set of points


def evaluate(p: IntPoly, z: np.ndarray, rel: float = 1e-12) -> tuple[np.ndarray, np.ndarray]:
    """Values of p at z with absolute error bounds.

    Points where the float Horner bound exceeds ``rel`` times the value are
    re-evaluated exactly in fixed point, with more bits until the bound
    meets ``rel`` or 1024 bits are reached.
    """
    z = np.asarray(z, dtype=complex)
    if p.is_zero():
        return np.zeros(z.shape, dtype=complex), np.zeros(z.shape)
    coeffs = np.array([float(a) for a in reversed(p.coeffs)])
    v, _ = _horner(coeffs, z)
    s, _ = _horner(np.abs(coeffs), np.abs(z).astype(complex))
    s = np.abs(s)
    err = 2 * (p.degree + 1) * EPS * s
    bad = np.nonzero(err > rel * np.abs(v))[0]
    bits = 128
    icoeffs = list(reversed(p.coeffs))
    while len(bad) and bits <= 1024:
        zr, zi = _to_fixed(z[bad], bits)
        pr, pi, _, _ = _fixed_eval(icoeffs, zr, zi, bits, derivative=False)
        v[bad] = _from_fixed(pr, pi, bits)
        # per-step truncation plus the rounding of z (|p'(z)| <= degree * s / |z|)
        dz = math.ldexp(1.0, 1 - bits)
        err[bad] = (p.degree + 1) * math.ldexp(2.0, -bits) * (s[bad] + 1) + p.degree * s[bad] * dz / np.maximum(
            np.abs(z[bad]), dz
        )
        err[bad] += EPS * np.abs(v[bad])  # rounding of the result to a float
        bad = bad[err[bad] > rel * np.abs(v[bad])]
        bits *= 2
    return v, err


# ---------------------------------------------------------------------------
# annulus containment


@dataclass
class AnnulusReport:
    label: str
    degree: int
    min_modulus: float
    max_modulus: float
    inner_bound: float
    outer_bound: float
    n: int | None = None
    passed: bool = field(init=False)

    def __post_init__(self):
        self.passed = self.inner_bound < self.min_modulus <= self.max_modulus < self.outer_bound

    def to_json(self) -> dict:
        return {
            "label": self.label,
            "n": self.n,
            "degree": self.degree,
            "min_modulus": self.min_modulus,
            "max_modulus": self.max_modulus,
            "inner_bound": self.inner_bound,
            "outer_bound": self.outer_bound,
            "pass": self.passed,
        }


def annulus_report(
    label: str, p: IntPoly, inner: float, outer: float, tol: float = 1e-12, n: int | None = None
) -> AnnulusReport:
    rs = find_roots(p, tol)
    return AnnulusReport(label, p.degree, rs.min_modulus, rs.max_modulus, inner, outer, n)


def annulus_check(family, n_max: int, inner: float, outer: float, tol: float = 1e-12) -> list[AnnulusReport]:
    """Root annulus of the plain and tilde members of a family for 2 <= n <= n_max.

    Constant members (F_2) are skipped.
    """
    from .families import Family, family_poly

    family = Family.parse(family) if isinstance(family, str) else family
    if n_max < 2:
        raise ValueError("n_max must be >= 2")
    out = []
    for n in range(2, n_max + 1):
        for fam in (family.base, family.base.tilde):
            p = family_poly(fam, n)
            if p.degree >= 1:
                out.append(annulus_report(f"{fam.value}{n}", p, inner, outer, tol, n))
    return out


def tightness_trend(reports: Sequence[AnnulusReport]) -> list[tuple[str, float, float]]:
    """(label, min modulus, gap to the inner bound) in input order."""
    return [(r.label, r.min_modulus, r.min_modulus - r.inner_bound) for r in reports]


# ---------------------------------------------------------------------------
# Rouché margins


def _abs_sum(p: IntPoly, r: float, weighted: bool = False) -> float:
    return math.fsum(abs(c) * (k if weighted else 1) * r**k for k, c in enumerate(p.coeffs))


def rouche_margin(
    dominant: IntPoly,
    ratio_num: IntPoly,
    ratio_den: IntPoly,
    power: int,
    radius: float,
    samples: int = 4096,
    safety: bool = False,
) -> float:
    """min over |q| = radius of |dominant(q)| - radius**power |num(q)/den(q)|.

    Sampled at ``samples`` equispaced points starting at q = radius, with
    values evaluated to a relative accuracy of 1e-12 (exactly where floats
    do not suffice).  With ``safety`` the result is lowered by a Lipschitz
    estimate of the sampled function times half the sample spacing.
    """
    if samples < 8:
        raise ValueError("samples must be >= 8")
    theta = 2 * np.pi * np.arange(samples) / samples
    z = radius * np.exp(1j * theta)
    d, derr = evaluate(ratio_den, z)
    if not np.all(np.abs(d) > 8 * derr):
        raise DenominatorVanishes(f"denominator cannot be separated from zero on |q| = {radius}")
    n, _ = evaluate(ratio_num, z)
    dom, _ = evaluate(dominant, z)
    g = np.abs(dom) - radius**power * np.abs(n / d)
    margin = float(g.min())
    if safety:
        # |d/dtheta dom(r e^{it})| <= sum k |dom_k| r^k; the same bound is useless for
        # N/D, so its angular derivative is sampled (with a factor 2 of slack)
        dn, _ = evaluate(ratio_num.derivative(), z)
        dd, _ = evaluate(ratio_den.derivative(), z)
        dratio = radius * np.abs(dn * d - n * dd) / np.abs(d) ** 2
        lip = _abs_sum(dominant, radius, True) + 2 * radius**power * float(dratio.max())
        margin -= lip * np.pi / samples
    return margin


def family_rouche_margin(family, n: int, radius: float, samples: int = 4096, safety: bool = False) -> float:
    """Margin for the step P_{n+2} = D P_n - q^k P_{n-2}, read as D - q^k P_{n-2}/P_n.

    Fibonacci: D = [3]_q, k = 2.  Pell: D = (4 choose 2)_q, k = 4.  Tilde
    families need n >= 4 since their index-1 member is not a polynomial.
    """
    from .families import GAUSS_4_2, QINT3, Family, family_poly

    family = Family.parse(family) if isinstance(family, str) else family
    if n < (4 if family.is_tilde else 2):
        raise ValueError("index too small for this family")
    dominant, power = (QINT3, 2) if family.base is Family.FIBONACCI else (GAUSS_4_2, 4)
    return rouche_margin(dominant, family_poly(family, n - 2), family_poly(family, n), power, radius, samples, safety)
