"""q-deformed rationals and reals.

Three independent constructions of ``[r/s]_q`` (generator recursion, the
q-deformed regular continued fraction, the q-deformed Hirzebruch-Jung
continued fraction), the q-matrices T_q and S_q, and the stabilization engine
that turns a continued fraction into the power series ``[x]_q``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence, Union

from .cf import ContinuedFraction, Kind, MalformedExpansion, mobius_cf, regular_to_hj
from .errors import QRealsError
from .exactalg import (
    ONE,
    ZERO,
    IntPoly,
    LaurentPoly,
    RationalFunction,
    TruncatedLaurentSeries,
    ZeroDenominator,
    poly_gcd,
    q_integer,
    q_integer_inv,
    series_div,
    taylor_expand,
)


class ZeroInverse(QRealsError, ZeroDivisionError):
    pass


class StabilizationNotReached(QRealsError, RuntimeError):
    def __init__(self, max_depth: int, stable_prefix: int, order: int):
        self.max_depth = max_depth
        self.stable_prefix = stable_prefix
        self.order = order
        super().__init__(
            f"coefficients did not stabilize within {max_depth} approximants "
            f"(only {stable_prefix} of {order} agreed)"
        )


class DegenerateQuadratic(QRealsError, ValueError):
    pass


# ---------------------------------------------------------------------------
# q-rationals


@dataclass(frozen=True)
class QRational:
    """``[r/s]_q`` together with the rational it deforms (s > 0)."""

    value: RationalFunction
    r: int
    s: int

    @property
    def x(self) -> Fraction:
        return Fraction(self.r, self.s)

    @property
    def num(self) -> IntPoly:
        return self.value.num

    @property
    def den(self) -> IntPoly:
        return self.value.den

    def __str__(self):
        return str(self.value)

    def to_json(self) -> dict:
        return {"r": self.r, "s": self.s, **self.value.to_json(), "text": str(self.value)}


def _qrational(value: RationalFunction, x: Fraction) -> QRational:
    return QRational(value, x.numerator, x.denominator)


# ---------------------------------------------------------------------------
# q-matrices


@dataclass(frozen=True)
class QMatrix:
    """2x2 matrix over Laurent polynomials acting by fractional-linear maps."""

    a: LaurentPoly
    b: LaurentPoly
    c: LaurentPoly
    d: LaurentPoly

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, LaurentPoly.coerce(getattr(self, name)))

    def __matmul__(self, other: QMatrix) -> QMatrix:
        return QMatrix(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __pow__(self, n: int) -> QMatrix:
        if n < 0:
            raise ValueError("negative matrix power")
        out = IDENTITY
        for _ in range(n):
            out = out @ self
        return out

    def det(self) -> LaurentPoly:
        return self.a * self.d - self.b * self.c

    def scalar(self) -> LaurentPoly | None:
        """The scalar s if the matrix equals s*Id, else None."""
        if self.b.is_zero() and self.c.is_zero() and self.a == self.d:
            return self.a
        return None

    def at_one(self) -> tuple[int, int, int, int]:
        return tuple(int(e(1)) for e in (self.a, self.b, self.c, self.d))

    def apply(self, x):
        """Act on a RationalFunction, a TruncatedLaurentSeries, a QRational or a QRealSeries."""
        if isinstance(x, QRational):
            a, b, c, d = self.at_one()
            y = x.x
            if c * y + d == 0:
                raise ZeroInverse("image is the point at infinity")
            return _qrational(self.apply(x.value), Fraction(a * y + b) / (c * y + d))
        if isinstance(x, QRealSeries):
            series = self.apply(x.series)
            cf = mobius_cf(x.cf, *self.at_one()) if x.cf is not None else None
            return QRealSeries(series, cf, min(x.stabilized_upto, series.order), x.depth)
        if isinstance(x, TruncatedLaurentSeries):
            num = x * self.a + self.b
            den = x * self.c + self.d
            return num / den
        x = RationalFunction.coerce(x)
        num = self.a.to_rational() * x + self.b.to_rational()
        den = self.c.to_rational() * x + self.d.to_rational()
        if den.is_zero():
            raise ZeroInverse("image is the point at infinity")
        return num / den

    def __str__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


IDENTITY = QMatrix(LaurentPoly.coerce(1), LaurentPoly.coerce(0), LaurentPoly.coerce(0), LaurentPoly.coerce(1))
_q = LaurentPoly.monomial(1)
T_Q = QMatrix(_q, LaurentPoly.coerce(1), LaurentPoly.coerce(0), LaurentPoly.coerce(1))
S_Q = QMatrix(LaurentPoly.coerce(0), LaurentPoly.coerce(-1), _q, LaurentPoly.coerce(0))
T_Q_INV = QMatrix(LaurentPoly.monomial(-1), LaurentPoly.monomial(-1, -1), LaurentPoly.coerce(0), LaurentPoly.coerce(1))

_GENERATORS = {"T": T_Q, "S": S_Q, "T-1": T_Q_INV, "t": T_Q_INV, "Ti": T_Q_INV}


def q_generators() -> tuple[QMatrix, QMatrix]:
    return T_Q, S_Q


def word_matrix(word: Sequence[str]) -> QMatrix:
    m = IDENTITY
    for g in word:
        try:
            m = m @ _GENERATORS[g]
        except KeyError:
            raise ValueError(f"unknown generator {g!r}; use T, S or T-1") from None
    return m


def apply_word(word: Sequence[str], x):
    """Apply the product of generators (leftmost outermost) to x."""
    for g in reversed(list(word)):
        x = word_matrix([g]).apply(x)
    return x


def cf_word(r: int, s: int) -> list[str]:
    """Generator word w with w(0) = r/s, built from the continued fraction of r/s."""
    if s <= 0:
        raise ValueError("denominator must be positive")
    word: list[str] = []
    x = Fraction(r, s)
    while True:
        a = math.floor(x)
        x -= a
        word.extend(["T"] * a if a >= 0 else ["T-1"] * (-a))
        if x == 0:
            return word
        word.append("S")
        x = -1 / x


def q_rational_recursive(r: int, s: int = 1) -> QRational:
    """[r/s]_q from [0]_q = 0 using only [x+1] = q[x]+1 and [-1/x] = -1/(q[x])."""
    if s <= 0:
        raise ValueError("denominator must be positive")
    if math.gcd(r, s) != 1:
        from .cf import NotCoprime

        raise NotCoprime(f"{r} and {s} are not coprime")
    value = RationalFunction(ZERO)
    q = RationalFunction(IntPoly([0, 1]))
    for g in reversed(cf_word(r, s)):
        if g == "T":
            value = q * value + 1
        elif g == "T-1":
            value = (value - 1) / q
        else:
            value = RationalFunction(-1) / (q * value)
    return QRational(value, r, s)


def q_rational(x: Fraction | int) -> QRational:
    x = Fraction(x)
    return q_rational_recursive(x.numerator, x.denominator)


def q_cf_regular_eval(cf: ContinuedFraction) -> QRational:
    """The q-deformed regular continued fraction of a finite even-length expansion."""
    if cf.kind is not Kind.REGULAR or not cf.is_finite:
        raise MalformedExpansion("expected a finite regular continued fraction")
    a = cf.prefix
    n = len(a)
    # levels alternate [a]_q + q^a / (...) and [a]_{q^-1} + q^-a / (...)
    value = _level_head(a[n - 1], n - 1)
    for i in range(n - 2, -1, -1):
        head = _level_head(a[i], i)
        num = LaurentPoly.monomial(a[i] if i % 2 == 0 else -a[i]).to_rational()
        value = head + num / value
    return _qrational(value, cf.value())


def _level_head(a: int, i: int) -> RationalFunction:
    return (q_integer(a) if i % 2 == 0 else q_integer_inv(a)).to_rational()


def q_cf_hj_eval(cf: ContinuedFraction) -> QRational:
    """The q-deformed Hirzebruch-Jung continued fraction of a finite expansion."""
    if cf.kind is not Kind.HJ or not cf.is_finite:
        raise MalformedExpansion("expected a finite Hirzebruch-Jung continued fraction")
    c = cf.prefix
    value = q_integer(c[-1]).to_rational()
    for ci in reversed(c[:-1]):
        value = q_integer(ci).to_rational() - LaurentPoly.monomial(ci - 1).to_rational() / value
    return _qrational(value, cf.value())


def q_negate(x: QRational) -> QRational:
    """[-x]_q = -[x]_{q^-1} / q."""
    value = -x.value.substitute_inverse() / RationalFunction(IntPoly([0, 1]))
    return QRational(value, -x.r, x.s)


def q_invert(x: QRational) -> QRational:
    """[1/x]_q = 1 / [x]_{q^-1}."""
    if x.r == 0:
        raise ZeroInverse("cannot invert [0]_q")
    try:
        value = x.value.substitute_inverse().reciprocal()
    except ZeroDenominator as exc:
        raise ZeroInverse(str(exc)) from exc
    r, s = (x.s, x.r) if x.r > 0 else (-x.s, -x.r)
    return QRational(value, r, s)


# ---------------------------------------------------------------------------
# q-reals


@dataclass(frozen=True)
class QRealSeries:
    """Stabilized expansion of [x]_q.

    Coefficients below ``stabilized_upto`` are final; ``depth`` counts the
    approximants consumed.
    """

    series: TruncatedLaurentSeries
    cf: ContinuedFraction | None
    stabilized_upto: int
    depth: int = 0

    @property
    def order(self) -> int:
        return self.series.order

    @property
    def low(self) -> int:
        return self.series.low

    def coefficients(self) -> list[int]:
        """Coefficients from exponent min(low, 0) up to order - 1."""
        start = min(self.series.low, 0)
        return self.series.coefficients(start, self.series.order)

    def __str__(self):
        return str(self.series)

    def to_json(self) -> dict:
        start = min(self.series.low, 0)
        return {
            "cf": str(self.cf) if self.cf is not None else None,
            "order": self.series.order,
            "low": start,
            "coeffs": self.coefficients(),
            "stabilized_upto": self.stabilized_upto,
            "depth": self.depth,
        }


def stabilize(
    approximants: Iterable[RationalFunction | QRational],
    order: int,
    *,
    confirmations: int = 3,
    max_depth: int = 400,
) -> tuple[TruncatedLaurentSeries, int]:
    """Common Taylor prefix of a sequence of rational functions.

    Accepts once ``confirmations`` consecutive expansions agree modulo
    q**order and one more approximant confirms it.  Returns the series and
    the number of approximants consumed.
    """
    history: list[TruncatedLaurentSeries] = []
    need = confirmations + 1
    for depth, f in enumerate(approximants, start=1):
        if depth > max_depth:
            break
        if isinstance(f, QRational):
            f = f.value
        s = taylor_expand(f, order)
        history.append(s)
        history = history[-need:]
        if len(history) == need and all(h == history[0] for h in history):
            return history[0], depth
    raise StabilizationNotReached(max_depth, _agreeing_prefix(history, order), order)


def _agreeing_prefix(history: list[TruncatedLaurentSeries], order: int) -> int:
    if not history:
        return 0
    lo = min(min(h.low for h in history), 0)
    k = lo
    while k < order and len({h.coefficient(k) for h in history}) == 1:
        k += 1
    return k - lo


def _mul_qint(p: list[int], c: int, m: int) -> list[int]:
    """(1 + q + ... + q^(c-1)) * p modulo q^m, c >= 1."""
    prefix = [0]
    for x in p:
        prefix.append(prefix[-1] + x)
    return [prefix[k + 1] - prefix[max(0, k - c + 1)] for k in range(m)]


def _sub_shifted(a: list[int], b: list[int], k: int, m: int) -> list[int]:
    """a - q^k b modulo q^m."""
    out = list(a)
    for i in range(max(0, m - k)):
        out[i + k] -= b[i]
    return out


def q_real_series(
    cf: ContinuedFraction,
    order: int,
    *,
    confirmations: int = 3,
    max_depth: int = 400,
) -> QRealSeries:
    """[x]_q modulo q**order from the Hirzebruch-Jung convergents of x.

    The q-convergents R_n/S_n obey R_{n+1} = [c_{n+1}]_q R_n - q^(c_n - 1) R_{n-1}
    (same for S), so they can be carried modulo q**order throughout.
    Stabilization is accepted when ``confirmations`` consecutive convergents
    and one deeper one agree.  For x <= 0 the series is computed for a
    translate x + k and brought back with [x - 1]_q = ([x]_q - 1)/q.
    """
    if order < 1:
        raise ValueError("order must be >= 1")
    if cf.is_finite:
        exact = (q_cf_regular_eval if cf.kind is Kind.REGULAR else q_cf_hj_eval)(cf)
        return QRealSeries(taylor_expand(exact.value, order), cf, order, len(cf.prefix))
    hj = cf if cf.kind is Kind.HJ else regular_to_hj(cf)
    coeffs = hj.coefficients()
    c1 = next(coeffs)
    shift = max(0, 1 - c1)
    m = order + shift
    c_prev = c1 + shift
    # (R_{n-1}, S_{n-1}) and (R_n, S_n) truncated to m coefficients
    r0, s0 = [1] + [0] * (m - 1), [0] * m
    r1, s1 = _mul_qint([1] + [0] * (m - 1), c_prev, m), [1] + [0] * (m - 1)
    e = c_prev - 1
    need = confirmations + 1
    history: list[tuple[int, ...]] = []
    depth = 1
    while True:
        # consecutive convergents first differ at q^e, so earlier ones cannot agree mod q^m
        if e >= m - 1:
            expansion = tuple(series_div(r1, s1, m))
            history.append(expansion)
            history = history[-need:]
            if len(history) == need and all(h == history[0] for h in history):
                break
        if depth >= max_depth:
            stable = 0
            if history:
                while stable < m and len({h[stable] for h in history}) == 1:
                    stable += 1
            raise StabilizationNotReached(max_depth, max(stable - shift, 0), order)
        c = next(coeffs)
        r0, r1 = r1, _sub_shifted(_mul_qint(r1, c, m), r0, c_prev - 1, m)
        s0, s1 = s1, _sub_shifted(_mul_qint(s1, c, m), s0, c_prev - 1, m)
        e += c - 1
        c_prev = c
        depth += 1
    series = TruncatedLaurentSeries(0, history[0], m)
    for _ in range(shift):
        series = (series - 1) / IntPoly([0, 1])
    return QRealSeries(series, cf, order, depth)


# ---------------------------------------------------------------------------
# Functional equation of periodic q-reals


@dataclass(frozen=True)
class FunctionalEquation:
    """A X^2 + B X + C = 0 with coprime integer polynomials A, B, C."""

    a: IntPoly
    b: IntPoly
    c: IntPoly

    def discriminant(self) -> IntPoly:
        return self.b * self.b - self.a * self.c * 4

    def residual(self, x: TruncatedLaurentSeries) -> TruncatedLaurentSeries:
        return x * x * self.a + x * self.b + self.c

    def __iter__(self):
        return iter((self.a, self.b, self.c))

    def __str__(self):
        from .exactalg import format_poly

        return f"({format_poly(self.a)})X^2 + ({format_poly(self.b)})X + ({format_poly(self.c)}) = 0"

    def to_json(self) -> dict:
        return {"A": list(self.a.coeffs), "B": list(self.b.coeffs), "C": list(self.c.coeffs)}


def _regular_level(a: int, odd_level: bool) -> QMatrix:
    """Y -> [a]_q + q^a / Y at odd levels, [a]_{q^-1} + q^-a / Y at even levels."""
    if odd_level:
        return QMatrix(q_integer(a), LaurentPoly.monomial(a), LaurentPoly.coerce(1), LaurentPoly.coerce(0))
    return QMatrix(q_integer_inv(a), LaurentPoly.monomial(-a), LaurentPoly.coerce(1), LaurentPoly.coerce(0))


def _block_matrix(block: Sequence[int]) -> QMatrix:
    m = IDENTITY
    for i, a in enumerate(block):
        m = m @ _regular_level(a, i % 2 == 0)
    return m


def functional_equation(cf: ContinuedFraction) -> FunctionalEquation:
    """Quadratic equation satisfied by [x]_q for an eventually periodic x."""
    if cf.is_finite:
        raise DegenerateQuadratic("finite expansion has no periodic part")
    reg = cf if cf.kind is Kind.REGULAR else _to_regular(cf)
    prefix, period = list(reg.prefix), list(reg.period)
    if len(period) % 2:
        period = period * 2
    if len(prefix) % 2:
        prefix.append(period[0])
        period = period[1:] + period[:1]
    per = _block_matrix(period)
    # fixed point: y = (p11 y + p12)/(p21 y + p22)
    A, B, C = per.c, per.d - per.a, -per.b
    if prefix:
        m = _block_matrix(prefix)
        # x = m(y)  <=>  y = (m22 x - m12)/(m11 - m21 x)
        a, b, c, d = m.a, m.b, m.c, m.d
        A, B, C = (
            A * d * d - B * d * c + C * c * c,
            A * d * b * (-2) + B * (d * a + b * c) - C * a * c * 2,
            A * b * b - B * b * a + C * a * a,
        )
    if A.is_zero():
        raise DegenerateQuadratic("leading coefficient vanishes; the fixed point is rational")
    low = min(p.low for p in (A, B, C) if not p.is_zero())
    polys = [p.poly.shift(p.low - low) if not p.is_zero() else ZERO for p in (A, B, C)]
    g = poly_gcd(poly_gcd(polys[0], polys[1]), polys[2])
    polys = [p.exact_div(g) for p in polys]
    if polys[0][polys[0].valuation()] < 0:
        polys = [-p for p in polys]
    return FunctionalEquation(*polys)


def _to_regular(cf: ContinuedFraction) -> ContinuedFraction:
    from .cf import hj_to_regular

    return hj_to_regular(cf)


def series_from_equation(eq: FunctionalEquation, order: int) -> TruncatedLaurentSeries:
    """Power-series root of eq, coefficient by coefficient.

    Needs A(0) = 0 and B(0) != 0 (true for the q-reals x > 1 tested here);
    serves as an independent check on the stabilization engine.
    """
    a, b, c = eq.a, eq.b, eq.c
    if a[0] != 0 or b[0] == 0:
        raise ValueError("equation is not in the solvable normal form")
    if c[0] % b[0]:
        raise ValueError("non-integral constant term")
    x = [-c[0] // b[0]]
    for k in range(1, order):
        x.append(0)
        # coefficient of q^k in A X^2 + B X + C with current unknown x_k = 0
        total = c[k]
        for i in range(k + 1):
            total += b[i] * x[k - i]
        sq = _conv(x, x, k + 1)
        for i in range(1, k + 1):
            total += a[i] * sq[k - i]
        if total % b[0]:
            raise ValueError("non-integral coefficient")
        x[k] = -total // b[0]
    return TruncatedLaurentSeries(0, x, order)


def _conv(a, b, n):
    out = [0] * n
    for i, u in enumerate(a[:n]):
        if u:
            for j, v in enumerate(b[: n - i]):
                out[i + j] += u * v
    return out
