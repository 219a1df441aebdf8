"""Exact arithmetic in one formal variable q.

Dense integer polynomials, Laurent polynomials, reduced rational functions and
truncated Laurent series.  Everything is immutable; coefficients are Python
ints so nothing ever overflows.
"""

from __future__ import annotations

import math
import re
import sys
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import QRealsError


class ZeroDenominator(QRealsError, ZeroDivisionError):
    pass


def _strip(coeffs: Iterable[int]) -> tuple[int, ...]:
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


class IntPoly:
    """Polynomial with integer coefficients, ``coeffs[i]`` multiplies ``q**i``.

    The zero polynomial has an empty coefficient tuple.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int] = ()):
        object.__setattr__(self, "coeffs", _strip(int(c) for c in coeffs))

    def __setattr__(self, name, value):
        raise AttributeError("IntPoly is immutable")

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> IntPoly:
        if k < 0:
            raise ValueError("negative exponent in IntPoly.monomial")
        return cls([0] * k + [c])

    @classmethod
    def constant(cls, c: int) -> IntPoly:
        return cls([c])

    # -- basic queries --------------------------------------------------
    @property
    def degree(self) -> int:
        """Degree; -1 for the zero polynomial."""
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def valuation(self) -> int:
        """Exponent of the lowest nonzero term (0 for the zero polynomial)."""
        for i, c in enumerate(self.coeffs):
            if c:
                return i
        return 0

    @property
    def lead(self) -> int:
        return self.coeffs[-1] if self.coeffs else 0

    def __getitem__(self, i: int) -> int:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return 0

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __eq__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("IntPoly", self.coeffs))

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return format_poly(self)

    # -- ring operations --------------------------------------------------
    def __neg__(self):
        return IntPoly(-c for c in self.coeffs)

    def __add__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] += c
        return IntPoly(out)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, int):
            other = IntPoly([other])
        if not isinstance(other, IntPoly):
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, int):
            return IntPoly(c * other for c in self.coeffs)
        if not isinstance(other, IntPoly):
            return NotImplemented
        return poly_mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of IntPoly")
        result, base = IntPoly([1]), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __call__(self, x):
        """Horner evaluation; exact for int/Fraction arguments."""
        acc = 0 * x
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    # -- structural helpers ------------------------------------------------
    def shift(self, k: int) -> IntPoly:
        """Multiply by q**k (k >= 0) or divide exactly by q**-k."""
        if k >= 0:
            return IntPoly((0,) * k + self.coeffs) if self.coeffs else self
        if any(self.coeffs[: -k]):
            raise ValueError("shift would drop nonzero terms")
        return IntPoly(self.coeffs[-k:])

    def truncate(self, n: int) -> IntPoly:
        """Reduce modulo q**n."""
        return IntPoly(self.coeffs[:n])

    def mirror(self, degree: int | None = None) -> IntPoly:
        """q**d * p(1/q) with d = deg p unless given."""
        d = self.degree if degree is None else degree
        if d < self.degree:
            raise ValueError("mirror degree below polynomial degree")
        padded = list(self.coeffs) + [0] * (d + 1 - len(self.coeffs))
        return IntPoly(reversed(padded))

    def derivative(self) -> IntPoly:
        return IntPoly(i * c for i, c in enumerate(self.coeffs) if i)

    def content(self) -> int:
        """Gcd of the coefficients, carrying the sign of the leading one."""
        if not self.coeffs:
            return 0
        g = math.gcd(*self.coeffs)
        return -g if self.lead < 0 else g

    def primitive(self) -> IntPoly:
        g = self.content()
        return IntPoly(c // g for c in self.coeffs) if g else self

    def exact_div(self, other: IntPoly) -> IntPoly:
        """Quotient of an exact division over Z; raises if not exact."""
        q, r = divmod_exact(self, other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def to_json(self) -> dict:
        return {"low": 0, "coeffs": list(self.coeffs)}


Q = IntPoly([0, 1])
ONE = IntPoly([1])
ZERO = IntPoly()


def q_int_poly(n: int) -> IntPoly:
    """Euler's q-integer 1 + q + ... + q**(n-1) for n >= 0."""
    if n < 0:
        raise ValueError("use q_integer for negative n")
    return IntPoly([1] * n)


def poly_mul(a: IntPoly, b: IntPoly) -> IntPoly:
    if a.is_zero() or b.is_zero():
        return ZERO
    ac, bc = a.coeffs, b.coeffs
    out = [0] * (len(ac) + len(bc) - 1)
    for i, x in enumerate(ac):
        if x:
            for j, y in enumerate(bc):
                out[i + j] += x * y
    return IntPoly(out)


def divmod_exact(a: IntPoly, b: IntPoly) -> tuple[IntPoly, IntPoly]:
    """Division with remainder over Z.

    Raises ValueError when a quotient coefficient is not integral; callers use
    this only where the division is known to be exact (content removal, Yun).
    """
    if b.is_zero():
        raise ZeroDenominator("division by the zero polynomial")
    r = list(a.coeffs)
    db, lb = b.degree, b.lead
    if len(r) - 1 < db:
        return ZERO, a
    quot = [0] * (len(r) - db)
    for k in range(len(r) - 1 - db, -1, -1):
        c = r[k + db]
        if c == 0:
            continue
        if c % lb:
            raise ValueError("non-integral quotient in exact division")
        t = c // lb
        quot[k] = t
        for i, bc in enumerate(b.coeffs):
            r[k + i] -= t * bc
    return IntPoly(quot), IntPoly(r)


def pseudo_rem(a: IntPoly, b: IntPoly) -> IntPoly:
    """lc(b)**(deg a - deg b + 1) * a mod b, computed without fractions."""
    r = list(a.coeffs)
    db, lb = b.degree, b.lead
    while len(r) - 1 >= db and r:
        c = r[-1]
        shift = len(r) - 1 - db
        r = [x * lb for x in r]
        for i, bc in enumerate(b.coeffs):
            r[shift + i] -= c * bc
        while r and r[-1] == 0:
            r.pop()
    return IntPoly(r)


def poly_gcd(a: IntPoly, b: IntPoly) -> IntPoly:
    """Gcd over Z[q] by the primitive remainder sequence.

    The result has positive leading coefficient and carries the integer gcd of
    the contents.
    """
    if a.is_zero():
        return b * (1 if b.lead >= 0 else -1)
    if b.is_zero():
        return a * (1 if a.lead >= 0 else -1)
    c = math.gcd(a.content(), b.content())
    a, b = a.primitive(), b.primitive()
    if a.degree < b.degree:
        a, b = b, a
    while not b.is_zero():
        r = pseudo_rem(a, b)
        a, b = b, (r.primitive() if not r.is_zero() else r)
    g = a.primitive()
    if g.lead < 0:
        g = -g
    return g * c


def squarefree_factors(p: IntPoly) -> list[IntPoly]:
    """Yun's algorithm: ``p = c * prod(f[i] ** (i+1))`` with squarefree coprime f[i]."""
    p = p.primitive()
    if p.degree < 1:
        return []
    dp = p.derivative()
    a = poly_gcd(p, dp).primitive()
    b = p.exact_div(a)
    c = dp.exact_div(a)
    d = c - b.derivative()
    out = []
    while b.degree >= 1:
        g = poly_gcd(b, d).primitive()
        out.append(g)
        b = b.exact_div(g)
        c = d.exact_div(g)
        d = c - b.derivative()
    while out and out[-1].degree < 1:
        out.pop()
    return out


# ---------------------------------------------------------------------------
# Laurent polynomials


class LaurentPoly:
    """``q**low * poly`` with poly(0) != 0 (or the zero polynomial)."""

    __slots__ = ("low", "poly")

    def __init__(self, poly: IntPoly | Sequence[int], low: int = 0):
        if not isinstance(poly, IntPoly):
            poly = IntPoly(poly)
        v = poly.valuation()
        if poly.is_zero():
            low = 0
        elif v:
            poly = poly.shift(-v)
            low += v
        object.__setattr__(self, "poly", poly)
        object.__setattr__(self, "low", low)

    def __setattr__(self, name, value):
        raise AttributeError("LaurentPoly is immutable")

    @classmethod
    def monomial(cls, k: int, c: int = 1) -> LaurentPoly:
        return cls(IntPoly([c]), k)

    @classmethod
    def coerce(cls, x) -> LaurentPoly:
        if isinstance(x, LaurentPoly):
            return x
        if isinstance(x, IntPoly):
            return cls(x)
        if isinstance(x, int):
            return cls(IntPoly([x]))
        raise TypeError(f"cannot coerce {type(x).__name__} to LaurentPoly")

    def is_zero(self) -> bool:
        return self.poly.is_zero()

    @property
    def high(self) -> int:
        return self.low + self.poly.degree

    def __eq__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self.low == other.low and self.poly == other.poly

    def __hash__(self):
        return hash(("LaurentPoly", self.low, self.poly.coeffs))

    def __repr__(self):
        return f"LaurentPoly({list(self.poly.coeffs)}, low={self.low})"

    def __str__(self):
        return format_laurent(self.low, self.poly.coeffs)

    def __neg__(self):
        return LaurentPoly(-self.poly, self.low)

    def __add__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        if self.is_zero():
            return other
        if other.is_zero():
            return self
        low = min(self.low, other.low)
        return LaurentPoly(self.poly.shift(self.low - low) + other.poly.shift(other.low - low), low)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = LaurentPoly.coerce(other)
        except TypeError:
            return NotImplemented
        return LaurentPoly(self.poly * other.poly, self.low + other.low)

    __rmul__ = __mul__

    def __call__(self, x):
        return self.poly(x) * x ** self.low

    def substitute_inverse(self) -> LaurentPoly:
        """p(q) -> p(1/q)."""
        if self.is_zero():
            return self
        return LaurentPoly(self.poly.mirror(), -self.high)

    def to_rational(self) -> RationalFunction:
        if self.low >= 0:
            return RationalFunction(self.poly.shift(self.low), ONE)
        return RationalFunction(self.poly, IntPoly.monomial(-self.low))

    def to_json(self) -> dict:
        return {"low": self.low, "coeffs": list(self.poly.coeffs)}


def q_integer(n: int) -> LaurentPoly:
    """[n]_q for any integer n: 1+...+q^(n-1), or -q^n-...-q^-1 when n < 0."""
    if n >= 0:
        return LaurentPoly(q_int_poly(n))
    return LaurentPoly(IntPoly([-1] * (-n)), n)


def q_integer_inv(n: int) -> LaurentPoly:
    """[n]_{q^-1}."""
    return q_integer(n).substitute_inverse()


# ---------------------------------------------------------------------------
# Rational functions


class RationalFunction:
    """Reduced quotient num/den of integer polynomials.

    Normal form: no common factor (polynomial or integer), and the lowest
    nonzero coefficient of the denominator is positive.
    """

    __slots__ = ("num", "den")

    def __init__(self, num, den=ONE, *, _reduced: bool = False):
        num = num if isinstance(num, IntPoly) else IntPoly([num]) if isinstance(num, int) else IntPoly(num)
        den = den if isinstance(den, IntPoly) else IntPoly([den]) if isinstance(den, int) else IntPoly(den)
        if den.is_zero():
            raise ZeroDenominator("rational function with zero denominator")
        if not _reduced:
            num, den = _reduce(num, den)
        object.__setattr__(self, "num", num)
        object.__setattr__(self, "den", den)

    def __setattr__(self, name, value):
        raise AttributeError("RationalFunction is immutable")

    @classmethod
    def coerce(cls, x) -> RationalFunction:
        if isinstance(x, RationalFunction):
            return x
        if isinstance(x, LaurentPoly):
            return x.to_rational()
        if isinstance(x, (IntPoly, int)):
            return cls(x)
        raise TypeError(f"cannot coerce {type(x).__name__} to RationalFunction")

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def __eq__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self):
        return hash(("RationalFunction", self.num.coeffs, self.den.coeffs))

    def __repr__(self):
        return f"RationalFunction({list(self.num.coeffs)}, {list(self.den.coeffs)})"

    def __str__(self):
        return format_rational(self)

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _reduced=True)

    def __add__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __sub__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def reciprocal(self) -> RationalFunction:
        if self.num.is_zero():
            raise ZeroDenominator("reciprocal of zero")
        return RationalFunction(self.den, self.num)

    def __truediv__(self, other):
        try:
            other = RationalFunction.coerce(other)
        except TypeError:
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) * self.reciprocal()

    def __call__(self, x):
        if isinstance(x, int):
            x = Fraction(x)
        return self.num(x) / self.den(x)

    def at_one(self) -> Fraction:
        return Fraction(sum(self.num.coeffs), sum(self.den.coeffs))

    def substitute_inverse(self) -> RationalFunction:
        """f(q) -> f(1/q), exactly."""
        dn, dd = self.num.degree, self.den.degree
        if self.num.is_zero():
            return self
        num, den = self.num.mirror(), self.den.mirror()
        # N(1/q)/D(1/q) = rev(N) q^dd / (rev(D) q^dn)
        if dd >= dn:
            num = num.shift(dd - dn)
        else:
            den = den.shift(dn - dd)
        return RationalFunction(num, den)

    def to_json(self) -> dict:
        return {"num": list(self.num.coeffs), "den": list(self.den.coeffs)}


def _reduce(num: IntPoly, den: IntPoly) -> tuple[IntPoly, IntPoly]:
    if num.is_zero():
        return ZERO, ONE
    g = poly_gcd(num, den)
    if g.degree > 0 or abs(g.lead) != 1:
        num, den = num.exact_div(g), den.exact_div(g)
    if den[den.valuation()] < 0:
        num, den = -num, -den
    return num, den


def rational_simplify(num: IntPoly, den: IntPoly) -> RationalFunction:
    return RationalFunction(num, den)


# ---------------------------------------------------------------------------
# Truncated Laurent series


class TruncatedLaurentSeries:
    """``sum coeffs[i] q**(low+i)`` known modulo q**order, order = low + len(coeffs).

    Coefficients at exponents >= order are unknown, not zero.  Arithmetic
    propagates the smallest order that is still justified.
    """

    __slots__ = ("low", "coeffs")

    def __init__(self, low: int, coeffs: Sequence[int], order: int | None = None):
        coeffs = [int(c) for c in coeffs]
        if order is None:
            order = low + len(coeffs)
        if order < low + len(coeffs):
            coeffs = coeffs[: max(order - low, 0)]
        elif order > low + len(coeffs):
            coeffs = coeffs + [0] * (order - low - len(coeffs))
        i = 0
        while i < len(coeffs) and coeffs[i] == 0:
            i += 1
        low += i
        object.__setattr__(self, "low", min(low, order))
        object.__setattr__(self, "coeffs", tuple(coeffs[i:]))

    def __setattr__(self, name, value):
        raise AttributeError("TruncatedLaurentSeries is immutable")

    @property
    def order(self) -> int:
        return self.low + len(self.coeffs)

    @classmethod
    def from_poly(cls, p, order: int) -> TruncatedLaurentSeries:
        p = LaurentPoly.coerce(p)
        return cls(p.low, p.poly.coeffs, order)

    def coefficient(self, k: int) -> int:
        if k >= self.order:
            raise IndexError(f"coefficient of q^{k} is beyond the truncation order {self.order}")
        if k < self.low:
            return 0
        return self.coeffs[k - self.low]

    def coefficients(self, start: int, stop: int) -> list[int]:
        return [self.coefficient(k) for k in range(start, stop)]

    def truncate(self, order: int) -> TruncatedLaurentSeries:
        if order > self.order:
            raise ValueError("cannot extend a truncated series")
        return TruncatedLaurentSeries(self.low, self.coeffs, order)

    def __eq__(self, other):
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        return self.low == other.low and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("TLS", self.low, self.coeffs))

    def __repr__(self):
        return f"TruncatedLaurentSeries(low={self.low}, coeffs={list(self.coeffs)})"

    def __str__(self):
        body = format_laurent(self.low, self.coeffs)
        return f"{body} + O(q^{self.order})"

    def __neg__(self):
        return TruncatedLaurentSeries(self.low, [-c for c in self.coeffs], self.order)

    def _coerce(self, other):
        if isinstance(other, TruncatedLaurentSeries):
            return other
        if isinstance(other, (int, IntPoly, LaurentPoly)):
            p = LaurentPoly.coerce(other)
            # exact operands are known to any order
            return TruncatedLaurentSeries(p.low, p.poly.coeffs, max(self.order, p.high + 1))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        order = min(self.order, o.order) if isinstance(other, TruncatedLaurentSeries) else self.order
        low = min(self.low, o.low, order)
        out = [0] * (order - low)
        for s in (self, o):
            for i, c in enumerate(s.coeffs):
                k = s.low + i - low
                if k < len(out):
                    out[k] += c
        return TruncatedLaurentSeries(low, out, order)

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, TruncatedLaurentSeries):
            return self + (-other)
        if isinstance(other, (int, IntPoly, LaurentPoly)):
            return self + (-LaurentPoly.coerce(other))
        return NotImplemented

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, IntPoly, LaurentPoly)):
            p = LaurentPoly.coerce(other)
            if p.is_zero():
                return TruncatedLaurentSeries(self.order, [], self.order)
            order = self.order + p.low
            prod = _conv(self.coeffs, p.poly.coeffs, order - self.low - p.low)
            return TruncatedLaurentSeries(self.low + p.low, prod, order)
        if not isinstance(other, TruncatedLaurentSeries):
            return NotImplemented
        order = min(self.low + other.order, other.low + self.order)
        low = self.low + other.low
        prod = _conv(self.coeffs, other.coeffs, order - low)
        return TruncatedLaurentSeries(low, prod, order)

    __rmul__ = __mul__

    def reciprocal(self) -> TruncatedLaurentSeries:
        """1/s; needs the leading coefficient to be a unit (+-1)."""
        if not self.coeffs:
            raise ZeroDenominator("reciprocal of a series with no known nonzero term")
        c0 = self.coeffs[0]
        if c0 not in (1, -1):
            raise ValueError("leading coefficient is not a unit; reciprocal leaves Z[[q]]")
        n = len(self.coeffs)
        inv = [0] * n
        inv[0] = c0
        for k in range(1, n):
            s = 0
            for j in range(1, k + 1):
                s += self.coeffs[j] * inv[k - j]
            inv[k] = -s * c0
        return TruncatedLaurentSeries(-self.low, inv, -self.low + n)

    def __truediv__(self, other):
        if isinstance(other, TruncatedLaurentSeries):
            return self * other.reciprocal()
        if not isinstance(other, (int, IntPoly, LaurentPoly)):
            return NotImplemented
        p = LaurentPoly.coerce(other)
        n = len(self.coeffs)
        inv = TruncatedLaurentSeries(p.low, p.poly.coeffs[:n], p.low + n).reciprocal()
        return self * inv

    def __call__(self, z):
        """Evaluate the known part at a numeric point."""
        return sum(c * z ** (self.low + i) for i, c in enumerate(self.coeffs))

    def to_json(self) -> dict:
        return {"low": self.low, "coeffs": list(self.coeffs), "order": self.order}


def _conv(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of two coefficient lists."""
    out = [0] * max(n, 0)
    for i, x in enumerate(a[:n]):
        if x:
            for j, y in enumerate(b[: n - i]):
                out[i + j] += x * y
    return out


def series_div(num: Sequence[int], den: Sequence[int], n: int) -> list[int]:
    """First n Taylor coefficients of num/den, den[0] = +-1."""
    d0 = den[0]
    if d0 not in (1, -1):
        raise ValueError("constant term of the denominator must be +-1")
    out = [0] * n
    dl = len(den)
    for k in range(n):
        s = num[k] if k < len(num) else 0
        for j in range(1, min(k, dl - 1) + 1):
            s -= den[j] * out[k - j]
        out[k] = s * d0
    return out


def taylor_expand(f: RationalFunction, order: int) -> TruncatedLaurentSeries:
    """Expansion of f at q = 0 modulo q**order (a Laurent series if den(0) == 0)."""
    if order < 1:
        raise ValueError("order must be >= 1")
    if f.is_zero():
        return TruncatedLaurentSeries(order, [], order)
    vd = f.den.valuation()
    vn = f.num.valuation()
    num = f.num.shift(-vn)
    den = f.den.shift(-vd)
    low = vn - vd
    n = order - low
    if n <= 0:
        return TruncatedLaurentSeries(order, [], order)
    d0 = den.coeffs[0]
    if d0 in (1, -1):
        coeffs = series_div(num.coeffs, den.coeffs, n)
    else:
        coeffs = _series_div_fraction(num.coeffs, den.coeffs, n)
    return TruncatedLaurentSeries(low, coeffs, order)


def _series_div_fraction(num, den, n):
    out = []
    for k in range(n):
        s = Fraction(num[k] if k < len(num) else 0)
        for j in range(1, min(k, len(den) - 1) + 1):
            s -= den[j] * out[k - j]
        out.append(s / den[0])
    if any(c.denominator != 1 for c in out):
        raise ValueError("expansion has non-integer coefficients")
    return [int(c) for c in out]


def poly_eval_complex(p: IntPoly, z: complex, precision: float = sys.float_info.epsilon) -> tuple[complex, float]:
    """Horner evaluation in floating point with an a-priori error bound.

    Returns ``(value, bound)`` where ``bound = gamma_{2n} * sum |a_i| |z|^i``
    bounds the rounding error of the evaluation.
    """
    z = complex(z)
    acc = 0j
    for c in reversed(p.coeffs):
        acc = acc * z + c
    n = max(p.degree, 1)
    u = 2 * n * precision
    gamma = u / (1 - u) if u < 1 else math.inf
    r = abs(z)
    mag = 0.0
    for c in reversed(p.coeffs):
        mag = mag * r + abs(float(c))
    # conversion of the integer coefficients to floats
    mag_bound = gamma * mag + precision * mag
    return acc, mag_bound


# ---------------------------------------------------------------------------
# Text and JSON forms


def _fmt_term(c: int, e: int, first: bool, explicit: bool) -> str:
    sign = "-" if c < 0 else ("" if first else "+")
    a = abs(c)
    if e == 0:
        body = str(a)
    else:
        var = "q" if e == 1 else f"q^{e}"
        if a == 1:
            body = var
        else:
            body = f"{a}*{var}" if explicit else f"{a}{var}"
    if explicit and not first:
        return f" {'-' if c < 0 else '+'} {body}"
    return sign + body


def format_laurent(low: int, coeffs: Sequence[int], explicit: bool = False, descending: bool = False) -> str:
    terms = []
    order = range(len(coeffs) - 1, -1, -1) if descending else range(len(coeffs))
    for i in order:
        if coeffs[i]:
            terms.append(_fmt_term(coeffs[i], low + i, not terms, explicit))
    return "".join(terms) if terms else "0"


def format_poly(p: IntPoly, explicit: bool = False, descending: bool = False) -> str:
    """``1+2q+q^2`` (compact), ``1 + 2*q + q^2`` (explicit) or ``q^2+2q+1`` (descending)."""
    return format_laurent(0, p.coeffs, explicit, descending)


def format_rational(f: RationalFunction) -> str:
    if f.den == ONE:
        return format_poly(f.num)
    num = format_poly(f.num)
    if len([c for c in f.num.coeffs if c]) > 1:
        num = f"({num})"
    den = format_poly(f.den)
    if len([c for c in f.den.coeffs if c]) > 1:
        den = f"({den})"
    return f"{num}/{den}"


_TERM = re.compile(r"([+-]?)\s*(\d*)\s*\*?\s*(q(?:\s*\^\s*\(?\s*(-?\d+)\s*\)?)?)?")


def parse_laurent(text: str) -> LaurentPoly:
    """Parse ``c0 + c1*q + c2*q^2 + ...`` (``*`` optional, negative exponents allowed)."""
    s = text.replace(" ", "")
    if not s:
        raise ValueError("empty polynomial text")
    pos, terms = 0, {}
    while pos < len(s):
        m = _TERM.match(s, pos)
        if not m or m.end() == pos or (not m.group(2) and not m.group(3)):
            raise ValueError(f"cannot parse polynomial near {s[pos:]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        if m.group(3):
            e = int(m.group(4)) if m.group(4) is not None else 1
        else:
            e = 0
        terms[e] = terms.get(e, 0) + sign * coef
        pos = m.end()
    low = min(terms)
    coeffs = [0] * (max(terms) - low + 1)
    for e, c in terms.items():
        coeffs[e - low] = c
    return LaurentPoly(IntPoly(coeffs), low)


def parse_poly(text: str) -> IntPoly:
    lp = parse_laurent(text)
    if lp.low < 0:
        raise ValueError("negative exponent in an ordinary polynomial")
    return lp.poly.shift(lp.low)


def poly_from_json(obj: dict) -> LaurentPoly:
    return LaurentPoly(IntPoly(obj["coeffs"]), int(obj.get("low", 0)))
