"""Regular and Hirzebruch-Jung continued fractions.

Finite expansions describe rationals; eventually periodic ones (a prefix plus
a repeating period) describe quadratic irrationals exactly.
"""

from __future__ import annotations

import itertools
import math
import re
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import QRealsError


class NotCoprime(QRealsError, ValueError):
    pass


class MalformedExpansion(QRealsError, ValueError):
    pass


class TruncationBeyondFinite(QRealsError, IndexError):
    pass


class Kind(str, Enum):
    REGULAR = "regular"
    HJ = "hj"


@dataclass(frozen=True)
class ContinuedFraction:
    """``[a1, a2, ...; (p1, ..., pk)]`` (regular) or ``[[c1, ...; (...)]]`` (HJ).

    The first coefficient may be any integer (negative values reach x < 0);
    later ones obey a >= 1 (regular) or c >= 2 (HJ).  Finite regular
    expansions are kept at even length.
    """

    kind: Kind
    prefix: tuple[int, ...]
    period: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", Kind(self.kind))
        object.__setattr__(self, "prefix", tuple(int(a) for a in self.prefix))
        object.__setattr__(self, "period", tuple(int(a) for a in self.period))
        floor = 1 if self.kind is Kind.REGULAR else 2
        coeffs = self.prefix + self.period
        if not coeffs:
            raise MalformedExpansion("empty continued fraction")
        rest = coeffs[1:] if self.prefix else coeffs
        if any(a < floor for a in rest):
            raise MalformedExpansion(f"{self.kind.value} coefficients after the first must be >= {floor}")
        if not self.prefix and self.period[0] < floor:
            raise MalformedExpansion("periodic part violates the coefficient bound")
        if self.kind is Kind.REGULAR and not self.period and len(self.prefix) % 2:
            raise MalformedExpansion("finite regular expansions must have even length")
        if self.kind is Kind.HJ and self.period and all(c == 2 for c in self.period):
            raise MalformedExpansion("a period of 2's converges to a rational")

    @classmethod
    def regular(cls, prefix: Sequence[int], period: Sequence[int] = ()) -> ContinuedFraction:
        """Build a regular expansion, normalizing finite ones to even length."""
        prefix, period = list(prefix), list(period)
        if not period:
            prefix = _even_length(prefix)
        return cls(Kind.REGULAR, tuple(prefix), tuple(period)).canonical()

    @classmethod
    def hj(cls, prefix: Sequence[int], period: Sequence[int] = ()) -> ContinuedFraction:
        return cls(Kind.HJ, tuple(prefix), tuple(period)).canonical()

    @property
    def is_finite(self) -> bool:
        return not self.period

    @property
    def is_periodic(self) -> bool:
        return bool(self.period)

    def canonical(self) -> ContinuedFraction:
        """Shortest period, with the prefix tail folded into the period."""
        if not self.period:
            return self
        period = list(_primitive_period(self.period))
        prefix = list(self.prefix)
        while prefix and prefix[-1] == period[-1]:
            prefix.pop()
            period = [period[-1]] + period[:-1]
        return ContinuedFraction(self.kind, tuple(prefix), tuple(period))

    def coefficients(self) -> Iterator[int]:
        """All coefficients in order (infinite for periodic expansions)."""
        yield from self.prefix
        if self.period:
            yield from itertools.cycle(self.period)

    def terms(self, n: int) -> list[int]:
        return list(itertools.islice(self.coefficients(), n))

    def __len__(self):
        if self.period:
            raise TypeError("periodic continued fraction has no length")
        return len(self.prefix)

    def value(self) -> Fraction:
        """Exact value of a finite expansion."""
        if self.period:
            raise ValueError("periodic expansion is irrational; use approx()")
        return evaluate(self.kind, self.prefix)

    def approx(self, depth: int = 80) -> float:
        if not self.period:
            return float(self.value())
        r, s = convergents(self, depth)[-1]
        return r / s

    def __str__(self):
        return format_cf(self)

    def to_json(self) -> dict:
        return {"kind": self.kind.value, "prefix": list(self.prefix), "period": list(self.period)}


def _even_length(coeffs: list[int]) -> list[int]:
    if len(coeffs) % 2 == 0:
        return coeffs
    last = coeffs[-1]
    if len(coeffs) > 1 and last == 1:
        return coeffs[:-2] + [coeffs[-2] + 1]
    return coeffs[:-1] + [last - 1, 1]


def _primitive_period(p: Sequence[int]) -> tuple[int, ...]:
    n = len(p)
    for d in range(1, n + 1):
        if n % d == 0 and tuple(p[:d]) * (n // d) == tuple(p):
            return tuple(p[:d])
    return tuple(p)


def evaluate(kind: Kind, coeffs: Sequence[int]) -> Fraction:
    sign = 1 if Kind(kind) is Kind.REGULAR else -1
    x = Fraction(coeffs[-1])
    for a in reversed(coeffs[:-1]):
        x = a + sign / x
    return x


# ---------------------------------------------------------------------------
# Expansions of rationals


def _check_coprime(r: int, s: int):
    if s <= 0:
        raise ValueError("denominator must be positive")
    if math.gcd(r, s) != 1:
        raise NotCoprime(f"{r} and {s} are not coprime")


def regular_cf_expand(r: int, s: int) -> ContinuedFraction:
    """Even-length regular expansion of r/s (Euclid)."""
    _check_coprime(r, s)
    coeffs = []
    while s:
        a, rem = divmod(r, s)
        coeffs.append(a)
        r, s = s, rem
    return ContinuedFraction(Kind.REGULAR, tuple(_even_length(coeffs)))


def hj_cf_expand(r: int, s: int) -> ContinuedFraction:
    """Hirzebruch-Jung expansion r/s = c1 - 1/(c2 - 1/(...)) by ceiling division."""
    _check_coprime(r, s)
    coeffs = []
    while True:
        c = -((-r) // s)
        coeffs.append(c)
        rem = c * s - r
        if rem == 0:
            break
        r, s = s, rem
    return ContinuedFraction(Kind.HJ, tuple(coeffs))


# ---------------------------------------------------------------------------
# Hirzebruch's formula


def _regular_block_to_hj(block: Sequence[int], first: bool) -> list[int]:
    """Even-length run of regular coefficients starting at an odd index."""
    out = []
    for i in range(0, len(block), 2):
        a_odd, a_even = block[i], block[i + 1]
        out.append(a_odd + (1 if first and i == 0 else 2))
        out.extend([2] * (a_even - 1))
    return out


def _align_regular(cf: ContinuedFraction) -> tuple[list[int], list[int]]:
    """Prefix and period of even length, the period starting at an odd index."""
    prefix, period = list(cf.prefix), list(cf.period)
    if len(period) % 2:
        period = period * 2
    if len(prefix) % 2:
        prefix.append(period[0])
        period = period[1:] + period[:1]
    if not prefix:
        prefix = list(period)
    return prefix, period


def regular_to_hj(cf: ContinuedFraction) -> ContinuedFraction:
    if cf.kind is not Kind.REGULAR:
        raise MalformedExpansion("expected a regular continued fraction")
    if cf.is_finite:
        return ContinuedFraction(Kind.HJ, tuple(_regular_block_to_hj(cf.prefix, True)))
    prefix, period = _align_regular(cf)
    return ContinuedFraction.hj(_regular_block_to_hj(prefix, True), _regular_block_to_hj(period, False))


def _hj_block_to_regular(block: Sequence[int], first: bool) -> list[int]:
    """Inverse of the block map; block starts with a non-2 entry (or is the head)."""
    out = []
    i = 0
    while i < len(block):
        c = block[i]
        out.append(c - (1 if first and i == 0 else 2))
        i += 1
        run = 0
        while i < len(block) and block[i] == 2:
            run += 1
            i += 1
        out.append(run + 1)
    return out


def hj_to_regular(cf: ContinuedFraction) -> ContinuedFraction:
    if cf.kind is not Kind.HJ:
        raise MalformedExpansion("expected a Hirzebruch-Jung continued fraction")
    if cf.is_finite:
        reg = _hj_block_to_regular(cf.prefix, True)
        if any(a < 1 for a in reg[1:]):
            raise MalformedExpansion(f"inconsistent 2-run structure in {cf}")
        return ContinuedFraction(Kind.REGULAR, tuple(reg))
    prefix, period = list(cf.prefix), list(cf.period)
    if not prefix:
        prefix = list(period)
    # rotate until the period opens with a non-2 coefficient
    while period[0] == 2:
        prefix.append(period[0])
        period = period[1:] + period[:1]
    reg_prefix = _hj_block_to_regular(prefix, True)
    reg_period = _hj_block_to_regular(period, False)
    if any(a < 1 for a in reg_prefix[1:] + reg_period):
        raise MalformedExpansion(f"inconsistent 2-run structure in {cf}")
    return ContinuedFraction.regular(reg_prefix, reg_period)


# ---------------------------------------------------------------------------
# Convergents


def convergents(cf: ContinuedFraction, n: int) -> list[tuple[int, int]]:
    """Values of the first n truncations as coprime (r_k, s_k) pairs."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if cf.is_finite and n > len(cf.prefix):
        raise TruncationBeyondFinite(f"expansion has only {len(cf.prefix)} coefficients")
    sign = 1 if cf.kind is Kind.REGULAR else -1
    p0, q0, p1, q1 = 1, 0, None, None
    out = []
    for k, a in enumerate(itertools.islice(cf.coefficients(), n)):
        if k == 0:
            p1, q1 = a, 1
        else:
            p0, q0, p1, q1 = p1, q1, a * p1 + sign * p0, a * q1 + sign * q0
        if q1 < 0:
            out.append((-p1, -q1))
        else:
            out.append((p1, q1))
    return out


# ---------------------------------------------------------------------------
# Text form

_CF_RE = re.compile(r"^\s*(hj:)?\s*(\[\[|\[)(.*?)(\]\]|\])\s*$")


def _ints(text: str) -> list[int]:
    text = text.strip()
    if not text:
        return []
    return [int(t) for t in text.split(",")]


def parse_cf(text: str) -> ContinuedFraction:
    """Parse ``[a1,a2,...;(p1,...)]``; ``hj:[...]`` or ``[[...]]`` for HJ.

    A rational ``r/s`` is also accepted and expanded regularly.
    """
    m = re.fullmatch(r"\s*(-?\d+)\s*/\s*(\d+)\s*", text)
    if m:
        r, s = int(m.group(1)), int(m.group(2))
        g = math.gcd(r, s)
        return regular_cf_expand(r // g, s // g)
    m = _CF_RE.match(text)
    if not m:
        raise MalformedExpansion(f"cannot parse continued fraction {text!r}")
    hj_prefix, opening, body, closing = m.groups()
    is_hj = bool(hj_prefix) or opening == "[["
    if (opening == "[[") != (closing == "]]"):
        raise MalformedExpansion(f"unbalanced brackets in {text!r}")
    body = body.replace(" ", "")
    period: list[int] = []
    pm = re.search(r"\(([^)]*)\)$", body)
    if pm:
        period = _ints(pm.group(1))
        body = body[: pm.start()]
        if not period:
            raise MalformedExpansion("empty period")
    body = body.rstrip(";")
    try:
        prefix = _ints(body)
    except ValueError as exc:
        raise MalformedExpansion(f"cannot parse continued fraction {text!r}") from exc
    if is_hj:
        return ContinuedFraction.hj(prefix, period)
    return ContinuedFraction.regular(prefix, period)


def format_cf(cf: ContinuedFraction) -> str:
    body = ",".join(map(str, cf.prefix))
    if cf.period:
        body += (";(" if body else "(") + ",".join(map(str, cf.period)) + ")"
    return f"[[{body}]]" if cf.kind is Kind.HJ else f"[{body}]"


def cf_from_json(obj: dict) -> ContinuedFraction:
    return ContinuedFraction(Kind(obj["kind"]), tuple(obj["prefix"]), tuple(obj.get("period", ())))


# ---------------------------------------------------------------------------
# Quadratic irrationals (P + sqrt(D)) / Q, used to move periodic expansions
# through Moebius maps exactly.


@dataclass(frozen=True)
class QuadraticIrrational:
    P: int
    D: int
    Q: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("zero denominator")
        r = math.isqrt(self.D) if self.D >= 0 else -1
        if self.D < 0 or r * r == self.D:
            raise ValueError("D must be a positive non-square")

    def __float__(self):
        return (self.P + math.sqrt(self.D)) / self.Q

    def floor(self) -> int:
        s = math.isqrt(self.D)
        if self.Q > 0:
            return (self.P + s) // self.Q
        return (-self.P - s - 1) // (-self.Q)

    @classmethod
    def from_cf(cls, cf: ContinuedFraction) -> QuadraticIrrational:
        if cf.is_finite:
            raise ValueError("finite expansion is rational")
        reg = cf if cf.kind is Kind.REGULAR else hj_to_regular(cf)
        # y = [period; period; ...] satisfies y = (p1 y + p0)/(q1 y + q0)
        p0, q0, p1, q1 = 1, 0, reg.period[0], 1
        for a in reg.period[1:]:
            p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        # q1 y^2 + (q0 - p1) y - p0 = 0, y > 1 is the + root
        b = q0 - p1
        y = cls(-b, b * b + 4 * q1 * p0, 2 * q1)
        m = _prefix_matrix(reg.prefix)
        return y.mobius(*m)

    def mobius(self, a: int, b: int, c: int, d: int) -> QuadraticIrrational:
        """(a x + b) / (c x + d), exactly."""
        P, D, Q = self.P, self.D, self.Q
        # x = (P + sqrt D)/Q ; numerator a(P + sqrt D) + bQ, denominator c(P + sqrt D) + dQ
        n0, n1 = a * P + b * Q, a
        d0, d1 = c * P + d * Q, c
        # multiply by the conjugate of the denominator
        num0 = n0 * d0 - n1 * d1 * D
        num1 = n1 * d0 - n0 * d1
        den = d0 * d0 - d1 * d1 * D
        if num1 == 0:
            raise ValueError("Moebius image is rational")
        if num1 < 0:
            num0, num1, den = -num0, -num1, -den
        g = math.gcd(math.gcd(num0, num1), den)
        num0, num1, den = num0 // g, num1 // g, den // g
        return QuadraticIrrational(num0, num1 * num1 * D, den)

    def to_cf(self, max_terms: int = 10_000) -> ContinuedFraction:
        P, D, Q = self.P, self.D, self.Q
        if (D - P * P) % Q:
            P, D, Q = P * abs(Q), D * Q * Q, Q * abs(Q)
        seen: dict[tuple[int, int], int] = {}
        coeffs = []
        while (P, Q) not in seen:
            if len(coeffs) > max_terms:
                raise MalformedExpansion("period not found")
            seen[(P, Q)] = len(coeffs)
            a = QuadraticIrrational(P, D, Q).floor()
            coeffs.append(a)
            P = a * Q - P
            Q = (D - P * P) // Q
        start = seen[(P, Q)]
        return ContinuedFraction.regular(coeffs[:start], coeffs[start:])


def _prefix_matrix(prefix: Sequence[int]) -> tuple[int, int, int, int]:
    a, b, c, d = 1, 0, 0, 1
    for x in prefix:
        # [[a, b], [c, d]] @ [[x, 1], [1, 0]]
        a, b, c, d = a * x + b, a, c * x + d, c
    return a, b, c, d


def mobius_cf(cf: ContinuedFraction, a: int, b: int, c: int, d: int) -> ContinuedFraction:
    """Expansion of (a x + b)/(c x + d) for x given by cf, in the same kind."""
    if cf.is_finite:
        x = cf.value()
        y = (a * x + b) / (c * x + d)
        out = regular_cf_expand(y.numerator, y.denominator)
    else:
        out = QuadraticIrrational.from_cf(cf).mobius(a, b, c, d).to_cf()
    return out if cf.kind is Kind.REGULAR else regular_to_hj(out)
