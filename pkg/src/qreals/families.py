"""q-deformed Fibonacci and Pell polynomials.

``[F_{n+1}/F_n]_q = Ftilde_{n+1}/F_n`` and ``[P_{n+1}/P_n]_q = Ptilde_{n+1}/P_n``.
Each family has a primary recurrence and a second, interleaved one used as a
cross-check; the tilde families run on their own recurrences and are checked
against the mirror identity rather than defined by it.
"""

from __future__ import annotations

import csv
import io
import threading
from enum import Enum
from typing import Callable

from .exactalg import IntPoly, RationalFunction

Q = IntPoly([0, 1])
Q2 = IntPoly([0, 0, 1])
Q4 = IntPoly.monomial(4)
QINT3 = IntPoly([1, 1, 1])
GAUSS_4_2 = IntPoly([1, 1, 2, 1, 1])  # Gaussian binomial (4 choose 2)_q
ONE_Q = IntPoly([1, 1])
Q_Q2 = IntPoly([0, 1, 1])


class Family(str, Enum):
    FIBONACCI = "fib"
    FIBONACCI_TILDE = "fib~"
    PELL = "pell"
    PELL_TILDE = "pell~"

    @property
    def base(self) -> Family:
        return {Family.FIBONACCI_TILDE: Family.FIBONACCI, Family.PELL_TILDE: Family.PELL}.get(self, self)

    @property
    def tilde(self) -> Family:
        return {Family.FIBONACCI: Family.FIBONACCI_TILDE, Family.PELL: Family.PELL_TILDE}.get(self, self)

    @property
    def is_tilde(self) -> bool:
        return self in (Family.FIBONACCI_TILDE, Family.PELL_TILDE)

    def degree(self, n: int) -> int:
        if n < 2:
            return 0 if n == 1 else -1
        return n - 2 if self.base is Family.FIBONACCI else 2 * n - 3

    @classmethod
    def parse(cls, name: str) -> Family:
        aliases = {
            "fib": cls.FIBONACCI, "fibonacci": cls.FIBONACCI,
            "fib~": cls.FIBONACCI_TILDE, "fibtilde": cls.FIBONACCI_TILDE, "fibonacci-tilde": cls.FIBONACCI_TILDE,
            "pell": cls.PELL, "pell~": cls.PELL_TILDE, "pelltilde": cls.PELL_TILDE, "pell-tilde": cls.PELL_TILDE,
        }
        try:
            return aliases[name.lower()]
        except KeyError:
            raise ValueError(f"unknown family {name!r}") from None


class PolyCache:
    """Append-only table of polynomials computed by a step function.

    ``step(table, n)`` returns entry n from the entries already present.
    Extension happens under a lock; finished entries are never mutated, so
    reads of computed indices need no lock.
    """

    def __init__(self, initial: list[IntPoly], step: Callable[[list[IntPoly], int], IntPoly]):
        self._table = list(initial)
        self._step = step
        self._lock = threading.Lock()

    def __getitem__(self, n: int) -> IntPoly:
        if n < 0:
            raise IndexError("negative index")
        if n < len(self._table):
            return self._table[n]
        with self._lock:
            while len(self._table) <= n:
                self._table.append(self._step(self._table, len(self._table)))
        return self._table[n]


# Fibonacci: F_{n+2} = [3]_q F_n - q^2 F_{n-2}
def _fib_step(t, n):
    return QINT3 * t[n - 2] - Q2 * t[n - 4]


# F_{2l+1} = q F_{2l} + F_{2l-1},  F_{2l+2} = F_{2l+1} + q^2 F_{2l}
def _fib_interleaved_step(t, n):
    if n % 2:
        return Q * t[n - 1] + t[n - 2]
    return t[n - 1] + Q2 * t[n - 2]


# Ftilde_{2l+1} = Ftilde_{2l} + q^2 Ftilde_{2l-1},  Ftilde_{2l+2} = q Ftilde_{2l+1} + Ftilde_{2l}
def _fib_tilde_step(t, n):
    if n % 2:
        return t[n - 1] + Q2 * t[n - 2]
    return Q * t[n - 1] + t[n - 2]


# Pell: P_{n+2} = (4 choose 2)_q P_n - q^4 P_{n-2}
def _pell_step(t, n):
    return GAUSS_4_2 * t[n - 2] - Q4 * t[n - 4]


# P_{2l+1} = (q+q^2) P_{2l} + P_{2l-1},  P_{2l+2} = (1+q) P_{2l+1} + q^4 P_{2l}
def _pell_interleaved_step(t, n):
    if n % 2:
        return Q_Q2 * t[n - 1] + t[n - 2]
    return ONE_Q * t[n - 1] + Q4 * t[n - 2]


# mirror images of the two Pell steps:
# Ptilde_{2l+1} = (1+q) Ptilde_{2l} + q^4 Ptilde_{2l-1},  Ptilde_{2l+2} = (q+q^2) Ptilde_{2l+1} + Ptilde_{2l}
def _pell_tilde_step(t, n):
    if n % 2:
        return ONE_Q * t[n - 1] + Q4 * t[n - 2]
    return Q_Q2 * t[n - 1] + t[n - 2]


def _z():
    return IntPoly()


# The tilde tables start at n = 2 (Ftilde_1 = 1/q is not a polynomial); index
# 0 and 1 hold placeholders that the steps never read.
_CACHES = {
    Family.FIBONACCI: PolyCache([_z(), IntPoly([1]), IntPoly([1]), IntPoly([1, 1])], _fib_step),
    Family.FIBONACCI_TILDE: PolyCache([_z(), _z(), IntPoly([1]), IntPoly([1, 1])], _fib_tilde_step),
    Family.PELL: PolyCache([_z(), IntPoly([1]), IntPoly([1, 1]), IntPoly([1, 1, 2, 1])], _pell_step),
    Family.PELL_TILDE: PolyCache([_z(), _z(), IntPoly([1, 1]), IntPoly([1, 2, 1, 1])], _pell_tilde_step),
}


def family_poly(family: Family | str, n: int) -> IntPoly:
    family = Family.parse(family) if isinstance(family, str) else family
    if n < 0:
        raise ValueError("index must be >= 0")
    if family.is_tilde and n == 1:
        raise ValueError("the tilde polynomial of index 1 is q^-1, not a polynomial")
    if family.is_tilde and n == 0:
        return IntPoly()
    return _CACHES[family][n]


def fibonacci_poly(n: int, tilde: bool = False) -> IntPoly:
    return family_poly(Family.FIBONACCI_TILDE if tilde else Family.FIBONACCI, n)


def pell_poly(n: int, tilde: bool = False) -> IntPoly:
    return family_poly(Family.PELL_TILDE if tilde else Family.PELL, n)


def interleaved(family: Family | str, n: int) -> IntPoly:
    """Recompute by the two-term interleaved recurrences (no cache)."""
    family = Family.parse(family) if isinstance(family, str) else family
    if family is Family.FIBONACCI:
        table, step = [_z(), IntPoly([1]), IntPoly([1])], _fib_interleaved_step
    elif family is Family.PELL:
        table, step = [_z(), IntPoly([1]), IntPoly([1, 1])], _pell_interleaved_step
    else:
        raise ValueError("interleaved cross-check is defined for the plain families")
    while len(table) <= n:
        table.append(step(table, len(table)))
    return table[n]


def family_quotient(family: Family | str, n: int) -> RationalFunction:
    """Ftilde_{n+1}/F_n (or Ptilde_{n+1}/P_n)."""
    family = Family.parse(family) if isinstance(family, str) else family
    if n < 1:
        raise ValueError("index must be >= 1")
    base = family.base
    return RationalFunction(family_poly(base.tilde, n + 1), family_poly(base, n))


def classical(family: Family | str, n: int) -> int:
    """F_n or P_n (the polynomials at q = 1)."""
    family = Family.parse(family) if isinstance(family, str) else family
    a, b = 0, 1
    mult = 1 if family.base is Family.FIBONACCI else 2
    for _ in range(n):
        a, b = b, mult * b + a
    return a


def triangle_rows(family: Family | str, count: int) -> list[list[int]]:
    """Coefficient rows as printed in the OEIS triangles, low degree first.

    Fibonacci rows start at F_2 (A123245 / A079487), Pell rows at P_1 (A323670).
    """
    family = Family.parse(family) if isinstance(family, str) else family
    if count < 1:
        raise ValueError("count must be >= 1")
    first = 2 if family.base is Family.FIBONACCI else 1
    if family is Family.PELL_TILDE:
        first = 2
    return [list(family_poly(family, n).coeffs) for n in range(first, first + count)]


def triangle_flat(rows: list[list[int]]) -> list[int]:
    return [c for row in rows for c in row]


def triangle_csv(rows: list[list[int]]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    for row in rows:
        w.writerow(row)
    return buf.getvalue()
