import threading

import pytest

from qreals.exactalg import IntPoly
from qreals.families import (
    Family,
    PolyCache,
    classical,
    family_poly,
    family_quotient,
    fibonacci_poly,
    interleaved,
    pell_poly,
    triangle_csv,
    triangle_flat,
    triangle_rows,
)
from qreals.qdeform import q_rational_recursive

N_MAX = 60


def test_fibonacci_examples():
    assert fibonacci_poly(5) == IntPoly([1, 2, 1, 1])
    assert fibonacci_poly(0) == IntPoly() and fibonacci_poly(2) == IntPoly([1])
    assert fibonacci_poly(1) == IntPoly([1]) and fibonacci_poly(3) == IntPoly([1, 1])


def test_fibonacci_seventh_triangle_row():
    # the seventh printed row "1 3 4 5 4 3 1" is the degree-6 member, F_8 (rows start at F_2)
    assert triangle_rows(Family.FIBONACCI, 7)[-1] == [1, 3, 4, 5, 4, 3, 1]
    assert fibonacci_poly(8) == IntPoly([1, 3, 4, 5, 4, 3, 1])
    assert fibonacci_poly(7) == IntPoly([1, 3, 3, 3, 2, 1])


def test_pell_examples():
    assert pell_poly(3) == IntPoly([1, 1, 2, 1])
    assert pell_poly(4) == IntPoly([1, 2, 3, 3, 2, 1])
    assert triangle_rows(Family.PELL, 7)[-1] == [1, 3, 9, 16, 24, 29, 29, 25, 18, 10, 4, 1]


def test_quotient_examples():
    assert family_quotient(Family.FIBONACCI, 5) == q_rational_recursive(8, 5).value
    assert str(family_quotient(Family.FIBONACCI, 5)) == "(1+2q+2q^2+2q^3+q^4)/(1+2q+q^2+q^3)"
    assert str(family_quotient(Family.PELL, 3)) == "(1+2q+3q^2+3q^3+2q^4+q^5)/(1+q+2q^2+q^3)"
    assert family_quotient(Family.FIBONACCI, 1) == 1


def test_triangles_first_rows():
    assert triangle_rows("fib", 3) == [[1], [1, 1], [1, 1, 1]]
    assert triangle_rows("fib~", 5) == [[1], [1, 1], [1, 1, 1], [1, 1, 2, 1], [1, 2, 2, 2, 1]]
    assert triangle_rows("pell", 3) == [[1], [1, 1], [1, 1, 2, 1]]


@pytest.mark.parametrize("family", [Family.FIBONACCI, Family.PELL])
def test_recurrence_matches_interleaved(family):
    for n in range(N_MAX + 1):
        assert family_poly(family, n) == interleaved(family, n)


@pytest.mark.parametrize("family", [Family.FIBONACCI, Family.PELL])
def test_mirror_identity(family):
    for n in range(2, N_MAX + 1):
        p, t = family_poly(family, n), family_poly(family.tilde, n)
        d = family.degree(n)
        assert p.degree == t.degree == d
        assert t == p.mirror(d)


@pytest.mark.parametrize("family", list(Family))
def test_specialization_at_one(family):
    for n in range(2, N_MAX + 1):
        assert family_poly(family, n)(1) == classical(family, n)
    assert [classical(Family.FIBONACCI, n) for n in range(1, 8)] == [1, 1, 2, 3, 5, 8, 13]
    assert [classical(Family.PELL, n) for n in range(1, 7)] == [1, 2, 5, 12, 29, 70]


@pytest.mark.parametrize("family", [Family.FIBONACCI, Family.PELL])
def test_quotient_equals_recursive(family):
    for n in range(1, 40):
        r, s = classical(family, n + 1), classical(family, n)
        assert family_quotient(family, n) == q_rational_recursive(r, s).value


@pytest.mark.parametrize("family", list(Family))
def test_nonnegative_unimodal(family):
    # observed regression property, not a theorem
    for n in range(2, N_MAX + 1):
        c = list(family_poly(family, n).coeffs)
        assert all(x > 0 for x in c)
        peak = c.index(max(c))
        assert all(a <= b for a, b in zip(c[:peak], c[1 : peak + 1]))
        assert all(a >= b for a, b in zip(c[peak:], c[peak + 1 :]))


def test_tilde_index_one_rejected():
    with pytest.raises(ValueError):
        family_poly(Family.FIBONACCI_TILDE, 1)


def test_family_parse():
    assert Family.parse("Pell-Tilde") is Family.PELL_TILDE
    with pytest.raises(ValueError):
        Family.parse("lucas")


def test_exports():
    rows = triangle_rows("pell", 3)
    assert triangle_flat(rows) == [1, 1, 1, 1, 1, 2, 1]
    assert triangle_csv(rows) == "1\n1,1\n1,1,2,1\n"


def test_cache_concurrent_extension():
    calls = []

    def step(t, n):
        calls.append(n)
        return t[n - 1] + t[n - 2]

    cache = PolyCache([IntPoly([0]), IntPoly([1])], step)
    results = []
    threads = [threading.Thread(target=lambda: results.append(cache[200])) for _ in range(8)]
    for th in threads:
        th.start()
    for th in threads:
        th.join()
    assert len(set(results)) == 1
    assert sorted(calls) == list(range(2, 201))
