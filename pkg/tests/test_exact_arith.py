import math
from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from src.exact_arith import (
    angle,
    bernoulli_number,
    bernoulli_poly,
    bernoulli_poly_coefficients,
    brace,
    euler_number,
    frac_parts,
)


def _brute_bernoulli(n):
    table = [Fraction(1)]
    for m in range(1, n + 1):
        table.append(-sum(math.comb(m + 1, j) * table[j] for j in range(m)) / (m + 1))
    return table


def _brute_euler(n):
    # cosh * sech = 1: sum over even j of C(m, j) E_{m-j} = 0 for m >= 1
    table = [1]
    for m in range(1, n + 1):
        table.append(-sum(math.comb(m, j) * table[m - j] for j in range(2, m + 1, 2)))
    return table


@pytest.mark.parametrize("n, expected", [(0, Fraction(1)), (1, Fraction(-1, 2)), (12, Fraction(-691, 2730))])
def test_bernoulli_examples(n, expected):
    assert bernoulli_number(n) == expected


def test_bernoulli_matches_recurrence():
    brute = _brute_bernoulli(12)
    assert [bernoulli_number(n) for n in range(13)] == brute


@pytest.mark.parametrize("n, expected", [(0, 1), (3, 0), (6, -61), (10, -50521)])
def test_euler_examples(n, expected):
    assert euler_number(n) == expected


def test_euler_matches_recurrence():
    assert [euler_number(n) for n in range(11)] == _brute_euler(10)


def test_cache_grows_out_of_order():
    # asking for a high index first must not disturb lower ones
    assert bernoulli_number(30) == Fraction(8615841276005, 14322)
    assert bernoulli_number(2) == Fraction(1, 6)


@pytest.mark.parametrize("l, x, expected", [
    (0, Fraction(7, 3), Fraction(1)),
    (1, Fraction(1, 4), Fraction(-1, 4)),
    (2, Fraction(1, 4), Fraction(-1, 96)),
])
def test_bernoulli_poly_examples(l, x, expected):
    assert bernoulli_poly(l, x) == expected


def test_bernoulli_poly_is_scaled_classical():
    # B_3(x) = x^3 - 3x^2/2 + x/2
    assert bernoulli_poly_coefficients(3) == tuple(c / 6 for c in (Fraction(0), Fraction(1, 2), Fraction(-3, 2), Fraction(1)))


def test_negative_degree_rejected():
    with pytest.raises(ValueError):
        bernoulli_poly_coefficients(-1)


@settings(max_examples=100)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=1000), st.integers(min_value=0, max_value=9))
def test_bernoulli_poly_reflection(x, l):
    assert bernoulli_poly(l, 1 - x) == (-1) ** l * bernoulli_poly(l, x)


@settings(max_examples=50)
@given(st.fractions(min_value=-10, max_value=10, max_denominator=1000), st.integers(min_value=1, max_value=8))
def test_bernoulli_poly_difference(x, l):
    # b_l(x + 1) - b_l(x) = x^{l-1} / (l-1)!
    assert bernoulli_poly(l, x + 1) - bernoulli_poly(l, x) == x ** (l - 1) / math.factorial(l - 1)


@pytest.mark.parametrize("x, expected", [
    (Fraction(-1, 4), (Fraction(3, 4), Fraction(3, 4))),
    (2, (Fraction(0), Fraction(1))),
    (Fraction(1, 4), (Fraction(1, 4), Fraction(1, 4))),
])
def test_frac_parts(x, expected):
    assert frac_parts(x) == expected


@given(st.fractions(min_value=-100, max_value=100))
def test_frac_parts_ranges(x):
    assert 0 <= brace(x) < 1
    assert 0 < angle(x) <= 1
    assert (x - brace(x)).denominator == 1
    assert (x - angle(x)).denominator == 1
