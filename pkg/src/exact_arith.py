"""Exact rational arithmetic: Bernoulli and Euler numbers, normalized Bernoulli
polynomials and the two fractional-part conventions.

``Rational`` is :class:`fractions.Fraction`, which is always reduced with a
positive denominator, so equality is structural.
"""
import logging
import math
import threading
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple, Union

logger = logging.getLogger(__name__)

Rational = Fraction
RationalLike = Union[int, Fraction]


class _SequenceCache:
    """Growable memo table; readers never block, growth is serialized."""

    def __init__(self, seed: list, step):
        self._table = list(seed)
        self._step = step
        self._lock = threading.Lock()

    def get(self, n: int):
        if n < 0:
            raise ValueError(f"index must be >= 0, got {n}")
        table = self._table
        if n < len(table):
            return table[n]
        with self._lock:
            while len(self._table) <= n:
                self._table.append(self._step(self._table))
            return self._table[n]


def _next_bernoulli(table: List[Fraction]) -> Fraction:
    # sum_{j=0}^{n} C(n+1, j) B_j = 0
    n = len(table)
    acc = sum((math.comb(n + 1, j) * table[j] for j in range(n)), Fraction(0))
    return -acc / (n + 1)


def _next_euler(table: List[int]) -> int:
    # cosh * sech = 1 gives sum_i C(n, 2i) E_{n-2i} = 0 for even n >= 2
    n = len(table)
    if n % 2:
        return 0
    return -sum(math.comb(n, 2 * i) * table[n - 2 * i] for i in range(1, n // 2 + 1))


_BERNOULLI = _SequenceCache([Fraction(1)], _next_bernoulli)
_EULER = _SequenceCache([1], _next_euler)


def bernoulli_number(n: int) -> Fraction:
    """B_n with B_1 = -1/2 (generating function u/(e^u - 1))."""
    return _BERNOULLI.get(n)


def euler_number(n: int) -> int:
    """E_n with sech(t) = sum E_n t^n / n!."""
    return _EULER.get(n)


@lru_cache(maxsize=None)
def bernoulli_poly_coefficients(l: int) -> Tuple[Fraction, ...]:
    """Coefficients (constant term first) of the normalized polynomial b_l.

    b_l(x) = sum_j B_j / j! * x^(l-j) / (l-j)!, i.e. the classical
    Bernoulli polynomial divided by l!.
    """
    if l < 0:
        raise ValueError(f"degree must be >= 0, got {l}")
    coeffs = [Fraction(0)] * (l + 1)
    for j in range(l + 1):
        coeffs[l - j] = bernoulli_number(j) / (math.factorial(j) * math.factorial(l - j))
    return tuple(coeffs)


def bernoulli_poly(l: int, x: RationalLike) -> Fraction:
    """Normalized Bernoulli polynomial b_l(x): coefficient of u^l in u e^{ux}/(e^u - 1)."""
    x = Fraction(x)
    acc = Fraction(0)
    for c in reversed(bernoulli_poly_coefficients(l)):
        acc = acc * x + c
    return acc


def frac_parts(x: RationalLike) -> Tuple[Fraction, Fraction]:
    """Return ({x}, <x>) with 0 <= {x} < 1 and 0 < <x> <= 1."""
    x = Fraction(x)
    brace = x - math.floor(x)
    angle = brace if brace else Fraction(1)
    return brace, angle


def brace(x: RationalLike) -> Fraction:
    return frac_parts(x)[0]


def angle(x: RationalLike) -> Fraction:
    return frac_parts(x)[1]
