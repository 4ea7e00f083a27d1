"""Secant values from the A/B functional equations, and the cotangent
rationality formula at quadratic units.

    psi(A alpha, 2k) = psi(alpha, 2k)
    psi(B alpha, 2k) = (2 alpha + 1)^{1-2k} psi(alpha, 2k) - pi^{2k} F(alpha, k)

Composing these along a word for a matrix C in Gamma(2) with C alpha = alpha
gives psi(alpha, 2k) = U psi(alpha, 2k) + V pi^{2k}, solved for psi.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional

from .arakawa_eval import MethodTag, SpecialValue
from .errors import DomainError
from .exact_arith import bernoulli_number, euler_number
from .modular_units import Gamma2Word, Letter, gamma2_fixing_matrix, gamma2_word, mobius
from .quad_field import QuadElem

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class AffineRel:
    """psi(M base_alpha, 2k) = u psi(base_alpha, 2k) + v pi^{2k}."""
    u: QuadElem
    v: QuadElem
    k: int
    base_alpha: QuadElem

    def then(self, outer: 'AffineRel') -> 'AffineRel':
        """Compose with a relation based at M base_alpha."""
        return AffineRel(
            u=outer.u * self.u,
            v=outer.u * self.v + outer.v,
            k=self.k,
            base_alpha=self.base_alpha,
        )


def _b_correction(alpha: QuadElem, k: int) -> QuadElem:
    """F(alpha, k): the pi^{2k} coefficient subtracted in the B equation."""
    w = 2 * alpha + 1
    shift = alpha + 1
    tail = w ** (1 - 2 * k)
    total = QuadElem.rational(0, alpha.D)
    for m in range(0, 2 * k + 1, 2):
        # odd m vanish: B_m = 0 for odd m > 1 and E_{2k-1} = 0 for m = 1
        coeff = (Fraction(2) ** (m - 1) - 1) * bernoulli_number(m) * euler_number(2 * k - m) * math.comb(2 * k, m)
        if coeff:
            total = total + coeff * shift ** (2 * k - m) * (w ** (m - 2 * k) - tail)
    # sech-convention E_n alternate in sign against the secant expansion; (-1)^{k+1} restores it
    return (-1) ** (k + 1) * total / math.factorial(2 * k)


def base_affine(letter: Letter, alpha: QuadElem, k: int) -> AffineRel:
    """Relation for a single generator applied at alpha."""
    alpha.require_irrational()
    one = QuadElem.rational(1, alpha.D)
    zero = QuadElem.rational(0, alpha.D)
    if letter in (Letter.A, Letter.A_INV):
        return AffineRel(one, zero, k, alpha)
    if letter is Letter.B:
        return AffineRel((2 * alpha + 1) ** (1 - 2 * k), -_b_correction(alpha, k), k, alpha)
    # B^-1: solve the B relation at alpha' = B^-1 alpha
    image = mobius(Letter.B_INV.matrix, alpha)
    factor = (2 * image + 1) ** (2 * k - 1)
    return AffineRel(factor, factor * _b_correction(image, k), k, alpha)


def word_affine(word: Gamma2Word, alpha: QuadElem, k: int) -> AffineRel:
    """Fold the word right to left; the overall sign of the word does not matter."""
    alpha.require_irrational()
    rel = AffineRel(QuadElem.rational(1, alpha.D), QuadElem.rational(0, alpha.D), k, alpha)
    point = alpha
    for letter in reversed(word.letters):
        rel = rel.then(base_affine(letter, point, k))
        point = mobius(letter.matrix, point)
        logger.debug(f"folded {letter.value}: point={point}")
    return rel


def secant_value_lrr(alpha0: QuadElem, k: int) -> SpecialValue:
    """psi(alpha0, 2k) / pi^{2k} = V / (1 - U) from the fixed-point relation of C."""
    alpha0.require_irrational()
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    C, m = gamma2_fixing_matrix(alpha0)
    word = gamma2_word(C)
    logger.info(f"LRR at alpha={alpha0}, k={k}: C=j(gamma^{m})={C}, word length {len(word)}")
    rel = word_affine(word, alpha0, k)
    denominator = 1 - rel.u
    if not denominator:
        raise ArithmeticError(f"fixed-point relation for alpha={alpha0} is degenerate (U = 1)")
    return SpecialValue(alpha=alpha0, k=k, value=rel.v / denominator, method=MethodTag.LRR)


def phi(alpha, n: int) -> QuadElem:
    """sum_{j=0}^{n+1} B_j B_{n+1-j} / (j! (n+1-j)!) alpha^{j-1}."""
    if not isinstance(alpha, QuadElem):
        alpha = QuadElem.rational(alpha)
    if not alpha:
        raise DomainError("phi is undefined at alpha = 0")
    if n < 1:
        raise DomainError(f"n must be >= 1, got {n}")
    total = QuadElem.rational(0, alpha.D)
    power = alpha.inverse()
    for j in range(n + 2):
        coeff = bernoulli_number(j) * bernoulli_number(n + 1 - j) / (math.factorial(j) * math.factorial(n + 1 - j))
        if coeff:
            total = total + coeff * power
        power = power * alpha
    return total


@dataclass(frozen=True)
class CotangentValue:
    """xi(alpha, 2k+1) / ((2 pi)^{2k+1} sqrt(D)) at a quadratic unit alpha.

    ``formula_value`` is the rational produced by the rationality formula;
    ``value`` carries its magnitude with the sign observed by the oracle.
    """
    alpha: QuadElem
    k: int
    formula_value: Fraction
    magnitude: Fraction
    oracle_sign: int
    value: Fraction
    sign_adjudicated: bool
    oracle_residual: Optional[float] = None


def cotangent_formula_value(alpha: QuadElem, k: int) -> Fraction:
    """phi(alpha, 2k+1) / (sqrt(D) (1 - eps alpha^{2k})) with eps = norm(alpha)."""
    alpha.require_irrational()
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    eps = alpha.norm()
    a = alpha.trace()
    if eps not in (1, -1) or a.denominator != 1:
        raise DomainError(f"{alpha} is not a unit of its quadratic field (norm {eps}, trace {a})")
    if alpha.inverse() != -eps * (alpha - a):
        raise ArithmeticError(f"1/alpha = -eps (alpha - a) fails for alpha={alpha}")
    ratio = phi(alpha, 2 * k + 1) / (1 - eps * alpha ** (2 * k))
    result = ratio / QuadElem(0, 1, alpha.D)
    if not result.is_rational:
        raise ArithmeticError(f"cotangent value at {alpha} is not rational: {result}")
    return result.x


def cotangent_unit_value(alpha: QuadElem, k: int,
                         oracle: Optional[Callable[[QuadElem, int], object]] = None) -> CotangentValue:
    """Certified magnitude of the cotangent value at a unit, sign from the numeric oracle.

    ``oracle(alpha, k)`` must return a ``SeriesResult`` for xi(alpha, 2k+1);
    it defaults to ``numeric_oracle.xi_series`` with configured terms/precision.
    """
    if alpha in (1, -1):
        raise DomainError("alpha must not be +-1")
    formula = cotangent_formula_value(alpha, k)
    magnitude = abs(formula)

    if oracle is None:
        from .numeric_oracle import xi_series
        oracle = xi_series
    series = oracle(alpha, k)
    observed = float(series.value)
    expected = float(magnitude) * (2 * math.pi) ** (2 * k + 1) * math.sqrt(alpha.D)
    residual = abs(abs(observed) - expected)
    # the oracle decides the sign only when it clearly separates the series from zero
    adjudicated = abs(observed) > 10 * residual and abs(observed) > 0
    oracle_sign = (observed > 0) - (observed < 0) if adjudicated else (formula > 0) - (formula < 0)
    if adjudicated and oracle_sign != ((formula > 0) - (formula < 0)):
        logger.warning(f"cotangent at alpha={alpha}, k={k}: formula sign disagrees with the oracle; using the oracle")
    return CotangentValue(
        alpha=alpha,
        k=k,
        formula_value=formula,
        magnitude=magnitude,
        oracle_sign=oracle_sign,
        value=oracle_sign * magnitude,
        sign_adjudicated=adjudicated,
        oracle_residual=residual,
    )
