"""Orders of lattices Z + Z*alpha, totally positive units, the j-homomorphism,
transfer matrices and the word problem in Gamma(2) = <A, B>.
"""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Dict, List, Tuple

from sympy import factorint

from .errors import DomainError, NotInOrderError
from .exact_arith import brace
from .quad_field import QuadElem

logger = logging.getLogger(__name__)

# Continued fractions of quadratic surds are eventually periodic; this only guards against bugs
MAX_CF_STEPS = 1_000_000


@dataclass(frozen=True)
class Mat2Z:
    a: int
    b: int
    c: int
    d: int

    @classmethod
    def identity(cls) -> 'Mat2Z':
        return cls(1, 0, 0, 1)

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __matmul__(self, other: 'Mat2Z') -> 'Mat2Z':
        return Mat2Z(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def __neg__(self) -> 'Mat2Z':
        return Mat2Z(-self.a, -self.b, -self.c, -self.d)

    def inverse(self) -> 'Mat2Z':
        det = self.det()
        if det not in (1, -1):
            raise ArithmeticError(f"matrix {self} is not invertible over Z (det {det})")
        return Mat2Z(det * self.d, -det * self.b, -det * self.c, det * self.a)

    def __pow__(self, e: int) -> 'Mat2Z':
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = Mat2Z.identity()
        while e:
            if e & 1:
                result = result @ base
            base = base @ base
            e >>= 1
        return result

    def mod(self, n: int) -> 'Mat2Z':
        return Mat2Z(self.a % n, self.b % n, self.c % n, self.d % n)

    def is_identity_mod(self, n: int) -> bool:
        return self.mod(n) == Mat2Z.identity().mod(n)

    def __str__(self):
        return f"({self.a} {self.b}; {self.c} {self.d})"


def mobius(M: Mat2Z, alpha: QuadElem) -> QuadElem:
    """(a*alpha + b) / (c*alpha + d)."""
    return (M.a * alpha + M.b) / (M.c * alpha + M.d)


class Letter(Enum):
    """Free generators of Gamma(2) and their inverses."""
    A = 'A'
    A_INV = 'A^-1'
    B = 'B'
    B_INV = 'B^-1'

    @property
    def matrix(self) -> Mat2Z:
        return _LETTER_MATRICES[self]

    @property
    def inverse(self) -> 'Letter':
        return _LETTER_INVERSES[self]


_LETTER_MATRICES = {
    Letter.A: Mat2Z(1, 2, 0, 1),
    Letter.A_INV: Mat2Z(1, -2, 0, 1),
    Letter.B: Mat2Z(1, 0, 2, 1),
    Letter.B_INV: Mat2Z(1, 0, -2, 1),
}
_LETTER_INVERSES = {
    Letter.A: Letter.A_INV,
    Letter.A_INV: Letter.A,
    Letter.B: Letter.B_INV,
    Letter.B_INV: Letter.B,
}


@dataclass(frozen=True)
class Gamma2Word:
    """Product of ``letters`` (left to right) equals ``sign`` times the decomposed matrix."""
    letters: Tuple[Letter, ...]
    sign: int = 1

    def product(self) -> Mat2Z:
        result = Mat2Z.identity()
        for letter in self.letters:
            result = result @ letter.matrix
        return result

    def __len__(self):
        return len(self.letters)

    def __str__(self):
        return '·'.join(letter.value for letter in self.letters) or '1'


@dataclass(frozen=True)
class OrderData:
    alpha: QuadElem
    min_poly: Tuple[int, int, int]
    disc: int
    epsilon: QuadElem
    gamma: QuadElem


@dataclass(frozen=True)
class TransferData:
    V: Mat2Z
    beta: QuadElem
    m: int
    pprime: Fraction
    qprime: Fraction
    rho: Fraction


# --- continued fractions -------------------------------------------------

def _surd_form(alpha: QuadElem) -> Tuple[int, int, int]:
    """Write alpha = (P + g*sqrt(D)) / Q with integers and Q | (g^2 D - P^2)."""
    alpha.require_irrational()
    L = math.lcm(alpha.x.denominator, alpha.y.denominator)
    A = int(alpha.x * L)
    B = int(alpha.y * L)
    if B > 0:
        P, g, Q = A, B, L
    else:
        P, g, Q = -A, -B, -L
    if (g * g * alpha.D - P * P) % Q:
        P, g, Q = P * abs(Q), g * abs(Q), Q * abs(Q)
    return P, Q, g


def _cf_expand(alpha: QuadElem):
    """Run the (P, Q) recurrence until a complete quotient repeats.

    Returns (states, partials, r, g) where states[i] = (P_i, Q_i), partials[i] = a_i,
    the period starts at index r and ends just before len(states), and every
    complete quotient is (P_i + g*sqrt(D)) / Q_i.
    """
    P, Q, g = _surd_form(alpha)
    R = g * g * alpha.D
    s = math.isqrt(R)
    seen: Dict[Tuple[int, int], int] = {}
    states: List[Tuple[int, int]] = []
    partials: List[int] = []
    for _ in range(MAX_CF_STEPS):
        if (P, Q) in seen:
            return states, partials, seen[(P, Q)], g
        seen[(P, Q)] = len(states)
        states.append((P, Q))
        if Q > 0:
            a = (P + s) // Q
        else:
            a = -((P + s) // -Q) - 1
        partials.append(a)
        P = a * Q - P
        Q = (R - P * P) // Q
    raise ArithmeticError(f"continued fraction of {alpha} did not become periodic")


def continued_fraction(alpha: QuadElem) -> Tuple[List[int], List[int]]:
    """(preperiod, period) partial quotients of a real quadratic irrational."""
    _, partials, r, _ = _cf_expand(alpha)
    return partials[:r], partials[r:]


def minimal_polynomial(alpha: QuadElem) -> Tuple[int, int, int]:
    """Primitive (a, b, c), a > 0, with a*alpha^2 + b*alpha + c = 0."""
    alpha.require_irrational()
    # alpha = x + y sqrt(D): alpha^2 - 2x alpha + (x^2 - y^2 D) = 0
    coeffs = [Fraction(1), -2 * alpha.x, alpha.norm()]
    den = math.lcm(*(c.denominator for c in coeffs))
    ints = [int(c * den) for c in coeffs]
    g = math.gcd(*ints)
    a, b, c = (v // g for v in ints)
    return a, b, c


def fundamental_unit(alpha: QuadElem) -> QuadElem:
    """Fundamental unit epsilon > 1 of the order of Z + Z*alpha.

    The product of the partial-quotient matrices over one period of the
    continued fraction fixes the complete quotient alpha_r; its eigenvalue
    c*alpha_r + d is the fundamental unit of the multiplier ring.
    """
    states, partials, r, g = _cf_expand(alpha)
    M = Mat2Z.identity()
    for a in partials[r:]:
        M = M @ Mat2Z(a, 1, 1, 0)
    P, Q = states[r]
    alpha_r = (P + QuadElem(0, g, alpha.D)) / Q
    eps = M.c * alpha_r + M.d
    if eps.norm() != M.det() or not eps > 1:
        raise ArithmeticError(f"period matrix {M} of {alpha} gave invalid unit {eps}")
    logger.debug(f"alpha={alpha}: period length {len(partials) - r}, epsilon={eps}")
    return eps


def lattice_order(alpha: QuadElem) -> OrderData:
    alpha.require_irrational()
    a, b, c = minimal_polynomial(alpha)
    eps = fundamental_unit(alpha)
    gamma = eps if eps.norm() == 1 else eps * eps
    if gamma < 1:
        gamma = gamma.inverse()
    return OrderData(alpha=alpha, min_poly=(a, b, c), disc=b * b - 4 * a * c, epsilon=eps, gamma=gamma)


def _integral(value: Fraction, what: str) -> int:
    if value.denominator != 1:
        raise NotInOrderError(f"{what} coordinate {value} is not integral")
    return int(value)


def j_matrix(u: QuadElem, alpha: QuadElem) -> Mat2Z:
    """Matrix of multiplication by u in the basis (alpha, 1)."""
    alpha.require_irrational()

    def coords(z: QuadElem) -> Tuple[int, int]:
        first = z.y / alpha.y
        return _integral(first, 'alpha'), _integral(z.x - first * alpha.x, 'unit')

    a, b = coords(u * alpha)
    c, d = coords(u)
    return Mat2Z(a, b, c, d)


def _gl2_order(n: int) -> int:
    order = n ** 4
    for p in factorint(n):
        order = order * (p - 1) * (p * p - 1) // (p ** 3)
    return order


def find_transfer_matrix(alpha: QuadElem, p: Fraction, q: Fraction, multiple: int = 1) -> TransferData:
    """V = j(gamma)^{+-m} with V = I mod lcm(den p, den q), c > 0 and beta = c*alpha + d."""
    alpha.require_irrational()
    p, q = Fraction(p), Fraction(q)
    if p.denominator == 1:
        raise DomainError(f"p must not be an integer, got {p}")
    if multiple < 1:
        raise ValueError(f"multiple must be >= 1, got {multiple}")

    N = math.lcm(p.denominator, q.denominator)
    order = lattice_order(alpha)
    J = j_matrix(order.gamma, alpha)

    bound = _gl2_order(N)
    step = J.mod(N)
    power, m = step, 1
    while not power.is_identity_mod(N):
        power = (power @ step).mod(N)
        m += 1
        if m > bound:
            raise ArithmeticError(f"j(gamma) has no power = I mod {N} below {bound}")

    m *= multiple
    V = J ** m
    if V.c == 0:
        raise ArithmeticError(f"power {m} of j(gamma) has c = 0 for alpha={alpha}")
    if V.c < 0:
        V = V.inverse()
    beta = V.c * alpha + V.d
    if V.det() != 1 or not beta > 0 or not beta.conj() > 0 or beta == 1:
        raise ArithmeticError(f"transfer matrix {V} violates its invariants (beta={beta})")

    pprime = p * V.a + q * V.c
    qprime = p * V.b + q * V.d
    rho = brace(qprime) * V.c - brace(pprime) * V.d
    logger.debug(f"transfer for alpha={alpha}, (p,q)=({p},{q}): m={m}, V={V}, beta={beta}")
    return TransferData(V=V, beta=beta, m=m, pprime=pprime, qprime=qprime, rho=rho)


def gamma2_membership(M: Mat2Z) -> bool:
    """True iff det M = 1 and M = +-I mod 2."""
    if M.det() != 1:
        return False
    return M.a % 2 == 1 and M.d % 2 == 1 and M.b % 2 == 0 and M.c % 2 == 0


def _power_letters(generator: Letter, exponent: int) -> List[Letter]:
    letter = generator if exponent > 0 else generator.inverse
    return [letter] * abs(exponent)


def gamma2_word(M: Mat2Z) -> Gamma2Word:
    """Decompose M in Gamma(2) as +- a reduced word in A, B.

    Alternately left-multiplies by the power of A minimizing |a| and the power
    of B minimizing |c|; a stays odd and c even, so the decrease is strict.
    """
    if not gamma2_membership(M):
        raise DomainError(f"{M} is not in Gamma(2)")
    a, b, c, d = M.a, M.b, M.c, M.d
    inverse_steps: List[Letter] = []
    while c != 0:
        n = -round(Fraction(a, 2 * c))
        if n:
            a, b = a + 2 * n * c, b + 2 * n * d
            inverse_steps.extend(_power_letters(Letter.A, -n))
        m = -round(Fraction(c, 2 * a))
        if m:
            c, d = c + 2 * m * a, d + 2 * m * b
            inverse_steps.extend(_power_letters(Letter.B, -m))
    # remainder is s * A^t
    sign = a
    t = b * sign // 2
    letters = inverse_steps + _power_letters(Letter.A, t)
    return Gamma2Word(letters=tuple(letters), sign=sign)


def gamma2_fixing_matrix(alpha: QuadElem) -> Tuple[Mat2Z, int]:
    """C = j(gamma^m) in Gamma(2) for the least m in 1..6; C fixes alpha."""
    order = lattice_order(alpha)
    J = j_matrix(order.gamma, alpha)
    C = J
    for m in range(1, 7):
        if gamma2_membership(C):
            return C, m
        C = C @ J
    raise ArithmeticError(f"no power j(gamma)^m, m <= 6, lies in Gamma(2) for alpha={alpha}")
