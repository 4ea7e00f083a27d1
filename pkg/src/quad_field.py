"""Exact arithmetic in real quadratic fields Q(sqrt(D)).

The real embedding is fixed once and for all by sqrt(D) > 0; the Galois
conjugate is data ``(x, -y, D)``. Signs, comparisons and floors are decided
exactly with integer square roots, never with floating point.
"""
from __future__ import annotations

import logging
import math
import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import List, Tuple, Union

from sympy import factorint

from .errors import DomainError, MixedFieldError, ParseError

logger = logging.getLogger(__name__)

Scalar = Union[int, Fraction]


@lru_cache(maxsize=1024)
def squarefree_decomposition(n: int) -> Tuple[int, int]:
    """Write n > 0 as s^2 * D with D squarefree; return (s, D)."""
    if n <= 0:
        raise DomainError(f"radicand must be positive, got {n}")
    s, d = 1, 1
    for prime, exp in factorint(n).items():
        s *= prime ** (exp // 2)
        if exp % 2:
            d *= prime
    return s, d


@lru_cache(maxsize=1024)
def _is_squarefree(n: int) -> bool:
    return n >= 1 and all(exp == 1 for exp in factorint(n).values())


@dataclass(frozen=True, eq=False)
class QuadElem:
    """x + y*sqrt(D). D = 1 marks a bare rational (then y must be 0)."""
    x: Fraction
    y: Fraction
    D: int

    def __post_init__(self):
        object.__setattr__(self, 'x', Fraction(self.x))
        object.__setattr__(self, 'y', Fraction(self.y))
        if self.D == 1:
            if self.y:
                raise DomainError("sqrt(1) is rational; use D = 1 only with y = 0")
        elif self.D < 1 or not _is_squarefree(self.D):
            raise DomainError(f"D must be a squarefree integer > 1, got {self.D}")

    # --- construction -------------------------------------------------

    @classmethod
    def rational(cls, q: Scalar, D: int = 1) -> 'QuadElem':
        return cls(Fraction(q), Fraction(0), D)

    @classmethod
    def sqrt(cls, n: int) -> 'QuadElem':
        """sqrt(n) for an integer n > 0, square factors folded into y."""
        s, d = squarefree_decomposition(n)
        if d == 1:
            return cls.rational(s)
        return cls(Fraction(0), Fraction(s), d)

    def _coerce(self, other) -> 'QuadElem':
        if isinstance(other, QuadElem):
            return other
        if isinstance(other, (int, Fraction)):
            return QuadElem.rational(other, self.D)
        return NotImplemented

    def _common_field(self, other: 'QuadElem') -> int:
        if self.D == other.D:
            return self.D
        if not other.y:
            return self.D if self.D != 1 else other.D
        if not self.y:
            return other.D
        raise MixedFieldError(f"cannot combine elements of Q(sqrt({self.D})) and Q(sqrt({other.D}))")

    # --- predicates ----------------------------------------------------

    @property
    def is_rational(self) -> bool:
        return self.y == 0

    def require_irrational(self, what: str = 'alpha') -> 'QuadElem':
        if self.is_rational:
            raise DomainError(f"{what} must be a quadratic irrationality, got rational {self.x}")
        return self

    # --- field operations ----------------------------------------------

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return QuadElem(self.x + other.x, self.y + other.y, self._common_field(other))

    __radd__ = __add__

    def __neg__(self):
        return QuadElem(-self.x, -self.y, self.D)

    def __pos__(self):
        return self

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        D = self._common_field(other)
        return QuadElem(
            self.x * other.x + self.y * other.y * D,
            self.x * other.y + self.y * other.x,
            D,
        )

    __rmul__ = __mul__

    def conj(self) -> 'QuadElem':
        return QuadElem(self.x, -self.y, self.D)

    def norm(self) -> Fraction:
        return self.x * self.x - self.y * self.y * self.D

    def trace(self) -> Fraction:
        return 2 * self.x

    def inverse(self) -> 'QuadElem':
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("inverse of zero in a quadratic field")
        return QuadElem(self.x / n, -self.y / n, self.D)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other * self.inverse()

    def __pow__(self, e: int) -> 'QuadElem':
        if not isinstance(e, int):
            return NotImplemented
        base = self if e >= 0 else self.inverse()
        e = abs(e)
        result = QuadElem.rational(1, self.D)
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    # --- exact order structure -----------------------------------------

    def sign(self) -> int:
        sx = (self.x > 0) - (self.x < 0)
        sy = (self.y > 0) - (self.y < 0)
        if sy == 0:
            return sx
        if sx == 0 or sx == sy:
            return sy
        # opposite signs: compare x^2 with y^2 D (never equal, D is not a square)
        return sx if self.x * self.x > self.y * self.y * self.D else sy

    def floor(self) -> int:
        """Exact floor via integer square roots."""
        m = math.lcm(self.x.denominator, self.y.denominator)
        a = int(self.x * m)
        b = int(self.y * m)
        if b == 0:
            return a // m
        root = math.isqrt(b * b * self.D)
        floor_b_sqrt = root if b > 0 else -root - 1
        return (a + floor_b_sqrt) // m

    def __eq__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if self.x != other.x or self.y != other.y:
            return False
        return self.y == 0 or self.D == other.D

    def __hash__(self):
        return hash((self.x, self.y, self.D if self.y else 0))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def __bool__(self):
        return bool(self.x) or bool(self.y)

    def __abs__(self):
        return -self if self.sign() < 0 else self

    # --- rendering ------------------------------------------------------

    def to_mpf(self, ctx):
        """Value in the mpmath context ``ctx`` at its working precision."""
        value = ctx.mpf(self.x.numerator) / self.x.denominator
        if self.y:
            value += ctx.mpf(self.y.numerator) / self.y.denominator * ctx.sqrt(self.D)
        return value

    def __float__(self):
        return float(self.x) + float(self.y) * math.sqrt(self.D)

    def __str__(self):
        if not self.y:
            return str(self.x)
        mag = abs(self.y)
        radical = f"sqrt({self.D})" if mag == 1 else f"{mag}*sqrt({self.D})"
        if not self.x:
            return radical if self.y > 0 else f"-{radical}"
        return f"{self.x} {'+' if self.y > 0 else '-'} {radical}"

    def __repr__(self):
        return f"QuadElem({self})"


# --- parsing ------------------------------------------------------------

_TOKEN = re.compile(r"\s*(?:(\d+)|(sqrt)|(.))")


def _tokenize(expr: str) -> List[str]:
    tokens = []
    pos = 0
    expr = expr.replace('−', '-')
    while pos < len(expr):
        match = _TOKEN.match(expr, pos)
        if match is None:
            break
        pos = match.end()
        number, sqrt_kw, char = match.groups()
        if number is not None:
            tokens.append(number)
        elif sqrt_kw is not None:
            tokens.append('sqrt')
        elif char is not None and not char.isspace():
            if char not in '+-*/()':
                raise ParseError(f"unexpected character {char!r} in {expr!r}")
            tokens.append(char)
    return tokens


class _Parser:
    """expr := term (('+'|'-') term)*; term := unary (('*'|'/') unary)*;
    unary := '-' unary | atom; atom := INT | 'sqrt' '(' INT ')' | '(' expr ')'."""

    def __init__(self, expr: str):
        self.expr = expr
        self.tokens = _tokenize(expr)
        self.pos = 0

    def _peek(self):
        return self.tokens[self.pos] if self.pos < len(self.tokens) else None

    def _take(self, expected=None):
        tok = self._peek()
        if tok is None or (expected is not None and tok != expected):
            raise ParseError(f"expected {expected or 'a token'} at position {self.pos} in {self.expr!r}")
        self.pos += 1
        return tok

    def parse(self) -> QuadElem:
        if not self.tokens:
            raise ParseError("empty expression")
        value = self._expr()
        if self._peek() is not None:
            raise ParseError(f"trailing input {self.tokens[self.pos:]} in {self.expr!r}")
        return value

    def _expr(self) -> QuadElem:
        value = self._term()
        while self._peek() in ('+', '-'):
            op = self._take()
            rhs = self._term()
            value = value + rhs if op == '+' else value - rhs
        return value

    def _term(self) -> QuadElem:
        value = self._unary()
        while self._peek() in ('*', '/'):
            op = self._take()
            rhs = self._unary()
            if op == '*':
                value = value * rhs
            else:
                if not rhs:
                    raise ParseError(f"division by zero in {self.expr!r}")
                value = value / rhs
        return value

    def _unary(self) -> QuadElem:
        if self._peek() == '-':
            self._take()
            return -self._unary()
        if self._peek() == '+':
            self._take()
            return self._unary()
        return self._atom()

    def _atom(self) -> QuadElem:
        tok = self._peek()
        if tok == 'sqrt':
            self._take()
            self._take('(')
            radicand = self._take()
            if not radicand.isdigit():
                raise ParseError(f"sqrt expects an integer literal in {self.expr!r}")
            self._take(')')
            if int(radicand) == 0:
                return QuadElem.rational(0)
            return QuadElem.sqrt(int(radicand))
        if tok == '(':
            self._take()
            value = self._expr()
            self._take(')')
            return value
        if tok is not None and tok.isdigit():
            self._take()
            return QuadElem.rational(int(tok))
        raise ParseError(f"unexpected token {tok!r} in {self.expr!r}")


def parse_quad(expr: str) -> QuadElem:
    """Parse "sqrt(2)", "(1+sqrt(5))/2", "1/2 - 3/4*sqrt(7)", ... into a canonical QuadElem."""
    try:
        return _Parser(expr).parse()
    except MixedFieldError as e:
        raise ParseError(f"{expr!r} mixes quadratic fields: {e}") from e


def parse_irrational(expr: str) -> QuadElem:
    """parse_quad, rejecting rational results such as "sqrt(4)"."""
    return parse_quad(expr).require_irrational(expr)
