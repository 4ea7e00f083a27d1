"""Deterministic high-precision summation of the secant, cotangent and
generalized eta series.

Fractional parts of n*alpha are formed exactly with integer square roots,
trigonometric values come from mpmath at the working precision, and every
term is rounded once to a fixed-point integer. Integer partial sums make the
result bit-identical for any chunking or worker count.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from decimal import Decimal
from fractions import Fraction
from functools import wraps
from typing import List, Optional, Tuple

from mpmath.ctx_mp import MPContext

from . import config
from .errors import DomainError, ResonanceError
from .exact_arith import angle
from .functional_equations import phi
from .quad_field import QuadElem

logger = logging.getLogger(__name__)

GUARD_BITS = 8
WORKING_GUARD_BITS = 32
# Below this many terms a process pool costs more than it saves
PARALLEL_THRESHOLD = 10_000


def _context(bits: int) -> MPContext:
    ctx = MPContext()
    ctx.prec = bits
    return ctx


@dataclass(frozen=True)
class FixedPointReal:
    """mantissa / 2^scale_bits, with an accumulated rounding error of error_ulps units."""
    mantissa: int
    scale_bits: int
    error_ulps: int = 0

    @classmethod
    def from_mpf(cls, ctx: MPContext, value, scale_bits: int, error_ulps: int = 1) -> 'FixedPointReal':
        return cls(int(ctx.nint(ctx.ldexp(value, scale_bits))), scale_bits, error_ulps)

    def _check(self, other: 'FixedPointReal'):
        if self.scale_bits != other.scale_bits:
            raise ValueError(f"scale mismatch: {self.scale_bits} vs {other.scale_bits}")

    def __add__(self, other: 'FixedPointReal') -> 'FixedPointReal':
        self._check(other)
        return FixedPointReal(self.mantissa + other.mantissa, self.scale_bits, self.error_ulps + other.error_ulps)

    def __neg__(self) -> 'FixedPointReal':
        return FixedPointReal(-self.mantissa, self.scale_bits, self.error_ulps)

    def __sub__(self, other: 'FixedPointReal') -> 'FixedPointReal':
        return self + (-other)

    def __abs__(self) -> 'FixedPointReal':
        return FixedPointReal(abs(self.mantissa), self.scale_bits, self.error_ulps)

    def scaled(self, factor: int) -> 'FixedPointReal':
        return FixedPointReal(self.mantissa * factor, self.scale_bits, self.error_ulps * abs(factor))

    @property
    def error_bound(self) -> float:
        return math.ldexp(self.error_ulps, -self.scale_bits)

    def to_mpf(self, ctx: MPContext):
        return ctx.ldexp(ctx.mpf(self.mantissa), -self.scale_bits)

    def to_decimal(self, digits: int = 30) -> Decimal:
        ctx = _context(max(self.scale_bits, self.mantissa.bit_length()) + 64)
        return Decimal(ctx.nstr(self.to_mpf(ctx), digits))

    def __float__(self):
        return math.ldexp(self.mantissa, -self.scale_bits) if self.mantissa.bit_length() < 1000 \
            else float(Fraction(self.mantissa, 1 << self.scale_bits))

    def __str__(self):
        return str(self.to_decimal(config.DECIMAL_DIGITS))


@dataclass(frozen=True)
class SeriesResult:
    value: FixedPointReal
    terms_used: int
    max_term_magnitude: Decimal
    oscillation: Decimal
    tail_note: str
    imag: Optional[FixedPointReal] = None

    @property
    def error_bound(self) -> float:
        return self.value.error_bound


@dataclass(frozen=True)
class LerchResidual:
    """Both sign conventions of xi(a) + a^{2k} xi(1/a) = +-(2 pi)^{2k+1} phi(a, 2k+1)."""
    plus: Decimal
    minus: Decimal
    fitting_sign: int


def frac_multiple(alpha: QuadElem, n: int, prec_bits: int) -> FixedPointReal:
    """{n * alpha} to prec_bits + GUARD_BITS bits; exact when alpha is rational."""
    if prec_bits < 16:
        raise ValueError(f"prec_bits must be >= 16, got {prec_bits}")
    scale = prec_bits + GUARD_BITS
    x, y = alpha.x, alpha.y
    one = 1 << scale
    if not y:
        numerator = n * x.numerator * one
        exact = numerator % x.denominator == 0
        return FixedPointReal((numerator // x.denominator) % one, scale, 0 if exact else 1)
    # work on the magnitude (y > 0) and mirror at the end so -alpha gives one - t exactly
    if y < 0:
        x, y = -x, -y
    root = math.isqrt(alpha.D * (n * y.numerator * x.denominator * one) ** 2)
    numerator = n * x.numerator * y.denominator * one + root
    fraction = (numerator // (x.denominator * y.denominator)) % one
    if alpha.y < 0:
        fraction = (one - fraction) % one
    return FixedPointReal(fraction, scale, 1)


# --- per-term evaluation (module level so worker processes can import it) ---

def _resonance(kind: str, n: int, prec_bits: int) -> ResonanceError:
    return ResonanceError(
        f"{kind} denominator below 2^-{prec_bits // 2} at n={n}; retry with more prec_bits"
    )


def _psi_term(ctx, half_alpha: QuadElem, n: int, k: int, prec_bits: int):
    # sec(pi n alpha) = sec(2 pi {n alpha / 2}); fold t -> min(t, 1-t) so psi(-alpha) = psi(alpha) bitwise
    t = frac_multiple(half_alpha, n, prec_bits)
    folded = min(t.mantissa, (1 << t.scale_bits) - t.mantissa)
    cos_value = ctx.cospi(2 * ctx.ldexp(ctx.mpf(folded), -t.scale_bits))
    if ctx.fabs(cos_value) < ctx.ldexp(1, -(prec_bits // 2)):
        raise _resonance('secant', n, prec_bits)
    return 1 / (cos_value * ctx.mpf(n) ** (2 * k)), None


def _xi_term(ctx, alpha: QuadElem, n: int, k: int, prec_bits: int):
    t = frac_multiple(alpha, n, prec_bits).to_mpf(ctx)
    sin_value = ctx.sinpi(t)
    if ctx.fabs(sin_value) < ctx.ldexp(1, -(prec_bits // 2)):
        raise _resonance('cotangent', n, prec_bits)
    return ctx.cospi(t) / (sin_value * ctx.mpf(n) ** (2 * k + 1)), None


def _eta_term(ctx, thetas: Tuple[QuadElem, QuadElem, QuadElem], n: int, k: int, prec_bits: int):
    alpha, first, second = thetas

    def e(theta: QuadElem):
        return ctx.expjpi(2 * frac_multiple(theta, n, prec_bits).to_mpf(ctx))

    denominator = 1 - e(alpha)
    if ctx.fabs(denominator) < ctx.ldexp(1, -(prec_bits // 2)):
        raise _resonance('eta', n, prec_bits)
    # e(s/2) = -1 at s = 1 - 2k
    term = (e(first) - e(second)) / (denominator * ctx.mpf(n) ** (2 * k))
    return term.real, term.imag


_TERMS = {'psi': _psi_term, 'xi': _xi_term, 'eta': _eta_term}


@dataclass(frozen=True)
class _ChunkSum:
    real: int
    imag: int
    max_term: int
    window_low: Optional[int]
    window_high: Optional[int]


def _sum_chunk(args) -> _ChunkSum:
    kind, payload, k, start, stop, prec_bits, window_start = args
    ctx = _context(prec_bits + WORKING_GUARD_BITS)
    term_fn = _TERMS[kind]
    real = imag = max_term = 0
    low = high = None
    for n in range(start, stop):
        re_part, im_part = term_fn(ctx, payload, n, k, prec_bits)
        re_fixed = int(ctx.nint(ctx.ldexp(re_part, prec_bits)))
        real += re_fixed
        max_term = max(max_term, abs(re_fixed))
        if im_part is not None:
            imag += int(ctx.nint(ctx.ldexp(im_part, prec_bits)))
        if n >= window_start:
            low = real if low is None else min(low, real)
            high = real if high is None else max(high, real)
    return _ChunkSum(real, imag, max_term, low, high)


def _chunks(N: int, parts: int) -> List[Tuple[int, int]]:
    size = -(-N // parts)
    return [(lo, min(lo + size, N + 1)) for lo in range(1, N + 1, size)]


def _run_series(kind: str, payload, k: int, N: int, prec_bits: int, workers: int, complex_valued: bool = False) -> SeriesResult:
    if N < 1:
        raise ValueError(f"N must be >= 1, got {N}")
    if prec_bits < 16:
        raise ValueError(f"prec_bits must be >= 16, got {prec_bits}")
    window_start = N - N // 10
    if workers > 1 and N >= PARALLEL_THRESHOLD:
        bounds = _chunks(N, workers * 4)
    else:
        bounds = [(1, N + 1)]
    jobs = [(kind, payload, k, lo, hi, prec_bits, window_start) for lo, hi in bounds]
    if len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunk_sums = list(pool.map(_sum_chunk, jobs))
    else:
        chunk_sums = [_sum_chunk(jobs[0])]

    # recombine strictly in index order
    real = imag = max_term = 0
    low = high = None
    for chunk in chunk_sums:
        if chunk.window_low is not None:
            low = real + chunk.window_low if low is None else min(low, real + chunk.window_low)
            high = real + chunk.window_high if high is None else max(high, real + chunk.window_high)
        real += chunk.real
        imag += chunk.imag
        max_term = max(max_term, chunk.max_term)

    # one rounding per term plus the evaluation error of the term itself
    error_ulps = 2 * N
    width = FixedPointReal((high - low) if low is not None else 0, prec_bits)
    note = (
        f"partial sums over n in [{window_start}, {N}] oscillate within {width.to_decimal(6)}; "
        "no certified tail bound is available"
    )
    logger.debug(f"{kind} series: N={N}, prec={prec_bits}, chunks={len(jobs)}")
    return SeriesResult(
        value=FixedPointReal(real, prec_bits, error_ulps),
        terms_used=N,
        max_term_magnitude=FixedPointReal(max_term, prec_bits).to_decimal(20),
        oscillation=width.to_decimal(20),
        tail_note=note,
        imag=FixedPointReal(imag, prec_bits, error_ulps) if complex_valued else None,
    )


def _defaults(N, prec_bits, workers):
    return (
        config.DEFAULT_TERMS if N is None else N,
        config.DEFAULT_PREC_BITS if prec_bits is None else prec_bits,
        config.WORKERS if workers is None else workers,
    )


def _check_k(k: int):
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")


def psi_series(alpha: QuadElem, k: int, N: Optional[int] = None, prec_bits: Optional[int] = None,
               workers: Optional[int] = None) -> SeriesResult:
    """sum_{n<=N} sec(pi n alpha) / n^{2k}."""
    alpha.require_irrational()
    _check_k(k)
    N, prec_bits, workers = _defaults(N, prec_bits, workers)
    return _run_series('psi', alpha / 2, k, N, prec_bits, workers)


def xi_series(alpha: QuadElem, k: int, N: Optional[int] = None, prec_bits: Optional[int] = None,
              workers: Optional[int] = None) -> SeriesResult:
    """sum_{n<=N} cot(pi n alpha) / n^{2k+1}."""
    alpha.require_irrational()
    _check_k(k)
    N, prec_bits, workers = _defaults(N, prec_bits, workers)
    return _run_series('xi', alpha, k, N, prec_bits, workers)


def eta_h_series(alpha: QuadElem, k: int, p, q, N: Optional[int] = None, prec_bits: Optional[int] = None,
                 workers: Optional[int] = None) -> SeriesResult:
    """H(alpha, 1-2k, p, q) = eta(alpha, s, <p>, q) + e(s/2) eta(alpha, s, <-p>, -q) summed to N."""
    alpha.require_irrational()
    _check_k(k)
    p, q = Fraction(p), Fraction(q)
    N, prec_bits, workers = _defaults(N, prec_bits, workers)
    thetas = (alpha, angle(p) * alpha + q, angle(-p) * alpha - q)
    return _run_series('eta', thetas, k, N, prec_bits, workers, complex_valued=True)


def lerch_fe_residual(alpha: QuadElem, k: int, N: Optional[int] = None, prec_bits: Optional[int] = None,
                      workers: Optional[int] = None) -> LerchResidual:
    """Residuals of both sign conventions of the cotangent reciprocity relation."""
    if not alpha > 0:
        raise DomainError(f"alpha must be positive, got {alpha}")
    N, prec_bits, workers = _defaults(N, prec_bits, workers)
    direct = xi_series(alpha, k, N, prec_bits, workers)
    reciprocal = xi_series(alpha.inverse(), k, N, prec_bits, workers)
    ctx = _context(prec_bits + WORKING_GUARD_BITS)
    lhs = direct.value.to_mpf(ctx) + alpha.to_mpf(ctx) ** (2 * k) * reciprocal.value.to_mpf(ctx)
    rhs = (2 * ctx.pi) ** (2 * k + 1) * phi(alpha, 2 * k + 1).to_mpf(ctx)
    plus = ctx.fabs(lhs - rhs)
    minus = ctx.fabs(lhs + rhs)
    fitting = 1 if plus < minus else -1
    logger.info(f"Lerch residuals at alpha={alpha}, k={k}: +{ctx.nstr(plus, 6)} / -{ctx.nstr(minus, 6)}")
    return LerchResidual(Decimal(ctx.nstr(plus, 20)), Decimal(ctx.nstr(minus, 20)), fitting)


def psi_eta_residual(alpha0: QuadElem, k: int, N: Optional[int] = None, prec_bits: Optional[int] = None,
                     workers: Optional[int] = None) -> Decimal:
    """|2 H(2 alpha0, 1-2k, 1/4, 0) - psi(alpha0, 2k)| from the two series."""
    N, prec_bits, workers = _defaults(N, prec_bits, workers)
    h = eta_h_series(2 * alpha0, k, Fraction(1, 4), Fraction(0), N, prec_bits, workers)
    psi = psi_series(alpha0, k, N, prec_bits, workers)
    return abs(h.value.scaled(2) - psi.value).to_decimal(20)


def exact_residual(value: QuadElem, k: int, series: SeriesResult) -> Decimal:
    """|value * pi^{2k} - series| for an exact psi(alpha, 2k) / pi^{2k}."""
    ctx = _context(series.value.scale_bits + WORKING_GUARD_BITS)
    gap = value.to_mpf(ctx) * ctx.pi ** (2 * k) - series.value.to_mpf(ctx)
    return Decimal(ctx.nstr(ctx.fabs(gap), 20))


def retry_with_precision(max_retries: int = 3, factor: int = 2):
    """Retry an oracle call on ResonanceError with prec_bits multiplied by ``factor``."""
    def decorator(f):
        @wraps(f)
        def wrapper(*args, **kwargs):
            prec_bits = kwargs.pop('prec_bits', None) or config.DEFAULT_PREC_BITS
            retries = 0
            while True:
                try:
                    return f(*args, prec_bits=prec_bits, **kwargs)
                except ResonanceError as e:
                    retries += 1
                    if retries >= max_retries:
                        logger.error(f"Failed after {max_retries} precision retries: {str(e)}")
                        raise
                    prec_bits *= factor
                    logger.warning(f"Retry {retries}/{max_retries} with prec_bits={prec_bits}: {str(e)}")
        return wrapper
    return decorator
