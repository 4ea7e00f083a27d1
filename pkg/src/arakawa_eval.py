"""Exact special values of H(alpha, 1-2k, p, q) and of the secant zeta function
through the transformation formula for generalized eta-functions.

    H(alpha, 1-2k, p, q) / pi^{2k}
        = 2^{2k} (-1)^k / (beta^{2k-1} - 1)
          * sum_{j=1..c} sum_{l=0..2k+1} b_l((j - {p})/c) b_{2k+1-l}({(j d + rho)/c}) (-beta)^{l-1}

and psi(alpha/2, 2k) = 2 H(alpha, 1-2k, 1/4, 0).
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from . import config
from .errors import DomainError, ResourceCapError
from .exact_arith import bernoulli_poly_coefficients, brace
from .modular_units import find_transfer_matrix
from .quad_field import QuadElem

logger = logging.getLogger(__name__)

# Below this many j-terms a process pool costs more than it saves
PARALLEL_THRESHOLD = 20_000


class MethodTag(str, Enum):
    ARAKAWA = 'arakawa'
    LRR = 'lrr'


@dataclass(frozen=True)
class SpecialValue:
    """value = psi(alpha, 2k) / pi^{2k}, an element of the field of alpha."""
    alpha: QuadElem
    k: int
    value: QuadElem
    method: MethodTag


def _scaled_coefficients(L: int) -> Tuple[int, Tuple[Tuple[int, ...], ...]]:
    """Common denominator Q and integer rows Q * coeff(b_l) for l = 0..L."""
    rows = [bernoulli_poly_coefficients(l) for l in range(L + 1)]
    Q = math.lcm(*(c.denominator for row in rows for c in row))
    return Q, tuple(tuple(int(c * Q) for c in row) for row in rows)


def _homogeneous(row: Sequence[int], t: int, m_powers: Sequence[int]) -> int:
    """sum_i row[i] t^i M^{deg-i}, i.e. Q * M^deg * b_deg(t / M)."""
    deg = len(row) - 1
    acc = row[deg]
    for i in range(deg - 1, -1, -1):
        acc = acc * t + row[i] * m_powers[deg - i]
    return acc


def _partial_sums(args) -> List[int]:
    """S_l = sum over j in [start, stop) of P_l(t_j) * P_{L-l}(u_j)."""
    start, stop, N, p_shift, d, rho_shift, M, rows = args
    L = len(rows) - 1
    m_powers = [M ** e for e in range(L + 1)]
    sums = [0] * (L + 1)
    for j in range(start, stop):
        t = j * N - p_shift
        u = (j * d * N + rho_shift) % M
        at_t = [_homogeneous(rows[l], t, m_powers) for l in range(L + 1)]
        at_u = [_homogeneous(rows[l], u, m_powers) for l in range(L + 1)]
        for l in range(L + 1):
            sums[l] += at_t[l] * at_u[L - l]
    return sums


def _chunks(c: int, parts: int) -> List[Tuple[int, int]]:
    size = -(-c // parts)
    return [(lo, min(lo + size, c + 1)) for lo in range(1, c + 1, size)]


def h_special_value(alpha: QuadElem, k: int, p, q, multiple: int = 1,
                    c_cap: Optional[int] = None, workers: Optional[int] = None) -> QuadElem:
    """H(alpha, 1-2k, p, q) / pi^{2k} as an exact element of Q(alpha)."""
    alpha.require_irrational()
    if k < 1:
        raise DomainError(f"k must be >= 1, got {k}")
    p, q = Fraction(p), Fraction(q)
    c_cap = config.C_CAP if c_cap is None else c_cap
    workers = config.WORKERS if workers is None else workers

    transfer = find_transfer_matrix(alpha, p, q, multiple=multiple)
    V, beta = transfer.V, transfer.beta
    c, d = V.c, V.d
    if c > c_cap:
        raise ResourceCapError(
            f"transfer matrix for alpha={alpha} has c={c} > cap {c_cap}; use the lrr method instead"
        )
    logger.info(f"H at alpha={alpha}, k={k}, (p,q)=({p},{q}): m={transfer.m}, c={c}")

    L = 2 * k + 1
    p_brace = brace(p)
    N = math.lcm(p_brace.denominator, transfer.rho.denominator)
    M = c * N
    Q, rows = _scaled_coefficients(L)
    p_shift = int(p_brace * N)
    rho_shift = int(transfer.rho * N)

    if workers > 1 and c >= PARALLEL_THRESHOLD:
        jobs = [(lo, hi, N, p_shift, d, rho_shift, M, rows) for lo, hi in _chunks(c, workers * 4)]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            partials = list(pool.map(_partial_sums, jobs))
        sums = [sum(column) for column in zip(*partials)]
    else:
        sums = _partial_sums((1, c + 1, N, p_shift, d, rho_shift, M, rows))

    neg_beta = -beta
    power = neg_beta.inverse()
    total = QuadElem.rational(0, alpha.D)
    for s in sums:
        total = total + s * power
        power = power * neg_beta
    total = total / (Q * Q * M ** L)

    prefactor = Fraction(2 ** (2 * k) * (-1) ** k)
    return prefactor * total / (beta ** (2 * k - 1) - 1)


def secant_value_arakawa(alpha0: QuadElem, k: int, multiple: int = 1,
                         c_cap: Optional[int] = None, workers: Optional[int] = None) -> SpecialValue:
    """psi(alpha0, 2k) / pi^{2k} = 2 H(2 alpha0, 1-2k, 1/4, 0) / pi^{2k}."""
    alpha0.require_irrational()
    value = 2 * h_special_value(2 * alpha0, k, Fraction(1, 4), Fraction(0),
                                multiple=multiple, c_cap=c_cap, workers=workers)
    return SpecialValue(alpha=alpha0, k=k, value=value, method=MethodTag.ARAKAWA)
