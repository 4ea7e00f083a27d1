import math
from decimal import Decimal
from fractions import Fraction

import pytest

from src import numeric_oracle
from src.errors import DomainError, ResonanceError
from src.functional_equations import phi, secant_value_lrr
from src.numeric_oracle import (
    FixedPointReal,
    eta_h_series,
    exact_residual,
    frac_multiple,
    lerch_fe_residual,
    psi_eta_residual,
    psi_series,
    retry_with_precision,
    xi_series,
)
from src.quad_field import QuadElem, parse_quad

SQRT2 = parse_quad("sqrt(2)")
GOLDEN = parse_quad("(1+sqrt(5))/2")


def test_frac_multiple_examples():
    assert float(frac_multiple(SQRT2, 1, 64)) == pytest.approx(math.sqrt(2) - 1, abs=1e-15)
    # 169 sqrt(2) = sqrt(57122) and 239^2 = 57121
    assert float(frac_multiple(SQRT2, 169, 64)) == pytest.approx(0.0020919, abs=1e-6)
    quarter = frac_multiple(QuadElem.rational(Fraction(1, 4)), 3, 32)
    assert Fraction(quarter.mantissa, 1 << quarter.scale_bits) == Fraction(3, 4)
    assert quarter.error_ulps == 0


def test_frac_multiple_accuracy():
    # 10^6 sqrt(2) = 1414213.562373095048801688...
    value = frac_multiple(SQRT2, 10 ** 6, 80)
    assert value.to_decimal(20) == Decimal("0.56237309504880168872")


@pytest.mark.parametrize("alpha", [SQRT2, SQRT2 / 2, parse_quad("(1+sqrt(5))/2"), parse_quad("1/3 - 2*sqrt(7)/5")])
def test_frac_multiple_negates(alpha):
    one = 1 << (96 + numeric_oracle.GUARD_BITS)
    for n in (1, 2, 7, 169, 985):
        plus = frac_multiple(alpha, n, 96).mantissa
        minus = frac_multiple(-alpha, n, 96).mantissa
        assert plus + minus == one


def test_frac_multiple_matches_exact_floor():
    # 1/3 + 2 sqrt(7)/5: floor the combined numerator, not each part separately
    alpha = parse_quad("1/3 + 2*sqrt(7)/5")
    scale = 32 + numeric_oracle.GUARD_BITS
    for n in (1, 5, 12, 301):
        expected = (n * (1 << scale) * 5 + math.isqrt(7 * (n * 2 * 3 * (1 << scale)) ** 2)) // 15
        assert frac_multiple(alpha, n, 32).mantissa == expected % (1 << scale)


def test_psi_is_even_bitwise_with_denominator():
    half = SQRT2 / 2
    assert psi_series(-half, 2, N=500, prec_bits=64).value == psi_series(half, 2, N=500, prec_bits=64).value


def test_frac_multiple_rejects_low_precision():
    with pytest.raises(ValueError):
        frac_multiple(SQRT2, 1, 8)


def test_fixed_point_arithmetic():
    a = FixedPointReal(3, 4, 1)
    b = FixedPointReal(5, 4, 2)
    assert (a + b) == FixedPointReal(8, 4, 3)
    assert (a - b).mantissa == -2
    assert float(a) == 3 / 16
    assert a.scaled(2) == FixedPointReal(6, 4, 2)
    with pytest.raises(ValueError):
        a + FixedPointReal(1, 5)


def test_series_are_deterministic():
    first = psi_series(SQRT2, 1, N=500, prec_bits=64)
    second = psi_series(SQRT2, 1, N=500, prec_bits=64)
    assert first.value == second.value
    assert first.terms_used == 500


def test_psi_is_even_bitwise():
    assert psi_series(-SQRT2, 1, N=1000, prec_bits=96).value == psi_series(SQRT2, 1, N=1000, prec_bits=96).value


def test_xi_is_one_periodic_bitwise():
    assert xi_series(GOLDEN + 1, 1, N=1000, prec_bits=96).value == xi_series(GOLDEN, 1, N=1000, prec_bits=96).value


def test_parallel_chunks_are_bit_identical(monkeypatch):
    serial = psi_series(SQRT2, 2, N=3000, prec_bits=96, workers=1)
    monkeypatch.setattr(numeric_oracle, "PARALLEL_THRESHOLD", 100)
    parallel = psi_series(SQRT2, 2, N=3000, prec_bits=96, workers=3)
    assert parallel.value == serial.value
    assert parallel.oscillation == serial.oscillation
    assert parallel.max_term_magnitude == serial.max_term_magnitude


def test_series_reports_diagnostics():
    result = psi_series(SQRT2, 1, N=2000, prec_bits=96)
    assert result.max_term_magnitude > 0
    assert result.oscillation > 0
    assert "[1800, 2000]" in result.tail_note
    assert result.error_bound <= 2000 * 2.0 ** (-96 + 8)


def test_resonance_is_refused():
    # 1393^2 - 2 * 985^2 = 1, so sin(pi 985 sqrt(2)) ~ 1.1e-3 < 2^-8
    with pytest.raises(ResonanceError):
        xi_series(SQRT2, 1, N=1000, prec_bits=16)


def test_retry_doubles_precision():
    robust = retry_with_precision()(xi_series)
    result = robust(SQRT2, 1, N=1000, prec_bits=16)
    assert result.value.scale_bits == 32


def test_retry_gives_up():
    calls = []

    @retry_with_precision(max_retries=3)
    def always_resonant(prec_bits=None):
        calls.append(prec_bits)
        raise ResonanceError("too close")

    with pytest.raises(ResonanceError):
        always_resonant(prec_bits=20)
    assert calls == [20, 40, 80]


def test_series_reject_bad_input():
    with pytest.raises(DomainError):
        psi_series(QuadElem.rational(2), 1, N=10)
    with pytest.raises(DomainError):
        xi_series(SQRT2, 0, N=10)
    with pytest.raises(ValueError):
        psi_series(SQRT2, 1, N=0)


def test_eta_series_is_real_at_quarter():
    result = eta_h_series(2 * SQRT2, 1, Fraction(1, 4), 0, N=2000, prec_bits=128)
    assert abs(result.imag.to_decimal(10)) < Decimal("1e-20")


@pytest.mark.parametrize("k", [1, 2])
def test_psi_eta_identity(k):
    assert psi_eta_residual(SQRT2, k, N=2000, prec_bits=128) < Decimal("1e-10")


def test_psi_k2_matches_exact_value():
    value = secant_value_lrr(SQRT2, 2).value
    series = psi_series(SQRT2, 2, N=5000, prec_bits=96)
    assert exact_residual(value, 2, series) < Decimal("1e-5")


def test_lerch_exactly_one_sign_fits():
    residual = lerch_fe_residual(SQRT2, 2, N=5000, prec_bits=128)
    fitting, other = sorted([residual.plus, residual.minus])
    assert fitting < Decimal("1e-3")
    expected_other = 2 * (2 * math.pi) ** 5 * abs(float(phi(SQRT2, 5)))
    assert float(other) == pytest.approx(expected_other, rel=1e-3)
    assert residual.fitting_sign == (1 if residual.plus < residual.minus else -1)


def test_lerch_requires_positive_alpha():
    with pytest.raises(DomainError):
        lerch_fe_residual(-SQRT2, 1, N=10)


@pytest.mark.slow
def test_psi_sqrt2_conditional_convergence():
    series = psi_series(SQRT2, 1, N=100_000, prec_bits=128)
    assert abs(float(series.value) + math.pi ** 2 / 3) < 5e-2


@pytest.mark.slow
@pytest.mark.parametrize("k", [1, 2])
def test_psi_eta_identity_full_length(k):
    assert psi_eta_residual(SQRT2, k, N=100_000, prec_bits=128) < Decimal("1e-4")


@pytest.mark.slow
def test_xi_golden_sign_and_size():
    series = xi_series(GOLDEN, 1, N=100_000, prec_bits=128)
    value = float(series.value)
    assert -0.32 < value < -0.30
    assert value == pytest.approx(-(2 * math.pi) ** 3 * math.sqrt(5) / 1800, abs=1e-3)


@pytest.mark.slow
def test_lerch_full_length():
    residual = lerch_fe_residual(SQRT2, 2, N=100_000, prec_bits=128)
    assert min(residual.plus, residual.minus) < Decimal("1e-3")


@pytest.mark.parametrize("series", [psi_series, xi_series])
def test_error_bound_covers_low_precision_sum(series):
    low = series(SQRT2, 2, N=300, prec_bits=64)
    high = series(SQRT2, 2, N=300, prec_bits=192)
    gap = abs(Fraction(low.value.mantissa, 1 << 64) - Fraction(high.value.mantissa, 1 << 192))
    assert gap <= Fraction(low.value.error_ulps, 1 << 64) + Fraction(high.value.error_ulps, 1 << 192)
