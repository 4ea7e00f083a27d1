from fractions import Fraction

import pytest

from src import arakawa_eval
from src.arakawa_eval import MethodTag, h_special_value, secant_value_arakawa
from src.errors import DomainError, ResourceCapError
from src.functional_equations import secant_value_lrr
from src.quad_field import QuadElem, parse_quad

QUARTER = Fraction(1, 4)

# transfer-matrix c (for 2*alpha, p = 1/4) stays below ~1000 for these
FAST_GRID = ["sqrt(2)", "sqrt(3)", "sqrt(5)", "sqrt(6)", "(1+sqrt(5))/2", "1+sqrt(2)", "1+sqrt(3)"]
SLOW_GRID = ["sqrt(7)", "sqrt(10)", "2*sqrt(2)"]


def test_h_special_value_two_sqrt2():
    assert h_special_value(parse_quad("2*sqrt(2)"), 1, QUARTER, 0) == Fraction(-1, 6)


def test_secant_headline_value():
    result = secant_value_arakawa(parse_quad("sqrt(2)"), 1)
    assert result.value == Fraction(-1, 3)
    assert result.method is MethodTag.ARAKAWA


@pytest.mark.parametrize("expr", ["-sqrt(2)", "sqrt(2)+2", "sqrt(2)-4"])
def test_secant_symmetries_sqrt2(expr):
    assert secant_value_arakawa(parse_quad(expr), 1).value == Fraction(-1, 3)


@pytest.mark.parametrize("expr", FAST_GRID)
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_methods_agree_exactly(expr, k):
    alpha = parse_quad(expr)
    assert secant_value_arakawa(alpha, k).value == secant_value_lrr(alpha, k).value


@pytest.mark.slow
@pytest.mark.parametrize("expr", SLOW_GRID)
@pytest.mark.parametrize("k", [1, 2, 3, 4])
def test_methods_agree_exactly_large_units(expr, k):
    alpha = parse_quad(expr)
    assert secant_value_arakawa(alpha, k).value == secant_value_lrr(alpha, k).value


@pytest.mark.parametrize("expr", FAST_GRID)
@pytest.mark.parametrize("k", [1, 2])
def test_evenness_and_period_two(expr, k):
    alpha = parse_quad(expr)
    value = secant_value_arakawa(alpha, k).value
    assert secant_value_arakawa(-alpha, k).value == value
    assert secant_value_arakawa(alpha + 2, k).value == value


@pytest.mark.parametrize("expr", ["1+sqrt(3)", "(1+sqrt(5))/2", "2+sqrt(2)"])
@pytest.mark.parametrize("k", [1, 2])
def test_galois_equivariance(expr, k):
    alpha = parse_quad(expr)
    assert secant_value_arakawa(alpha.conj(), k).value == secant_value_arakawa(alpha, k).value.conj()


@pytest.mark.parametrize("multiple", [1, 2, 3])
@pytest.mark.parametrize("k", [1, 2])
def test_independent_of_transfer_power(multiple, k):
    alpha = parse_quad("sqrt(2)")
    assert h_special_value(alpha, k, QUARTER, 0, multiple=multiple) == h_special_value(alpha, k, QUARTER, 0)


def test_independent_of_transfer_power_two_sqrt3():
    alpha = parse_quad("2*sqrt(3)")
    assert h_special_value(alpha, 1, QUARTER, 0, multiple=2) == h_special_value(alpha, 1, QUARTER, 0)


@pytest.mark.slow
def test_independent_of_transfer_power_large():
    two_sqrt2 = parse_quad("2*sqrt(2)")
    assert h_special_value(two_sqrt2, 1, QUARTER, 0, multiple=2) == Fraction(-1, 6)
    two_sqrt3 = parse_quad("2*sqrt(3)")
    assert h_special_value(two_sqrt3, 1, QUARTER, 0, multiple=3) == h_special_value(two_sqrt3, 1, QUARTER, 0)


def test_other_characteristics():
    # (p, q) = (1/4, 1/2) and (1/3, 0) go through the same machinery
    alpha = parse_quad("sqrt(2)")
    for p, q in [(QUARTER, Fraction(1, 2)), (Fraction(1, 3), Fraction(0))]:
        value = h_special_value(alpha, 1, p, q)
        assert value == h_special_value(alpha, 1, p, q, multiple=2)


def test_resource_cap():
    with pytest.raises(ResourceCapError, match="lrr"):
        secant_value_arakawa(parse_quad("sqrt(2)"), 1, c_cap=10)


def test_domain_errors():
    with pytest.raises(DomainError):
        h_special_value(QuadElem.rational(3), 1, QUARTER, 0)
    with pytest.raises(DomainError):
        h_special_value(parse_quad("sqrt(2)"), 0, QUARTER, 0)
    with pytest.raises(DomainError):
        h_special_value(parse_quad("sqrt(2)"), 1, Fraction(2), 0)


def test_parallel_sum_is_identical(monkeypatch):
    alpha = parse_quad("sqrt(6)")
    serial = secant_value_arakawa(alpha, 2, workers=1).value
    monkeypatch.setattr(arakawa_eval, "PARALLEL_THRESHOLD", 1)
    assert secant_value_arakawa(alpha, 2, workers=2).value == serial
