from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

from src.errors import DomainError, MixedFieldError, ParseError
from src.quad_field import QuadElem, parse_irrational, parse_quad, squarefree_decomposition

FIELDS = [2, 3, 5, 6, 7, 10, 13]


@st.composite
def st_quad(draw, D=None, nonzero=False):
    D = draw(st.sampled_from(FIELDS)) if D is None else D
    x = draw(st.fractions(min_value=-50, max_value=50, max_denominator=60))
    y = draw(st.fractions(min_value=-50, max_value=50, max_denominator=60))
    if nonzero and not x and not y:
        y = Fraction(1)
    return QuadElem(x, y, D)


@st.composite
def st_pair(draw):
    D = draw(st.sampled_from(FIELDS))
    return draw(st_quad(D=D)), draw(st_quad(D=D, nonzero=True))


@pytest.mark.parametrize("expr, expected", [
    ("sqrt(2)", (0, 1, 2)),
    ("(1+sqrt(5))/2", (Fraction(1, 2), Fraction(1, 2), 5)),
    ("sqrt(8)", (0, 2, 2)),
    ("1/2 - 3/4*sqrt(7)", (Fraction(1, 2), Fraction(-3, 4), 7)),
    ("−sqrt(3) + 2", (2, -1, 3)),
    ("3 + 2*sqrt(2)", (3, 2, 2)),
])
def test_parse_examples(expr, expected):
    value = parse_quad(expr)
    assert (value.x, value.y, value.D) == tuple(Fraction(v) if i < 2 else v for i, v in enumerate(expected))


@pytest.mark.parametrize("expr", ["", "sqrt(", "2 +", "sqrt(x)", "1 $ 2", "(1+sqrt(2)", "4/0"])
def test_parse_rejects_malformed(expr):
    with pytest.raises(ParseError):
        parse_quad(expr)


def test_parse_rejects_mixed_fields():
    with pytest.raises(ParseError):
        parse_quad("sqrt(2) + sqrt(3)")


def test_parse_irrational_rejects_perfect_square():
    assert parse_quad("sqrt(4)") == 2
    with pytest.raises(DomainError):
        parse_irrational("sqrt(4)")


def test_squarefree_decomposition():
    assert squarefree_decomposition(8) == (2, 2)
    assert squarefree_decomposition(72) == (6, 2)
    assert squarefree_decomposition(49) == (7, 1)
    with pytest.raises(DomainError):
        squarefree_decomposition(0)


def test_non_squarefree_radicand_rejected():
    with pytest.raises(DomainError):
        QuadElem(0, 1, 8)
    with pytest.raises(DomainError):
        QuadElem(0, 1, 1)


def test_field_op_examples():
    u = parse_quad("3+2*sqrt(2)")
    assert u * u.conj() == 1
    assert parse_quad("1+sqrt(2)").inverse() == parse_quad("-1+sqrt(2)")
    assert parse_quad("1+sqrt(2)").norm() == -1
    assert u.trace() == 6
    assert u ** -2 == (u * u).inverse()


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        QuadElem.rational(0, 2).inverse()
    with pytest.raises(ZeroDivisionError):
        QuadElem.sqrt(2) / 0


def test_mixed_fields_rejected():
    with pytest.raises(MixedFieldError):
        QuadElem.sqrt(2) + QuadElem.sqrt(3)


def test_rationals_join_any_field():
    half = QuadElem.rational(Fraction(1, 2))
    value = half + QuadElem.sqrt(5) / 2
    assert value.D == 5
    assert value == parse_quad("(1+sqrt(5))/2")


@pytest.mark.parametrize("expr, sign, floor", [
    ("sqrt(2)", 1, 1),
    ("-sqrt(2)", -1, -2),
    ("17-12*sqrt(2)", 1, 0),
    ("12*sqrt(2)-17", -1, -1),
    ("(1-sqrt(5))/2", -1, -1),
    ("0", 0, 0),
])
def test_sign_floor_examples(expr, sign, floor):
    value = parse_quad(expr)
    assert value.sign() == sign
    assert value.floor() == floor


@settings(max_examples=200)
@given(st_quad())
def test_floor_brackets_value(u):
    f = u.floor()
    assert f <= u < f + 1


@settings(max_examples=200)
@given(st_pair())
def test_division_inverts_multiplication(pair):
    u, v = pair
    assert (u * v) / v == u
    assert u - v + v == u


@settings(max_examples=200)
@given(st_quad(), st_quad())
def test_norm_and_trace_are_galois_invariants(u, v):
    if u.D != v.D:
        v = QuadElem(v.x, v.y, u.D)
    assert (u * v).norm() == u.norm() * v.norm()
    assert (u + v).trace() == u.trace() + v.trace()
    assert (u * v).conj() == u.conj() * v.conj()


@settings(max_examples=200)
@given(st_quad())
def test_printed_value_reparses(u):
    assert parse_quad(str(u)) == u


@given(st_quad(), st_quad())
def test_ordering_matches_floats(u, v):
    if u.D != v.D:
        v = QuadElem(v.x, v.y, u.D)
    if abs(float(u) - float(v)) > 1e-9:
        assert (u < v) == (float(u) < float(v))
