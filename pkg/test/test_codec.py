"""
Unit Tests for the Polynomial Text Codec

Covers the canonical term order, sign handling and parser error positions.
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spk_app.errors import PolynomialParseError
from spk_app.model.codec import parse, serialize
from spk_app.model.polynomial import Polynomial

x, y = Polynomial.var("x"), Polynomial.var("y")

laurent_polynomials = st.lists(
    st.tuples(st.integers(-2, 3), st.integers(0, 3), st.integers(-9, 9)), max_size=6
).map(lambda terms: Polynomial.total(Polynomial.monomial({"x": a, "y": b}, c) for a, b, c in terms))


@pytest.mark.parametrize("polynomial, text", [
    (Polynomial.zero(), "0"),
    (Polynomial.constant(1), "1"),
    (Polynomial.constant(-4), "-4"),
    (1 + y, "1 + y"),
    (x ** 2 * y - 3, "-3 + x^2*y"),
    (y ** 2 + x * y + x ** 2, "x^2 + x*y + y^2"),
    (1 + 3 * y + 3 * x * y + x * y ** 2, "1 + 3*y + 3*x*y + x*y^2"),
    (-x - 2 * y, "-x - 2*y"),
    (Polynomial.var("x", -2) + 1, "x^-2 + 1"),
])
def test_serialize_canonical_form(polynomial, text):
    assert serialize(polynomial) == text


@given(laurent_polynomials)
@settings(max_examples=80, deadline=None)
def test_parse_inverts_serialize(p):
    assert parse(serialize(p)) == p


def test_parse_accepts_free_form():
    assert parse("(1+x)^3") == 1 + 3 * x + 3 * x ** 2 + x ** 3
    assert parse(" - x*y + 2 ") == 2 - x * y
    assert parse("x^-1*x") == 1
    assert parse("+y") == y


@pytest.mark.parametrize("text, position", [
    ("", 0),
    ("2x", 1),
    ("x +", 3),
    ("x ^ y", 4),
    ("(1 + x", 6),
    ("x $ 1", 2),
])
def test_parse_error_positions(text, position):
    with pytest.raises(PolynomialParseError) as exc_info:
        parse(text)
    assert exc_info.value.position == position


def test_parse_error_for_non_unit_negative_power():
    with pytest.raises(PolynomialParseError) as exc_info:
        parse("(1+x)^-1")
    assert "position 7" in str(exc_info.value)
