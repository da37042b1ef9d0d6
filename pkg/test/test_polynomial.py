"""
Unit Tests for the Polynomial Model

Ring axioms and derivative rules are checked as properties over random
polynomials; the remaining tests pin down edge cases.
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spk_app.errors import PolynomialError
from spk_app.model.polynomial import (
    Polynomial,
    coeff_extract,
    diff,
    eval_at,
    gamma_decompose,
    make_monomial,
    rename,
    substitute,
)

VARS = ("x", "y", "z")

exponents = st.tuples(*(st.integers(0, 3) for _ in VARS)).map(lambda e: dict(zip(VARS, e)))
polynomials = st.lists(st.tuples(exponents, st.integers(-5, 5)), max_size=5).map(
    lambda terms: Polynomial.total(Polynomial.monomial(m, c) for m, c in terms)
)

x, y, z = (Polynomial.var(v) for v in VARS)


@given(polynomials, polynomials, polynomials)
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    """Addition and multiplication are associative, commutative and distributive."""
    assert (p + q) + r == p + (q + r)
    assert p + q == q + p
    assert (p * q) * r == p * (q * r)
    assert p * q == q * p
    assert p * (q + r) == p * q + p * r
    assert p - p == Polynomial.zero()
    assert p * 1 == p


@given(polynomials, polynomials)
@settings(max_examples=60, deadline=None)
def test_leibniz_rule(p, q):
    """d(pq) = p dq + q dp in every variable."""
    for v in VARS:
        assert diff(p * q, v) == p * diff(q, v) + q * diff(p, v)


@given(polynomials, st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=60, deadline=None)
def test_substitution_is_evaluation(p, a, b, c):
    """Substituting integers then reading the constant equals exact evaluation."""
    point = {"x": a, "y": b, "z": c}
    assert substitute(p, point).constant_term == eval_at(p, point)


def test_zero_coefficients_are_discarded():
    p = Polynomial({make_monomial({"x": 1}): 0, (): 3})
    assert p == 3
    assert dict(p.terms) == {(): 3}
    assert (x - x).is_zero


def test_monomial_drops_zero_exponents():
    assert make_monomial({"y": 2, "x": 0, "a": 1}) == (("a", 1), ("y", 2))


def test_invalid_variable_name_rejected():
    with pytest.raises(PolynomialError):
        Polynomial.var("1x")


def test_non_integer_coefficient_rejected():
    with pytest.raises(PolynomialError):
        Polynomial({(): 1.5})


def test_laurent_power_of_unit_monomial():
    inv = (x * y) ** -2
    assert inv.is_laurent
    assert inv * (x * y) ** 2 == 1
    assert (-x) ** -1 == -Polynomial.var("x", -1)


def test_negative_power_of_non_unit_fails():
    with pytest.raises(PolynomialError):
        (2 * x) ** -1
    with pytest.raises(PolynomialError):
        (1 + x) ** -1


def test_degree_and_coefficients():
    p = 2 + 6 * x + 4 * x ** 2
    assert p.degree() == 2
    assert p.coefficients("x") == [2, 6, 4]
    assert Polynomial.zero().degree() == -1
    assert Polynomial.zero().coefficients("x") == []
    assert (x * y ** 2).degree("y") == 2


def test_coefficients_reject_other_variables():
    with pytest.raises(PolynomialError):
        (x + y).coefficients("x")


def test_exact_division():
    assert (4 + 6 * x).exact_div(2) == 2 + 3 * x
    with pytest.raises(PolynomialError):
        (3 + x).exact_div(2)
    with pytest.raises(PolynomialError):
        x.exact_div(0)


def test_substitute_is_simultaneous():
    assert substitute(x * y ** 2, {"x": y, "y": x}) == y * x ** 2
    assert rename(x + y, {"x": "y"}) == 2 * y


def test_substitute_negative_power_needs_unit_image():
    p = Polynomial.var("x", -1)
    assert substitute(p, {"x": y * z}) == (y * z) ** -1
    with pytest.raises(PolynomialError):
        substitute(p, {"x": 1 + y})


def test_eval_at_is_exact():
    assert eval_at(1 + x + x ** 2, {"x": Fraction(1, 2)}) == Fraction(7, 4)
    with pytest.raises(PolynomialError):
        eval_at(x + y, {"x": 1})
    with pytest.raises(PolynomialError):
        eval_at(Polynomial.var("x", -1), {"x": 0})


def test_diff_of_negative_power_fails():
    with pytest.raises(PolynomialError):
        diff(Polynomial.var("x", -1), "x")


def test_coeff_extract_groups_by_chosen_variables():
    p = x * y + 3 * x * z + y
    groups = coeff_extract(p, ["x"])
    assert groups[(("x", 1),)] == y + 3 * z
    assert groups[()] == y


def test_from_counts_aggregates():
    p = Polynomial.from_counts(["x", "y"], {(1, 0): 2, (0, 1): 3, (1, 1): 1})
    assert p == 2 * x + 3 * y + x * y


def test_gamma_decompose_palindromic():
    # 1 + 4x + x^2 = (1+x)^2 + 2x
    assert gamma_decompose(1 + 4 * x + x ** 2, 3) == [1, 2]
    assert gamma_decompose(Polynomial.constant(1), 1) == [1]


def test_gamma_decompose_rejects_non_palindromic():
    with pytest.raises(PolynomialError):
        gamma_decompose(1 + 2 * x, 2)
    with pytest.raises(PolynomialError):
        gamma_decompose(x ** 3, 2)


def test_constant_hash_matches_int():
    assert hash(Polynomial.constant(7)) == hash(7)
    assert {Polynomial.constant(7): "seven"}[7] == "seven"
