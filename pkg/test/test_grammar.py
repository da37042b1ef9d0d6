"""
Unit Tests for the Grammar Service
"""
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from spk_app.errors import GrammarError, UnknownNameError
from spk_app.model.codec import parse
from spk_app.model.polynomial import Polynomial
from spk_app.service.grammar import BUILTIN_GRAMMARS, builtin, derive, derive_iter, derive_powers, make_grammar

GXYZ = builtin("gxyz")

small_polys = st.lists(
    st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2), st.integers(-3, 3)), max_size=4
).map(lambda terms: Polynomial.total(Polynomial.monomial({"x": a, "y": b, "z": c}, k) for a, b, c, k in terms))


@given(small_polys, small_polys)
@settings(max_examples=50, deadline=None)
def test_derivative_obeys_leibniz(p, q):
    """D(pq) = D(p) q + p D(q)."""
    assert derive(GXYZ, p * q) == derive(GXYZ, p) * q + p * derive(GXYZ, q)


def test_gxyz_first_powers():
    assert derive_iter(GXYZ, GXYZ.seed, 1) == parse("x*y*z")
    assert derive_iter(GXYZ, GXYZ.seed, 2) == parse("x*y^2*z^2 + x^2*y*z^2 + x^2*y^2*z")


def test_h_grammar_second_power():
    h = builtin("H")
    assert derive_iter(h, h.seed, 2) == parse("2*u*w^2 + v^2*w")


def test_variables_without_rules_are_constants():
    g = make_grammar("toy", {"a": "a*b"}, "a")
    assert derive(g, parse("3*c")) == Polynomial.zero()
    assert derive(g, parse("a^2*c")) == parse("2*a^2*b*c")


def test_derive_powers_lists_every_step():
    powers = derive_powers(GXYZ, GXYZ.seed, 3)
    assert len(powers) == 4
    assert powers[0] == GXYZ.seed
    assert powers[3] == derive(GXYZ, powers[2])


def test_power_zero_returns_seed():
    assert derive_iter(GXYZ, parse("x + y"), 0) == parse("x + y")


def test_negative_exponent_is_rejected():
    with pytest.raises(GrammarError):
        derive(GXYZ, Polynomial.var("x", -1))


def test_negative_power_is_rejected():
    with pytest.raises(GrammarError):
        derive_iter(GXYZ, GXYZ.seed, -1)


def test_unknown_grammar():
    with pytest.raises(UnknownNameError):
        builtin("nope")


def test_builtin_registry_is_read_only():
    assert {"lemma21", "gprime", "g1", "g2", "g3", "gxyz", "H", "I", "J"} <= set(BUILTIN_GRAMMARS)
    with pytest.raises(TypeError):
        BUILTIN_GRAMMARS["extra"] = GXYZ
