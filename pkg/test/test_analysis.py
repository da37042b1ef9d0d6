"""
Unit Tests for the Real Root Analysis Service
"""
from fractions import Fraction

import pytest

from spk_app.errors import NotRealRootedError, PolynomialError
from spk_app.model.codec import parse
from spk_app.model.polynomial import Polynomial
from spk_app.model.records import InterlaceVerdict
from spk_app.service.analysis import (
    interlace_verdict,
    is_real_rooted,
    isolate_roots,
    root_multiplicity,
    sturm_count,
    theorem_zeros_report,
    to_sympy,
    zero_checks,
)


def test_sturm_count_windows():
    p = parse("x^2 - 1")
    assert sturm_count(p, Fraction(-2), Fraction(0)) == 1
    assert sturm_count(p) == 2
    assert sturm_count(parse("x^2 + 1")) == 0


def test_sturm_count_window_is_half_open():
    p = parse("x + 1")
    assert sturm_count(p, Fraction(-1), Fraction(0)) == 0
    assert sturm_count(p, Fraction(-2), Fraction(-1)) == 1
    assert sturm_count(p, Fraction(0), Fraction(-1)) == 0


def test_sturm_count_ignores_multiplicity():
    assert sturm_count(parse("(1 + x)^3*(x - 2)")) == 2


def test_root_multiplicity():
    assert root_multiplicity(parse("(1 + x)^3"), Fraction(-1)) == 3
    assert root_multiplicity(parse("(1 + x)^3"), Fraction(0)) == 0
    assert root_multiplicity(parse("(2*x - 1)^2*x"), Fraction(1, 2)) == 2


def test_isolate_exact_roots_with_multiplicity():
    report = isolate_roots(parse("x*(1 + x)^2"), label="demo")
    assert report.degree == 3
    assert report.real_root_count == 3
    assert report.real_rooted
    assert [(r.lo, r.multiplicity, r.exact) for r in report.roots] == [(-1, 2, True), (0, 1, True)]
    assert report.window_counts == {"(-inf,-1]": 1, "(-1,0]": 1, "(0,inf)": 0}
    assert report.to_dict()["roots"][0] == {"root": "-1", "multiplicity": 2}


def test_isolate_irrational_roots():
    report = isolate_roots(parse("x^2 - 2"))
    assert report.real_root_count == 2
    low, high = report.roots
    assert not low.exact and low.lo < low.hi
    assert low.lo <= Fraction(-1414, 1000) and low.hi >= Fraction(-1415, 1000)
    assert high.lo >= 0 and high.hi > 1
    assert report.window_counts == {"(-inf,-1]": 1, "(-1,0]": 0, "(0,inf)": 1}


def test_isolate_reports_missing_real_roots():
    report = isolate_roots(parse("x^2 + x + 1"))
    assert report.real_root_count == 0
    assert not report.real_rooted


def test_constant_has_no_roots():
    report = isolate_roots(Polynomial.constant(5))
    assert report.degree == 0
    assert report.roots == ()


def test_to_sympy_rejects_bad_input():
    with pytest.raises(PolynomialError):
        to_sympy(parse("x + y"))
    with pytest.raises(PolynomialError):
        to_sympy(Polynomial.zero())


def test_is_real_rooted():
    assert is_real_rooted(parse("(1 + x)^3"))
    assert not is_real_rooted(parse("x^2 + 1"))


@pytest.mark.parametrize("p, q, verdict", [
    ("x + 1", "(x + 1)*(x + 2)", InterlaceVerdict.INTERLACES),
    ("x + 3", "(x + 1)*(x + 2)", InterlaceVerdict.NEITHER),
    ("(x + 2)*(x + 4)", "(x + 1)*(x + 3)", InterlaceVerdict.ALTERNATES_LEFT),
    ("(x + 1)*(x + 3)", "(x + 2)*(x + 4)", InterlaceVerdict.NEITHER),
    ("2", "x + 1", InterlaceVerdict.VACUOUS),
    ("x + 1", "3", InterlaceVerdict.VACUOUS),
    ("2", "(x + 1)*(x + 2)", InterlaceVerdict.VACUOUS),
])
def test_interlace_verdict(p, q, verdict):
    assert interlace_verdict(parse(p), parse(q)) is verdict


def test_interlace_needs_real_roots():
    with pytest.raises(NotRealRootedError):
        interlace_verdict(parse("x^2 + 1"), parse("x + 1"))


@pytest.mark.parametrize("n", range(1, 11))
def test_zero_structure_holds(n):
    row = zero_checks(n)
    assert row.passed, row.to_dict()


def test_theorem_report_range():
    rows = theorem_zeros_report(4)
    assert [row.n for row in rows] == [1, 2, 3, 4]
    with pytest.raises(PolynomialError):
        theorem_zeros_report(0)
