"""
Real Root Analysis Service

This module locates the real roots of univariate integer polynomials
exactly: Sturm-chain counting on half-open windows, multiplicities at
rational points, isolation of every real root with its multiplicity and the
interlacing relations between two real-rooted polynomials.

All arithmetic is rational; sympy provides square-free decomposition, the
Sturm chains and isolating intervals.
"""

from fractions import Fraction
from functools import lru_cache
from typing import Dict, List, Mapping, Optional, Tuple

from sympy import QQ, Poly, Rational, Symbol

from spk_app.errors import NotRealRootedError, PolynomialError
from spk_app.logger.logger import logger
from spk_app.model.polynomial import Polynomial, substitute
from spk_app.model.records import InterlaceVerdict, RootInterval, RootReport, ZeroTheoremRow
from spk_app.service.catalog import f_poly, xi_zeta

X = Symbol("x")

Window = Tuple[Optional[Fraction], Optional[Fraction]]

# (lo, hi] with None standing for an infinite end
DEFAULT_WINDOWS: Mapping[str, Window] = {
    "(-inf,-1]": (None, Fraction(-1)),
    "(-1,0]": (Fraction(-1), Fraction(0)),
    "(0,inf)": (Fraction(0), None),
}


def _frac(value) -> Fraction:
    return Fraction(int(value.p), int(value.q))


def _rat(value: Fraction) -> Rational:
    return Rational(value.numerator, value.denominator)


def _sign(value) -> int:
    v = _frac(value)
    return (v > 0) - (v < 0)


def to_sympy(p: Polynomial) -> Poly:
    """
    Converts a univariate Polynomial into a sympy Poly over QQ in x.

    Raises:
        PolynomialError: If p has more than one variable or is zero.
    """
    names = p.variables()
    if len(names) > 1:
        raise PolynomialError(f"Root analysis needs a univariate polynomial, got {sorted(names)}")
    if p.is_zero:
        raise PolynomialError("Root analysis is undefined for the zero polynomial")
    name = next(iter(names)) if names else "x"
    coeffs = p.coefficients(name)
    return Poly(list(reversed(coeffs)), X, domain=QQ)


@lru_cache(maxsize=None)
def _sturm_chain(square_free: Poly) -> Tuple[Poly, ...]:
    return tuple(square_free.sturm())


def _variations(chain: Tuple[Poly, ...], point: Optional[Fraction], at_minus_infinity: bool) -> int:
    if point is None:
        signs = [
            _sign(c.LC()) * (-1 if at_minus_infinity and c.degree() % 2 else 1)
            for c in chain
        ]
    else:
        signs = [_sign(c.eval(_rat(point))) for c in chain]
    signs = [s for s in signs if s]
    return sum(1 for a, b in zip(signs, signs[1:]) if a != b)


def _count(poly: Poly, lo: Optional[Fraction], hi: Optional[Fraction]) -> int:
    square_free = poly.sqf_part()
    if square_free.degree() <= 0:
        return 0
    chain = _sturm_chain(square_free)
    return _variations(chain, lo, True) - _variations(chain, hi, False)


def sturm_count(p: Polynomial, lo: Optional[Fraction] = None, hi: Optional[Fraction] = None) -> int:
    """
    Counts the distinct real roots of p in the window (lo, hi].

    Args:
        p (Polynomial): Non-zero univariate polynomial.
        lo (Optional[Fraction]): Open lower end; None for minus infinity.
        hi (Optional[Fraction]): Closed upper end; None for plus infinity.

    Returns:
        int: Number of distinct roots in the window.
    """
    if lo is not None and hi is not None and lo >= hi:
        return 0
    return _count(to_sympy(p), lo, hi)


def root_multiplicity(p: Polynomial, root: Fraction) -> int:
    """
    Largest m with (x - root)^m dividing p, by repeated exact division.

    Raises:
        PolynomialError: For the zero polynomial.
    """
    poly = to_sympy(p)
    linear = Poly([1, -_rat(Fraction(root))], X, domain=QQ)
    m = 0
    while poly.degree() > 0:
        quotient, remainder = poly.div(linear)
        if not remainder.is_zero:
            break
        poly = quotient
        m += 1
    return m


def _root_intervals(poly: Poly) -> List[RootInterval]:
    """Isolating intervals with multiplicities, ascending; rational roots are reported exactly."""
    rational = sorted(_frac(r) for r in poly.ground_roots())
    out: List[RootInterval] = []
    for (a, b), multiplicity in poly.intervals():
        lo, hi = _frac(a), _frac(b)
        inside = [r for r in rational if lo <= r <= hi]
        if inside:
            lo = hi = inside[0]
        out.append(RootInterval(lo=lo, hi=hi, multiplicity=int(multiplicity), exact=lo == hi))
    return sorted(out, key=lambda r: (r.lo, r.hi))


def isolate_roots(p: Polynomial, label: str = "", windows: Mapping[str, Window] = DEFAULT_WINDOWS) -> RootReport:
    """
    Locates every real root of p with its multiplicity.

    Args:
        p (Polynomial): Non-zero univariate polynomial.
        label (str): Name attached to the report.
        windows (Mapping[str, Window]): Windows whose distinct-root counts are reported.

    Returns:
        RootReport: Roots in ascending order plus window counts.
    """
    poly = to_sympy(p)
    roots = tuple(_root_intervals(poly)) if poly.degree() > 0 else ()
    counts = {name: _count(poly, lo, hi) for name, (lo, hi) in windows.items()}
    return RootReport(
        label=label,
        degree=max(poly.degree(), 0),
        real_root_count=sum(r.multiplicity for r in roots),
        roots=roots,
        window_counts=counts,
    )


def _contains_root(factor: Poly, root: RootInterval) -> bool:
    if root.exact:
        return factor.eval(_rat(root.lo)) == 0
    return _count(factor, root.lo, root.hi) > 0


def _ranked_zeros(poly: Poly, distinct: List[RootInterval]) -> List[int]:
    """Zeros of poly with multiplicity, each replaced by its rank among the distinct roots."""
    ranks: List[int] = []
    _, factors = poly.sqf_list()
    for rank, root in enumerate(distinct):
        for factor, multiplicity in factors:
            if factor.degree() > 0 and _contains_root(factor, root):
                ranks.extend([rank] * int(multiplicity))
                break
    return ranks


def is_real_rooted(p: Polynomial) -> bool:
    poly = to_sympy(p)
    return sum(m for _, m in poly.intervals()) == max(poly.degree(), 0)


def interlace_verdict(p: Polynomial, q: Polynomial) -> InterlaceVerdict:
    """
    Decides whether p interlaces q or p alternates left of q, ties allowed.

    With zeros r_1 <= ... of p and s_1 <= ... of q, p interlaces q when
    deg q = deg p + 1 and s_1 <= r_1 <= s_2 <= ... <= r_d <= s_(d+1); p
    alternates left of q when the degrees agree and r_1 <= s_1 <= ... <= r_d <= s_d.

    Raises:
        NotRealRootedError: If p or q has a non-real root.
    """
    for name, poly in (("p", p), ("q", q)):
        if not is_real_rooted(poly):
            raise NotRealRootedError(f"{name} = {poly} has non-real roots")
    a, b = to_sympy(p), to_sympy(q)
    deg_p, deg_q = max(a.degree(), 0), max(b.degree(), 0)
    if deg_p == 0 or deg_q == 0:
        return InterlaceVerdict.VACUOUS

    distinct = _root_intervals((a * b).sqf_part())
    r = _ranked_zeros(a, distinct)
    s = _ranked_zeros(b, distinct)
    if deg_q == deg_p + 1:
        if all(s[i] <= r[i] <= s[i + 1] for i in range(deg_p)):
            return InterlaceVerdict.INTERLACES
    elif deg_q == deg_p:
        if all(r[i] <= s[i] for i in range(deg_p)) and all(s[i] <= r[i + 1] for i in range(deg_p - 1)):
            return InterlaceVerdict.ALTERNATES_LEFT
    return InterlaceVerdict.NEITHER


def _negative_simple(p: Polynomial) -> bool:
    """All roots real, simple and strictly negative."""
    poly = to_sympy(p)
    degree = max(poly.degree(), 0)
    if degree == 0:
        return True
    square_free = poly.sqf_part()
    return (
        square_free.degree() == degree
        and _count(poly, None, Fraction(0)) == degree
        and poly.eval(0) != 0
    )


def zero_checks(n: int) -> ZeroTheoremRow:
    """
    Structural zero facts about f_n, xi_n and zeta_n at one n.

    Checks that (1+x)^floor(n/2) exactly divides f_n, the quotient is
    square-free with all floor((n-1)/2) roots in (-1, 0), f_n interlaces
    f_(n+1), xi_n and zeta_n have negative simple roots, zeta_n alternates
    left of xi_n for even n and interlaces it for odd n, and the even/odd
    halves of f_n satisfy the right-hand side of the Hermite-Biehler criterion.
    """
    f_n, f_next = f_poly(n), f_poly(n + 1)
    xi, zeta = xi_zeta(n)
    checks: Dict[str, bool] = {}
    details: List[str] = []

    mult = root_multiplicity(f_n, Fraction(-1))
    checks["f-multiplicity"] = mult == n // 2
    quotient = to_sympy(f_n).exquo(Poly([1, 1], X, domain=QQ) ** mult)
    interior = (n - 1) // 2
    checks["f-interior"] = (
        max(quotient.degree(), 0) == interior
        and quotient.sqf_part().degree() == quotient.degree()
        and _count(quotient, Fraction(-1), Fraction(0)) == interior
        and quotient.eval(0) != 0
    )
    if not checks["f-interior"]:
        details.append(f"quotient of f_{n} by (1+x)^{mult} is {quotient.as_expr()}")

    link = interlace_verdict(f_n, f_next)
    checks["f-interlaces-next"] = link in (InterlaceVerdict.INTERLACES, InterlaceVerdict.VACUOUS)
    if not checks["f-interlaces-next"]:
        details.append(f"f_{n} vs f_{n + 1}: {link.value}")

    checks["xi-negative-simple"] = _negative_simple(xi)
    checks["zeta-negative-simple"] = zeta.is_zero or _negative_simple(zeta)

    if zeta.is_zero:
        checks["parity"] = True
        checks["hermite-biehler"] = True
    else:
        expected = InterlaceVerdict.ALTERNATES_LEFT if n % 2 == 0 else InterlaceVerdict.INTERLACES
        verdict = interlace_verdict(zeta, xi)
        checks["parity"] = verdict in (expected, InterlaceVerdict.VACUOUS)
        if not checks["parity"]:
            details.append(f"zeta_{n} vs xi_{n}: {verdict.value}, expected {expected.value}")
        even_half, odd_half = 2 * xi, zeta
        x = Polynomial.var("x")
        recombined = substitute(even_half, {"x": x ** 2}) + x * substitute(odd_half, {"x": x ** 2})
        checks["hermite-biehler"] = (
            recombined == f_n
            and to_sympy(even_half).LC() > 0
            and to_sympy(odd_half).LC() > 0
            and sturm_count(even_half, Fraction(0)) == 0
            and sturm_count(odd_half, Fraction(0)) == 0
            and verdict is not InterlaceVerdict.NEITHER
        )

    row = ZeroTheoremRow(n=n, checks=checks, detail="; ".join(details))
    if row.passed:
        logger.debug(f"Zero checks passed at n={n}")
    else:
        logger.error(f"Zero checks failed at n={n}: {row.detail or checks}")
    return row


def theorem_zeros_report(n_max: int) -> List[ZeroTheoremRow]:
    """
    Runs zero_checks for 1 <= n <= n_max.

    Raises:
        PolynomialError: If n_max < 1.
    """
    if n_max < 1:
        raise PolynomialError("The zero report needs n_max >= 1")
    return [zero_checks(n) for n in range(1, n_max + 1)]
