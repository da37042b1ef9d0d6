"""
Verification Service

This module holds the registry of identity checks and the service that runs
them. Every check computes the same object along two or more independent
routes (recurrence, enumeration, grammar, substitution) and compares them
exactly at one value of n. A mismatch raises CheckFailedError carrying the
first differing coefficient, which the runner turns into a failing row.

Checks are independent per (check, n), so the runner can fan them out to a
process pool; rows always come back in registry order, then ascending n.
"""

import time
from concurrent.futures import ProcessPoolExecutor, as_completed
from fractions import Fraction
from itertools import permutations
from math import comb, factorial
from pathlib import Path
from typing import Any, Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

from sympy import primerange

from spk_app.config import CARLITZ_ORDER, EVALUATION_POINT_COUNT
from spk_app.errors import CheckFailedError, UnknownNameError
from spk_app.logger.logger import logger
from spk_app.model.codec import parse, serialize, term_order_key
from spk_app.model.objects import SPCode, StirlingWord
from spk_app.model.polynomial import Polynomial, eval_at, gamma_decompose, rename, substitute
from spk_app.model.records import CheckStatus, VerifyReport, VerifyRow
from spk_app.repository.poly_repo import PolynomialRepository
from spk_app.service.analysis import zero_checks
from spk_app.service.catalog import (
    ROUTE_ENUMERATION,
    ROUTE_GRAMMAR,
    CatalogService,
    eulerian_a,
    eulerian_b,
    xi_zeta,
    xi_zeta_coefficients,
)
from spk_app.service.enumeration import (
    Family,
    check_guard,
    code_to_tree,
    code_to_word,
    count_family,
    double_factorial_odd,
    enumerate_family,
    is_sp_code,
    is_stirling_word,
    stirling_words_with_codes,
    tree_to_code,
    tree_to_word,
    word_to_code,
    word_to_tree,
)
from spk_app.service.grammar import builtin, derive, derive_iter
from spk_app.service.stats import (
    code_stats,
    exterior_stats,
    perm_record_counts,
    project,
    qzero_record_counts,
    signed_record_counts,
    word_record_counts,
    word_stats,
)

X = Polynomial.var("x")
Y = Polynomial.var("y")
Q = Polynomial.var("q")

CheckFunc = Callable[[CatalogService, int], str]


class CheckSpec(NamedTuple):
    """A registered check with the n range it runs on by default."""
    check_id: str
    n_min: int
    n_default: int
    func: CheckFunc
    description: str


# --- Comparison helpers -------------------------------------------------------

def expect_equal(n: int, left_name: str, left: Polynomial, right_name: str, right: Polynomial) -> None:
    """
    Raises:
        CheckFailedError: With the first differing monomial if left != right.
    """
    if left == right:
        return
    difference = left - right
    mono = min(difference.terms, key=term_order_key)
    term = Polynomial({mono: 1})
    raise CheckFailedError(
        f"{left_name} != {right_name} at n={n}",
        {
            "n": n,
            "monomial": serialize(term),
            left_name: left.terms.get(mono, 0),
            right_name: right.terms.get(mono, 0),
        },
    )


def expect(n: int, condition: bool, message: str, **counterexample: Any) -> None:
    if not condition:
        raise CheckFailedError(f"{message} at n={n}", {"n": n, **counterexample})


def _even_signed_sum(catalog: CatalogService, n: int, shift_by_even: bool) -> Polynomial:
    """Sum over single-one words of index n+1 of (-1)^even y^ap, or y^(ap - even + n) when shifted."""
    terms: List[Polynomial] = []
    for (ap, even), count in project(qzero_record_counts(n + 1, catalog.guard), ("ap", "even")).items():
        exponent = ap - even + n if shift_by_even else ap
        terms.append(Polynomial.monomial({"y": exponent}, (-1) ** even * count))
    return Polynomial.total(terms)


# --- Gamma tables and words -----------------------------------------------------

_SMALL_GAMMA: Dict[int, Dict[Tuple[int, int, int], int]] = {
    1: {(0, 0, 1): 1},
    2: {(0, 1, 1): 1},
    3: {(1, 0, 2): 2, (0, 2, 1): 1},
    4: {(0, 0, 3): 6, (1, 1, 2): 8, (0, 3, 1): 1},
}


def check_gamma_nonneg(catalog: CatalogService, n: int) -> str:
    table = catalog.gamma_table(n)
    for (i, j, k), value in table.entries.items():
        expect(n, value > 0, "gamma entry is not positive", i=i, j=j, k=k, value=value)
        expect(n, i + 2 * j + 3 * k == 2 * n + 1, "gamma entry off the support", i=i, j=j, k=k)
    expect(n, table.mass() == double_factorial_odd(n), "gamma mass differs from (2n-1)!!", mass=table.mass())
    if n in _SMALL_GAMMA:
        expect(n, table.entries == _SMALL_GAMMA[n], "gamma table differs from the known listing")
    return f"{len(table.entries)} entries"


def check_table1(catalog: CatalogService, n: int) -> str:
    check_guard(Family.Q, n, catalog.guard)
    count = 0
    for letters, pairs in stirling_words_with_codes(n):
        word = StirlingWord(letters)
        code = SPCode(pairs)
        record = word_stats(word)
        expect(n, word_to_code(word) == code, "insertion code differs from the word's code", word=list(letters))
        expect(n, code_stats(code) == record, "slot table disagrees with the word statistics",
               word=list(letters), word_stats=record.to_dict(), code_stats=code_stats(code).to_dict())
        expect(n, record.asc + record.plat + record.des == 2 * n + 1, "asc + plat + des != 2n+1", word=list(letters))
        expect(n, sum(record.class_counts().values()) == n, "slot classes do not partition [n]", word=list(letters))
        count += 1
    return f"{count} words"


def check_roundtrips(catalog: CatalogService, n: int) -> str:
    count = 0
    for word in enumerate_family(Family.Q, n, catalog.guard):
        letters = list(word.letters)
        expect(n, is_stirling_word(word.letters), "enumerated word fails membership", word=letters)
        tree = word_to_tree(word)
        code = word_to_code(word)
        expect(n, tree_to_word(tree) == word, "tree round trip", word=letters)
        expect(n, tree_to_code(tree) == code, "tree and word give different codes", word=letters)
        expect(n, is_sp_code(code), "code fails membership", word=letters)
        expect(n, code_to_word(code) == word, "code round trip", word=letters)
        expect(n, code_to_tree(code) == tree, "code to tree round trip", word=letters)
        ext = exterior_stats(tree)
        record = word_stats(word)
        expect(n, (ext.exl, ext.exm, ext.exr) == (record.asc, record.plat, record.des),
               "exterior slots differ from asc/plat/des", word=letters)
        count += 1
    expect(n, count == count_family(Family.Q, n), "word count differs from (2n-1)!!", count=count)
    return f"{count} words"


def check_counts(catalog: CatalogService, n: int) -> str:
    sizes = []
    for family in Family:
        if count_family(family, n) > catalog.guard:
            continue
        seen = sum(1 for _ in enumerate_family(family, n, catalog.guard))
        expect(n, seen == count_family(family, n), f"{family.value} count differs from its closed form",
               family=family.value, enumerated=seen, expected=count_family(family, n))
        sizes.append(f"{family.value}={seen}")
    c3 = catalog.family_poly("C3", n)
    expect(n, substitute(c3, {"x": 1, "y": 1, "z": 1}) == double_factorial_odd(n), "C_n(1,1,1) != (2n-1)!!")
    return " ".join(sizes)


def check_alpha_nonneg(catalog: CatalogService, n: int) -> str:
    for record in word_record_counts(n, catalog.guard):
        closed = n + 2 * record.apd - record.lap - record.eud - record.rpd - record.vv
        expect(n, record.alpha >= 0, "alpha is negative", record=record.to_dict())
        expect(n, record.alpha == closed, "alpha differs from n + 2apd - lap - eud - rpd - vv",
               record=record.to_dict(), closed=closed)
    return "alpha >= 0"


# --- Signed permutations --------------------------------------------------------

def check_bn_expansion(catalog: CatalogService, n: int) -> str:
    rhs = catalog.bn_expansion_rhs(n)
    expect_equal(n, "expansion", rhs, "enumeration", catalog.family_poly("b", n, ROUTE_ENUMERATION))
    expect_equal(n, "expansion", rhs, "grammar", catalog.family_poly("b", n, ROUTE_GRAMMAR))
    expect_equal(n, "expansion", rhs, "changed_grammar", catalog.b_by_changed_grammar(n))
    return "three routes agree"


def check_grammar_vs_enum_bn(catalog: CatalogService, n: int) -> str:
    b = catalog.family_poly("b", n)
    expect_equal(n, "grammar", b, "enumeration", catalog.family_poly("b", n, ROUTE_ENUMERATION))
    expect_equal(n, "b(x,1)", substitute(b, {"y": 1}), "2^n A_n", 2 ** n * eulerian_a(n))
    expect_equal(n, "b(1,x)", substitute(b, {"x": 1, "y": X}), "B_n", eulerian_b(n))
    flag = Polynomial.from_counts(("x",), project(signed_record_counts(n, False, catalog.guard), ("fdes",)))
    expect_equal(n, "b(x,x)", substitute(b, {"y": X}), "flag_descents", flag)
    bq = catalog.family_poly("Bq", n)
    expect_equal(n, "recurrence", bq, "enumeration", catalog.family_poly("Bq", n, ROUTE_ENUMERATION))
    expect_equal(n, "recurrence", bq, "grammar", catalog.family_poly("Bq", n, ROUTE_GRAMMAR))
    expect_equal(n, "B_n(x,0)", substitute(bq, {"q": 0}), "A_n", eulerian_a(n))
    expect_equal(n, "B_n(x,1)", substitute(bq, {"q": 1}), "B_n", eulerian_b(n))
    expect_equal(n, "A_n", eulerian_a(n), "enumeration", catalog.family_poly("A", n, ROUTE_ENUMERATION))
    expect_equal(n, "B_n", eulerian_b(n), "enumeration", catalog.family_poly("B", n, ROUTE_ENUMERATION))
    return "specializations agree"


def _g3_split(n: int) -> Tuple[Polynomial, Polynomial]:
    """f_n and g_n in (x, y, q) from the coupled recursion driven by the grammar G3."""
    g3 = builtin("g3")
    f, g = Polynomial.constant(1), Polynomial.constant(1)
    for _ in range(1, n):
        f, g = (
            (X + Y + Q * Y) * f + derive(g3, f) + Q * Y * g,
            (X + Q * X + Q * Y) * g + derive(g3, g) + X * f,
        )
    return f, g


def check_thm24_fourway(catalog: CatalogService, n: int) -> str:
    signed = Polynomial.from_counts(
        ("x", "y", "q"), project(signed_record_counts(n, False, catalog.guard), ("des_a", "des_b", "neg"))
    ) * X
    words = Polynomial.from_counts(("x", "y", "q"), project(qzero_record_counts(n + 1, catalog.guard), ("lap", "ap", "even")))
    expect_equal(n, "signed_enumeration", signed, "g1_grammar", catalog.signed_triple_by_grammar(n))
    expect_equal(n, "signed_enumeration", signed, "g2_grammar", catalog.signed_triple_by_word_grammar(n))
    expect_equal(n, "signed_enumeration", signed, "word_enumeration", words)

    g1 = builtin("g1")
    power = derive_iter(g1, g1.seed, n - 1)
    f, g = _g3_split(n)
    as_ad = {"x": Polynomial.var("A"), "y": Polynomial.var("D")}
    split = parse("P*E") * substitute(f, as_ad) + parse("q*N*E") * substitute(g, as_ad)
    expect_equal(n, "g1_power", power, "g3_split", split)
    return "four routes agree"


def check_cor_oneminusy(catalog: CatalogService, n: int) -> str:
    lhs = _even_signed_sum(catalog, n, shift_by_even=False)
    expect_equal(n, "signed_sum", lhs, "(1-y)^n", (1 - Y) ** n)
    return "(1-y)^n"


def check_cor_derangement(catalog: CatalogService, n: int) -> str:
    lhs = _even_signed_sum(catalog, n, shift_by_even=True)
    d = catalog.family_poly("d", n, ROUTE_ENUMERATION)
    expect_equal(n, "recurrence", catalog.family_poly("d", n), "excedances", d)
    rhs = Y * (Y - 1) ** n * substitute(d, {"x": Y})
    expect_equal(n, "signed_sum", lhs, "y(y-1)^n d_n(y)", rhs)
    return "derangement identity"


def check_typed_stembridge(catalog: CatalogService, n: int) -> str:
    expect_equal(n, "stembridge", catalog.family_poly("D", n), "enumeration", catalog.family_poly("D", n, ROUTE_ENUMERATION))
    return "D_n agrees"


def check_typed_count(catalog: CatalogService, n: int) -> str:
    parity = [0, 0]
    for (even,), count in project(qzero_record_counts(n + 1, catalog.guard), ("even",)).items():
        parity[even % 2] += count
    expected = 2 ** (n - 1) * factorial(n)
    expect(n, parity == [expected, expected], "parity classes of even are unbalanced",
           even_parity=parity[0], odd_parity=parity[1], expected=expected)
    expect(n, count_family(Family.SD, n) == expected, "type D group order")
    return f"{expected} per class"


# --- Stirling permutations ------------------------------------------------------

def check_dumont_symmetry(catalog: CatalogService, n: int) -> str:
    c3 = catalog.family_poly("C3", n, ROUTE_GRAMMAR)
    expect_equal(n, "grammar", c3, "dumont", catalog.c3_by_dumont(n))
    expect_equal(n, "grammar", c3, "substitution", catalog.family_poly("C3", n))
    for image in permutations(("x", "y", "z")):
        swapped = rename(c3, dict(zip(("x", "y", "z"), image)))
        expect_equal(n, "C_n", c3, "C_n_" + "".join(image), swapped)
    return "symmetric"


def check_bona_equidist(catalog: CatalogService, n: int) -> str:
    c3 = catalog.family_poly("C3", n, ROUTE_ENUMERATION)
    asc = substitute(c3, {"y": 1, "z": 1})
    plat = substitute(c3, {"x": 1, "y": X, "z": 1})
    des = substitute(c3, {"x": 1, "y": 1, "z": X})
    expect_equal(n, "asc", asc, "plat", plat)
    expect_equal(n, "asc", asc, "des", des)
    return "equidistributed"


def check_thm32_q8(catalog: CatalogService, n: int) -> str:
    q8 = catalog.family_poly("Q8", n)
    expect_equal(n, "substitution", q8, "enumeration", catalog.family_poly("Q8", n, ROUTE_ENUMERATION))
    expect_equal(n, "substitution", q8, "grammar", catalog.family_poly("Q8", n, ROUTE_GRAMMAR))
    expect_equal(n, "Q6", catalog.family_poly("Q6", n), "Q8(s=t=1)", substitute(q8, {"s": 1, "t": 1}))
    expect_equal(n, "N", catalog.family_poly("N", n), "enumeration", catalog.family_poly("N", n, ROUTE_ENUMERATION))
    return "Q8 agrees"


def evaluation_points(count: int = EVALUATION_POINT_COUNT) -> List[Dict[str, Fraction]]:
    """Fixed positive rational points in x, y, z, p, q, r, s, t with pairwise distinct prime numerators."""
    names = ("x", "y", "z", "p", "q", "r", "s", "t")
    primes = [int(p) for p in primerange(2, 10_000)][: count * len(names)]
    return [
        {name: Fraction(primes[k * len(names) + c], 2 + (k + c) % 5) for c, name in enumerate(names)}
        for k in range(count)
    ]


def _homogenization_sum(n: int, counts, with_refinement: bool) -> Tuple[Polynomial, int]:
    """3^n (xyz)^A times the per-word homogenized sum, A the largest apd."""
    names = ("lap", "eud", "rpd", "apd", "vv")
    projected = project(counts, names)
    top = max(apd for (_, _, _, apd, _) in projected)
    total = parse("x + y + z")
    xy, xz, yz = parse("x*y"), parse("x*z"), parse("y*z")
    if with_refinement:
        xy, xz, yz = xy * Polynomial.var("p"), xz * Polynomial.var("q"), yz * Polynomial.var("r")
    xyz = parse("x*y*z")
    terms: List[Polynomial] = []
    for (lap, eud, rpd, apd, vv), count in projected.items():
        alpha = n + 2 * apd - lap - eud - rpd - vv
        term = count * 3 ** (n - alpha) * total ** alpha * xy ** lap * xz ** eud * yz ** rpd * xyz ** (top - apd)
        if with_refinement:
            term = term * Polynomial.var("s") ** apd * Polynomial.var("t") ** vv
        terms.append(term)
    return Polynomial.total(terms), top


def check_thm33_homog(catalog: CatalogService, n: int) -> str:
    q8 = catalog.family_poly("Q8", n)
    c3 = catalog.family_poly("C3", n)
    counts = word_record_counts(n, catalog.guard)
    projected = project(counts, ("lap", "eud", "rpd", "apd", "vv"))
    for index, point in enumerate(evaluation_points()):
        x, y, z = point["x"], point["y"], point["z"]
        total = x + y + z
        scaled = {
            "x": 1, "y": 1, "z": 1,
            "p": 3 * x * y * point["p"] / total,
            "q": 3 * x * z * point["q"] / total,
            "r": 3 * y * z * point["r"] / total,
            "s": point["s"] * total ** 2 / (9 * x * y * z),
            "t": 3 * point["t"] / total,
        }
        lhs = eval_at(q8, point)
        rhs = (total / 3) ** n * eval_at(q8, scaled)
        expect(n, lhs == rhs, "eight-variable homogenization fails", point=index, lhs=str(lhs), rhs=str(rhs))
        per_word = Fraction(0)
        for (lap, eud, rpd, apd, vv), count in projected.items():
            alpha = n + 2 * apd - lap - eud - rpd - vv
            per_word += count * (x * y) ** lap * (x * z) ** eud * (y * z) ** rpd * (x * y * z) ** -apd * (total / 3) ** alpha
        c3_value = eval_at(c3, point)
        expect(n, per_word == c3_value, "per-word expansion of C_n fails", point=index,
               lhs=str(c3_value), rhs=str(per_word))
    if n <= 4:
        refined, top = _homogenization_sum(n, counts, with_refinement=True)
        expect_equal(n, "cleared_Q8", 3 ** n * parse("x*y*z") ** top * q8, "cleared_sum", refined)
        plain, top = _homogenization_sum(n, counts, with_refinement=False)
        expect_equal(n, "cleared_C_n", 3 ** n * parse("x*y*z") ** top * c3, "cleared_sum", plain)
        return f"{EVALUATION_POINT_COUNT} points and symbolic"
    return f"{EVALUATION_POINT_COUNT} points"


def check_thm34_f17(catalog: CatalogService, n: int) -> str:
    f17 = catalog.family_poly("F17", n)
    expect_equal(n, "substitution", f17, "enumeration", catalog.family_poly("F17", n, ROUTE_ENUMERATION))
    expect_equal(n, "substitution", f17, "grammar", catalog.family_poly("F17", n, ROUTE_GRAMMAR))
    return "F17 agrees"


def check_npa_epos(catalog: CatalogService, n: int) -> str:
    for name in ("NP", "Palpha"):
        expect_equal(n, name, catalog.family_poly(name, n), "enumeration", catalog.family_poly(name, n, ROUTE_ENUMERATION))
    return "NP and P agree"


def check_e6_symmetry(catalog: CatalogService, n: int) -> str:
    e6 = catalog.family_poly("E6", n)
    expect_equal(n, "E6", e6, "enumeration", catalog.family_poly("E6", n, ROUTE_ENUMERATION))
    ones = {f"beta{i}": 1 for i in range(1, 7)}

    def pair(first: str, second: str) -> Polynomial:
        return substitute(e6, {**ones, first: X, second: Y})

    base = pair("beta1", "beta2")
    expect_equal(n, "E(x,y,1,1,1,1)", base, "E(1,1,x,y,1,1)", pair("beta3", "beta4"))
    expect_equal(n, "E(x,y,1,1,1,1)", base, "E(1,1,1,1,x,y)", pair("beta5", "beta6"))
    expect_equal(n, "E(x,y,1,1,1,1)", base, "E(y,x,1,1,1,1)", rename(base, {"x": "y", "y": "x"}))
    return "symmetric"


def check_mbeta_epos(catalog: CatalogService, n: int) -> str:
    expect_equal(n, "Mbeta", catalog.family_poly("Mbeta", n), "enumeration", catalog.family_poly("Mbeta", n, ROUTE_ENUMERATION))
    return "Mbeta agrees"


def check_carlitz(catalog: CatalogService, n: int) -> str:
    product, column = catalog.carlitz_series(n, CARLITZ_ORDER)
    for k, (left, right) in enumerate(zip(product, column)):
        expect(n, left == right, "series coefficient differs from S2(n+k,k)", k=k, series=left, stirling=right)
    return f"order {CARLITZ_ORDER}"


def check_convolution(catalog: CatalogService, n: int) -> str:
    m = [catalog.family_poly("M", i) for i in range(n + 1)]
    mt = [catalog.family_poly("Mtilde", i) for i in range(n + 1)]
    expect_equal(n, "M", m[n], "enumeration", catalog.family_poly("M", n, ROUTE_ENUMERATION))
    expect_equal(n, "Mtilde", mt[n], "enumeration", catalog.family_poly("Mtilde", n, ROUTE_ENUMERATION))
    expect_equal(n, "Mtilde", mt[n], "N(x,1,1)", substitute(catalog.family_poly("N", n), {"p": X, "q": 1, "r": 1}))
    tilde_square = Polynomial.total(comb(n, i) * mt[i] * mt[n - i] for i in range(n + 1))
    expect_equal(n, "2^n x A_n", 2 ** n * X * eulerian_a(n), "tilde_convolution", tilde_square)
    mixed = Polynomial.total(comb(n, i) * m[i] * mt[n - i] for i in range(n + 1))
    expect_equal(n, "B_n", eulerian_b(n), "mixed_convolution", mixed)
    return "both convolutions"


def check_gamma_a_fs(catalog: CatalogService, n: int) -> str:
    gammas = gamma_decompose(eulerian_a(n), n, "x")
    expect(n, all(g >= 0 for g in gammas), "A_n has a negative gamma coefficient", gammas=gammas)
    return f"gamma = {gammas}"


def check_gamma_a_branden(catalog: CatalogService, n: int) -> str:
    gammas = gamma_decompose(eulerian_a(n), n, "x")
    peaks = project(perm_record_counts(n, False, catalog.guard), ("ipk",))
    for k, g in enumerate(gammas):
        expect(n, g * 2 ** (n - 1 - 2 * k) == peaks.get((k,), 0), "gamma of A_n differs from interior peaks",
               k=k, gamma=g, peaks=peaks.get((k,), 0))
    return f"{len(gammas)} coefficients"


def check_gamma_b_petersen(catalog: CatalogService, n: int) -> str:
    gammas = gamma_decompose(eulerian_b(n), n + 1, "x")
    peaks = project(perm_record_counts(n, False, catalog.guard), ("lpk",))
    for i, g in enumerate(gammas):
        expect(n, g == 4 ** i * peaks.get((i,), 0), "gamma of B_n differs from 4^i left peaks",
               i=i, gamma=g, peaks=peaks.get((i,), 0))
    return f"{len(gammas)} coefficients"


# --- Recurrences and zeros ----------------------------------------------------

def check_xi_zeta_t(catalog: CatalogService, n: int) -> str:
    xi, zeta = xi_zeta(n)
    by_coefficients = xi_zeta_coefficients(n)
    by_runs = catalog.xi_zeta_from_runs(n)
    width = len(by_runs[0])

    def padded(p: Polynomial) -> Tuple[int, ...]:
        coeffs = p.coefficients("x")
        return tuple(coeffs + [0] * (width - len(coeffs)))

    expect(n, by_coefficients == by_runs, "coefficient system differs from T(n, .)",
           system=[list(v) for v in by_coefficients], runs=[list(v) for v in by_runs])
    expect(n, (padded(xi), padded(zeta)) == by_runs, "polynomial system differs from T(n, .)")
    f_n = catalog.family_poly("f", n)
    recombined = 2 * substitute(xi, {"x": X ** 2}) + X * substitute(zeta, {"x": X ** 2})
    expect_equal(n, "f_n", f_n, "2xi(x^2)+x zeta(x^2)", recombined)
    expect_equal(n, "2T_n", 2 * catalog.family_poly("T", n), "x f_n", X * f_n)
    if n >= 2:
        half, full = factorial(n) // 2, factorial(n)
        expect(n, substitute(xi, {"x": 1}) == half, "xi_n(1) != n!/2")
        expect(n, substitute(zeta, {"x": 1}) == full, "zeta_n(1) != n!")
    if n <= 8:
        expect_equal(n, "T_n", catalog.family_poly("T", n), "enumeration", catalog.family_poly("T", n, ROUTE_ENUMERATION))
    return "xi and zeta agree"


def check_gprime_coeffs(catalog: CatalogService, n: int) -> str:
    xi, zeta = xi_zeta(n)
    by_grammar = catalog.xi_zeta_by_grammar(n)
    expect_equal(n, "xi", xi, "grammar", by_grammar[0])
    expect_equal(n, "zeta", zeta, "grammar", by_grammar[1])
    return "coefficients agree"


def check_zero_structure(catalog: CatalogService, n: int) -> str:
    row = zero_checks(n)
    failed = sorted(name for name, ok in row.checks.items() if not ok)
    expect(n, not failed, "zero structure fails", failed=failed, detail=row.detail)
    return "zeros as expected"


CHECKS: Dict[str, CheckSpec] = {spec.check_id: spec for spec in (
    CheckSpec("gamma-nonneg", 1, 14, check_gamma_nonneg, "gamma tables: both routes, positivity, mass"),
    CheckSpec("table1", 1, 7, check_table1, "word statistics equal the slot-table statistics of the code"),
    CheckSpec("roundtrips", 1, 7, check_roundtrips, "word/tree/code bijections are inverse"),
    CheckSpec("counts", 1, 7, check_counts, "family sizes match closed forms"),
    CheckSpec("alpha-nonneg", 1, 7, check_alpha_nonneg, "alpha(sigma) >= 0"),
    CheckSpec("thm-bn-expansion", 2, 7, check_bn_expansion, "b_n expansion in xi and zeta"),
    CheckSpec("grammar-vs-enum-bn", 1, 7, check_grammar_vs_enum_bn, "b_n, B_n(x,q) routes and specializations"),
    CheckSpec("xi-zeta-T", 1, 12, check_xi_zeta_t, "xi and zeta from T(n,k)"),
    CheckSpec("gprime-coeffs", 2, 10, check_gprime_coeffs, "xi and zeta read off the changed grammar"),
    CheckSpec("thm24-fourway", 1, 6, check_thm24_fourway, "signed permutations vs single-one words"),
    CheckSpec("cor-oneminusy", 1, 6, check_cor_oneminusy, "signed sum of y^ap is (1-y)^n"),
    CheckSpec("cor-derangement", 1, 6, check_cor_derangement, "signed sum against derangements"),
    CheckSpec("typeD-stembridge", 2, 6, check_typed_stembridge, "D_n identity vs type D descents"),
    CheckSpec("typeD-count", 1, 6, check_typed_count, "parity classes of even"),
    CheckSpec("dumont-symmetry", 1, 7, check_dumont_symmetry, "C_n(x,y,z) routes and symmetry"),
    CheckSpec("bona-equidist", 1, 7, check_bona_equidist, "asc, plat, des equidistributed"),
    CheckSpec("thm32-q8", 1, 6, check_thm32_q8, "eight-variable expansion"),
    CheckSpec("thm33-homog", 1, 7, check_thm33_homog, "homogenized expansion"),
    CheckSpec("thm34-f17", 1, 5, check_thm34_f17, "seventeen-variable expansion"),
    CheckSpec("npa-epos", 1, 6, check_npa_epos, "NP and P expansions"),
    CheckSpec("e6-symmetry", 1, 6, check_e6_symmetry, "E_n expansion and symmetry"),
    CheckSpec("mbeta-epos", 1, 6, check_mbeta_epos, "M_n(beta) expansion"),
    CheckSpec("carlitz", 1, 6, check_carlitz, "C_n(x)/(1-x)^(2n+1) against S2(n+k,k)"),
    CheckSpec("convolution", 1, 7, check_convolution, "M and M~ convolutions"),
    CheckSpec("gammaA-fs", 1, 8, check_gamma_a_fs, "A_n gamma-positive"),
    CheckSpec("gammaA-branden", 1, 8, check_gamma_a_branden, "A_n gamma vs interior peaks"),
    CheckSpec("gammaB-petersen", 1, 8, check_gamma_b_petersen, "B_n gamma vs left peaks"),
    CheckSpec("zeros-structure", 1, 12, check_zero_structure, "zeros of f_n, xi_n, zeta_n"),
)}


def n_range(spec: CheckSpec, n_max: Optional[int] = None, deep: bool = False) -> range:
    """Default range, raised by one under deep; an explicit n_max replaces the upper end."""
    upper = n_max if n_max is not None else spec.n_default + (1 if deep else 0)
    return range(spec.n_min, upper + 1)


def run_task(catalog: CatalogService, check_id: str, n: int) -> VerifyRow:
    """
    Runs one check at one n.

    Invariant and resource-guard errors propagate; only identity failures become failing rows.
    """
    spec = CHECKS[check_id]
    start = time.perf_counter()
    try:
        detail = spec.func(catalog, n)
        row = VerifyRow(check_id=check_id, n=n, status=CheckStatus.PASS, detail=detail)
    except CheckFailedError as e:
        row = VerifyRow(check_id=check_id, n=n, status=CheckStatus.FAIL, detail=str(e),
                        counterexample=e.counterexample)
        logger.error(f"{check_id} failed at n={n}: {e}")
    row.millis = int(round((time.perf_counter() - start) * 1000))
    logger.debug(f"{check_id} n={n}: {row.status.value} in {row.millis} ms")
    return row


_worker_catalog: Optional[CatalogService] = None


def _init_worker(cache_dir: Optional[str], guard: int) -> None:
    global _worker_catalog
    repository = PolynomialRepository(Path(cache_dir)) if cache_dir else None
    _worker_catalog = CatalogService(repository=repository, guard=guard)


def _run_in_worker(check_id: str, n: int) -> VerifyRow:
    return run_task(_worker_catalog, check_id, n)


class VerifyService:
    """
    Service running registered checks and collecting a VerifyReport.
    """

    def __init__(self, catalog: CatalogService, cache_dir: Optional[Path] = None) -> None:
        """
        Initialize the service with its dependencies.

        Args:
            catalog (CatalogService): Catalog used by in-process runs.
            cache_dir (Optional[Path]): Cache directory handed to worker processes.
        """
        self.catalog = catalog
        self.cache_dir = cache_dir

    @staticmethod
    def resolve(check_ids: Optional[Sequence[str]] = None) -> List[CheckSpec]:
        """
        Maps ids to specs in registry order; None selects every check.

        Raises:
            UnknownNameError: For an unknown id.
        """
        if not check_ids:
            return list(CHECKS.values())
        unknown = [cid for cid in check_ids if cid not in CHECKS]
        if unknown:
            raise UnknownNameError(f"Unknown check id(s) {unknown}; expected one of {list(CHECKS)}")
        wanted = set(check_ids)
        return [spec for spec in CHECKS.values() if spec.check_id in wanted]

    def tasks(self, check_ids: Optional[Sequence[str]] = None, n_max: Optional[int] = None,
              deep: bool = False) -> List[Tuple[str, int]]:
        return [(spec.check_id, n) for spec in self.resolve(check_ids) for n in n_range(spec, n_max, deep)]

    def run(self, check_ids: Optional[Sequence[str]] = None, n_max: Optional[int] = None,
            deep: bool = False, jobs: int = 1) -> VerifyReport:
        """
        Runs the selected checks.

        Args:
            check_ids (Optional[Sequence[str]]): Checks to run; None for all.
            n_max (Optional[int]): Absolute upper bound on n for every check.
            deep (bool): Raise each default range by one.
            jobs (int): Worker processes; 1 runs in-process.

        Returns:
            VerifyReport: Rows in registry order, then ascending n.
        """
        tasks = self.tasks(check_ids, n_max, deep)
        logger.info(f"Running {len(tasks)} check tasks with {jobs} worker(s)")
        started = time.perf_counter()
        if jobs <= 1:
            rows = [run_task(self.catalog, check_id, n) for check_id, n in tasks]
        else:
            results: Dict[int, VerifyRow] = {}
            cache_dir = str(self.cache_dir) if self.cache_dir else None
            with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker,
                                     initargs=(cache_dir, self.catalog.guard)) as executor:
                futures = {executor.submit(_run_in_worker, check_id, n): index
                           for index, (check_id, n) in enumerate(tasks)}
                for future in as_completed(futures):
                    results[futures[future]] = future.result()
            rows = [results[index] for index in range(len(tasks))]
        report = VerifyReport(rows=rows)
        elapsed = time.perf_counter() - started
        logger.info(f"Finished {len(rows)} check tasks in {elapsed:.1f} s, {len(report.failures)} failing")
        return report

    def run_check(self, check_id: str, n_max: Optional[int] = None, deep: bool = False,
                  jobs: int = 1) -> VerifyReport:
        """
        Runs one registered check over its n range.

        Raises:
            UnknownNameError: If check_id is not registered.
        """
        return self.run([check_id], n_max=n_max, deep=deep, jobs=jobs)
