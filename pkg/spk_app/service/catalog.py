"""
Polynomial Catalog Service

This module computes every named polynomial family by each route available
for it: a fast route (recurrence or gamma substitution), an enumeration route
that sums a statistic over a family of objects, and for some families a
context-free grammar route. The verification layer compares these routes.

Fast-route results are stored in the optional PolynomialRepository so repeated
command line invocations can reuse them.
"""

from functools import lru_cache
from math import comb
from typing import Callable, Dict, List, Mapping, NamedTuple, Optional, Tuple, Union

from spk_app.config import DEFAULT_RESOURCE_GUARD
from spk_app.errors import IndexRangeError, InvariantError, RouteDisagreementError, UnknownNameError
from spk_app.logger.logger import logger
from spk_app.model.codec import parse
from spk_app.model.polynomial import (
    Polynomial,
    PolyLike,
    as_polynomial,
    diff,
    substitute,
)
from spk_app.model.records import GammaTable
from spk_app.repository.poly_repo import PolynomialRepository
from spk_app.service.grammar import builtin, derive_iter
from spk_app.service.stats import (
    perm_record_counts,
    project,
    signed_record_counts,
    word_record_counts,
)

X = Polynomial.var("x")
ONE = Polynomial.constant(1)


# --- Scalar triangles ---------------------------------------------------------

@lru_cache(maxsize=None)
def _stirling2_row(n: int) -> Tuple[int, ...]:
    if n == 0:
        return (1,)
    prev = _stirling2_row(n - 1)
    return tuple(
        (k * prev[k] if k < len(prev) else 0) + (prev[k - 1] if k >= 1 else 0)
        for k in range(n + 1)
    )


def stirling2(n: int, k: int) -> int:
    """
    Stirling number of the second kind: set partitions of [n] into k blocks.

    Raises:
        IndexRangeError: Unless 0 <= k <= n.
    """
    if n < 0 or k < 0 or k > n:
        raise IndexRangeError(f"stirling2 needs 0 <= k <= n, got n={n}, k={k}")
    return _stirling2_row(n)[k]


# --- Recurrences ----------------------------------------------------------------

def _derivative_step(p: Polynomial, multiplier: PolyLike, slope: PolyLike) -> Polynomial:
    """Returns multiplier * p + slope * p'."""
    return as_polynomial(multiplier) * p + as_polynomial(slope) * diff(p, "x")


@lru_cache(maxsize=None)
def eulerian_a(n: int) -> Polynomial:
    """Type A Eulerian polynomial; A_0 = 1."""
    if n < 0:
        raise IndexRangeError("A_n needs n >= 0")
    if n == 0:
        return ONE
    return _derivative_step(eulerian_a(n - 1), 1 + (n - 1) * X, X * (1 - X))


@lru_cache(maxsize=None)
def eulerian_b(n: int) -> Polynomial:
    """Type B Eulerian polynomial; B_0 = 1."""
    if n < 0:
        raise IndexRangeError("B_n needs n >= 0")
    if n == 0:
        return ONE
    return _derivative_step(eulerian_b(n - 1), 1 + (2 * n - 1) * X, 2 * X * (1 - X))


@lru_cache(maxsize=None)
def eulerian_bq(n: int) -> Polynomial:
    """Joint distribution of (desB, neg) over signed permutations, in x and q."""
    if n < 0:
        raise IndexRangeError("B_n(x,q) needs n >= 0")
    if n == 0:
        return ONE
    q = Polynomial.var("q")
    return _derivative_step(eulerian_bq(n - 1), 1 + ((1 + q) * n - 1) * X, (1 + q) * X * (1 - X))


@lru_cache(maxsize=None)
def up_down_runs(n: int) -> Polynomial:
    """T_n(x), the distribution of up-down runs over S_n; T_0 = 1, T_1 = x."""
    if n < 0:
        raise IndexRangeError("T_n needs n >= 0")
    if n <= 1:
        return ONE if n == 0 else X
    return _derivative_step(up_down_runs(n - 1), X * ((n - 1) * X + 1), X * (1 - X ** 2))


@lru_cache(maxsize=None)
def xi_zeta(n: int) -> Tuple[Polynomial, Polynomial]:
    """
    The pair (xi_n, zeta_n) from the polynomial recurrence system.

    The system is run on a_n = 2 xi_n to stay over the integers.
    """
    if n < 1:
        raise IndexRangeError("xi_n and zeta_n need n >= 1")
    a, zeta = Polynomial.constant(2), Polynomial.zero()
    for m in range(1, n):
        a, zeta = (
            _derivative_step(a, 1 + (m - 1) * X, 2 * X * (1 - X)) + X * zeta,
            _derivative_step(zeta, 2 + (m - 2) * X, 2 * X * (1 - X)) + a,
        )
    return a.exact_div(2), zeta


@lru_cache(maxsize=None)
def xi_zeta_coefficients(n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
    """
    xi(n, k) and zeta(n, k) from the coefficient-level recurrence.

    Raises:
        InvariantError: If a half-integer ever appears.
    """
    if n < 1:
        raise IndexRangeError("xi(n,k) and zeta(n,k) need n >= 1")
    xi: Dict[int, int] = {0: 1}
    zeta: Dict[int, int] = {}
    for m in range(1, n):
        new_xi: Dict[int, int] = {}
        new_zeta: Dict[int, int] = {}
        for k in range(0, m // 2 + 2):
            doubled = 2 * ((1 + 2 * k) * xi.get(k, 0) + (m - 2 * k + 1) * xi.get(k - 1, 0)) + zeta.get(k - 1, 0)
            if doubled % 2:
                raise InvariantError(f"xi({m + 1},{k}) is not an integer")
            if doubled:
                new_xi[k] = doubled // 2
            value = 2 * (1 + k) * zeta.get(k, 0) + (m - 2 * k) * zeta.get(k - 1, 0) + 2 * xi.get(k, 0)
            if value:
                new_zeta[k] = value
        xi, zeta = new_xi, new_zeta
    width = max(list(xi) + list(zeta) + [0]) + 1
    return tuple(xi.get(k, 0) for k in range(width)), tuple(zeta.get(k, 0) for k in range(width))


@lru_cache(maxsize=None)
def f_poly(n: int) -> Polynomial:
    """f_n(x) with f_1 = 2; T_n = (x/2) f_n."""
    if n < 1:
        raise IndexRangeError("f_n needs n >= 1")
    if n == 1:
        return Polynomial.constant(2)
    return _derivative_step(f_poly(n - 1), 1 + X + (n - 2) * X ** 2, X * (1 - X ** 2))


@lru_cache(maxsize=None)
def ascent_plateau(n: int) -> Polynomial:
    """M_n(x), the distribution of ascent-plateaux over Q_n; M_0 = 1."""
    if n < 0:
        raise IndexRangeError("M_n needs n >= 0")
    if n == 0:
        return ONE
    return _derivative_step(ascent_plateau(n - 1), 1 + 2 * (n - 1) * X, 2 * X * (1 - X))


@lru_cache(maxsize=None)
def left_ascent_plateau(n: int) -> Polynomial:
    """M~_n(x), the distribution of left ascent-plateaux over Q_n; M~_0 = 1."""
    if n < 0:
        raise IndexRangeError("M~_n needs n >= 0")
    if n == 0:
        return ONE
    return _derivative_step(left_ascent_plateau(n - 1), (2 * n - 1) * X, 2 * X * (1 - X))


@lru_cache(maxsize=None)
def derangement_poly(n: int) -> Polynomial:
    """d_n(x), excedances over derangements; d_0 = 1, d_1 = 0."""
    if n < 0:
        raise IndexRangeError("d_n needs n >= 0")
    if n == 0:
        return ONE
    if n == 1:
        return Polynomial.zero()
    prev, prev2 = derangement_poly(n - 1), derangement_poly(n - 2)
    return (n - 1) * X * (prev + prev2) + X * (1 - X) * diff(prev, "x")


def type_d_eulerian(n: int) -> Polynomial:
    """D_n(x) = B_n(x) - n 2^(n-1) x A_(n-1)(x), for n >= 2."""
    if n < 2:
        raise IndexRangeError("D_n needs n >= 2")
    return eulerian_b(n) - n * 2 ** (n - 1) * X * eulerian_a(n - 1)


def stirling2_row_poly(n: int) -> Polynomial:
    """sum_k S2(n, k) x^k."""
    if n < 0:
        raise IndexRangeError("S2 rows need n >= 0")
    return Polynomial.from_coefficients(_stirling2_row(n))


# --- Gamma tables -------------------------------------------------------------

@lru_cache(maxsize=None)
def gamma_table_by_recursion(n: int) -> GammaTable:
    """gamma(n, i, j, k) pushed forward from gamma(1, 0, 0, 1) = 1."""
    if n < 1:
        raise IndexRangeError("Gamma tables start at n = 1")
    table: Dict[Tuple[int, int, int], int] = {(0, 0, 1): 1}
    for _ in range(2, n + 1):
        nxt: Dict[Tuple[int, int, int], int] = {}
        for (i, j, k), g in table.items():
            if i:
                key = (i - 1, j, k + 1)
                nxt[key] = nxt.get(key, 0) + 3 * i * g
            if j:
                key = (i + 1, j - 1, k + 1)
                nxt[key] = nxt.get(key, 0) + 2 * j * g
            if k:
                key = (i, j + 1, k)
                nxt[key] = nxt.get(key, 0) + k * g
        table = {key: value for key, value in nxt.items() if value}
    return GammaTable(n=n, entries=table)


@lru_cache(maxsize=None)
def gamma_table_by_grammar(n: int) -> GammaTable:
    """Reads gamma(n, i, j, k) off D_H^(n-1)(w) as the coefficient of u^i v^j w^k."""
    if n < 1:
        raise IndexRangeError("Gamma tables start at n = 1")
    grammar = builtin("H")
    power = derive_iter(grammar, grammar.seed, n - 1)
    entries: Dict[Tuple[int, int, int], int] = {}
    for mono, coeff in power.terms.items():
        exps = dict(mono)
        entries[(exps.get("u", 0), exps.get("v", 0), exps.get("w", 0))] = coeff
    return GammaTable(n=n, entries=entries)


GAMMA_SUBSTITUTIONS: Mapping[str, Mapping[str, str]] = {
    "C3": {"u": "x + y + z", "v": "x*y + y*z + x*z", "w": "x*y*z", "t": "1"},
    "N": {"u": "3", "v": "p + q + r", "w": "p*q*r", "t": "1"},
    "Q6": {"u": "x + y + z", "v": "x*y*p + x*z*q + y*z*r", "w": "x*y*z*p*q*r", "t": "1"},
    "Q8": {"u": "x + y + z", "v": "x*y*p + x*z*q + y*z*r", "w": "x*y*z*p*q*r*s", "t": "t"},
    "F17": {
        "u": "alpha1*beta2*beta4*x + alpha2*beta1*beta6*y + alpha3*beta3*beta5*z",
        "v": "beta4*beta6*x*y*p + beta2*beta5*x*z*q + beta1*beta3*y*z*r",
        "w": "x*y*z*p*q*r*s",
        "t": "t",
    },
    "NP": {"u": "alpha1 + alpha2 + alpha3", "v": "p + q + r", "w": "p*q*r", "t": "1"},
    "Palpha": {"u": "alpha1 + alpha2 + alpha3", "v": "3", "w": "1", "t": "1"},
    "E6": {"u": "beta2*beta4 + beta1*beta6 + beta3*beta5", "v": "beta4*beta6 + beta2*beta5 + beta1*beta3", "w": "1", "t": "1"},
    "Mbeta": {"u": "beta1 + beta4 + beta5", "v": "beta1 + beta4 + beta5", "w": "1", "t": "1"},
}

# statistic -> variable of the enumeration weight of each word family
WORD_WEIGHTS: Mapping[str, Tuple[Tuple[str, str], ...]] = {
    "C3": (("asc", "x"), ("plat", "y"), ("des", "z")),
    "N": (("lap", "p"), ("eud", "q"), ("rpd", "r")),
    "Q6": (("asc", "x"), ("plat", "y"), ("des", "z"), ("lap", "p"), ("eud", "q"), ("rpd", "r")),
    "Q8": (("asc", "x"), ("plat", "y"), ("des", "z"), ("lap", "p"), ("eud", "q"), ("rpd", "r"),
           ("apd", "s"), ("vv", "t")),
    "F17": (("asc", "x"), ("plat", "y"), ("des", "z"), ("lap", "p"), ("eud", "q"), ("rpd", "r"),
            ("apd", "s"), ("vv", "t"), ("apap", "alpha1"), ("dpa", "alpha2"), ("pdpd", "alpha3"),
            ("dplat", "beta1"), ("dasc", "beta2"), ("dd", "beta3"), ("uu", "beta4"), ("ddes", "beta5"),
            ("pasc", "beta6")),
    "NP": (("lap", "p"), ("eud", "q"), ("rpd", "r"), ("apap", "alpha1"), ("dpa", "alpha2"), ("pdpd", "alpha3")),
    "Palpha": (("apap", "alpha1"), ("dpa", "alpha2"), ("pdpd", "alpha3")),
    "E6": (("dplat", "beta1"), ("dasc", "beta2"), ("dd", "beta3"), ("uu", "beta4"), ("ddes", "beta5"),
           ("pasc", "beta6")),
    "Mbeta": (("dplat", "beta1"), ("uu", "beta4"), ("ddes", "beta5")),
    "M": (("ap", "x"),),
    "Mtilde": (("lap", "x"),),
}


def resolve_substitution(spec: Union[str, Mapping[str, PolyLike]]) -> Dict[str, Polynomial]:
    """
    Turns a built-in substitution name or an explicit u/v/w/t mapping into polynomials.

    Raises:
        UnknownNameError: For an unknown name or a mapping missing one of u, v, w, t.
    """
    if isinstance(spec, str):
        if spec not in GAMMA_SUBSTITUTIONS:
            raise UnknownNameError(f"Unknown gamma substitution {spec!r}; expected one of {sorted(GAMMA_SUBSTITUTIONS)}")
        return {key: parse(text) for key, text in GAMMA_SUBSTITUTIONS[spec].items()}
    missing = {"u", "v", "w", "t"} - set(spec)
    if missing:
        raise UnknownNameError(f"Gamma substitution is missing {sorted(missing)}")
    return {key: as_polynomial(spec[key]) for key in ("u", "v", "w", "t")}


class FamilyInfo(NamedTuple):
    """Variables and smallest index of a named family."""
    variables: Tuple[str, ...]
    n_min: int


FAMILIES: Mapping[str, FamilyInfo] = {
    "A": FamilyInfo(("x",), 0),
    "B": FamilyInfo(("x",), 0),
    "Bq": FamilyInfo(("x", "q"), 0),
    "b": FamilyInfo(("x", "y"), 1),
    "D": FamilyInfo(("x",), 2),
    "d": FamilyInfo(("x",), 0),
    "C3": FamilyInfo(("x", "y", "z"), 1),
    "T": FamilyInfo(("x",), 0),
    "xi": FamilyInfo(("x",), 1),
    "zeta": FamilyInfo(("x",), 1),
    "f": FamilyInfo(("x",), 1),
    "M": FamilyInfo(("x",), 0),
    "Mtilde": FamilyInfo(("x",), 0),
    "N": FamilyInfo(("p", "q", "r"), 1),
    "Q6": FamilyInfo(("x", "y", "z", "p", "q", "r"), 1),
    "Q8": FamilyInfo(("x", "y", "z", "p", "q", "r", "s", "t"), 1),
    "F17": FamilyInfo(tuple(v for _, v in WORD_WEIGHTS["F17"]), 1),
    "NP": FamilyInfo(("p", "q", "r", "alpha1", "alpha2", "alpha3"), 1),
    "Palpha": FamilyInfo(("alpha1", "alpha2", "alpha3"), 1),
    "E6": FamilyInfo(("beta1", "beta2", "beta3", "beta4", "beta5", "beta6"), 1),
    "Mbeta": FamilyInfo(("beta1", "beta4", "beta5"), 1),
    "S2": FamilyInfo(("x",), 0),
}

ROUTE_FAST = "fast"
ROUTE_ENUMERATION = "enumeration"
ROUTE_GRAMMAR = "grammar"


def family_info(name: str) -> FamilyInfo:
    """
    Raises:
        UnknownNameError: If the family does not exist.
    """
    try:
        return FAMILIES[name]
    except KeyError:
        raise UnknownNameError(f"Unknown polynomial family {name!r}; expected one of {list(FAMILIES)}") from None


class CatalogService:
    """
    Service computing named polynomial families by every available route.
    """

    def __init__(self, repository: Optional[PolynomialRepository] = None, guard: int = DEFAULT_RESOURCE_GUARD) -> None:
        """
        Initialize the service with its dependencies.

        Args:
            repository (Optional[PolynomialRepository]): Cache for fast-route results; None disables caching.
            guard (int): Largest enumeration the enumeration routes may run.
        """
        self.repository = repository
        self.guard = guard
        self._fast: Dict[str, Callable[[int], Polynomial]] = {
            "A": eulerian_a,
            "B": eulerian_b,
            "Bq": eulerian_bq,
            "b": self._b_by_grammar,
            "D": type_d_eulerian,
            "d": derangement_poly,
            "T": up_down_runs,
            "xi": lambda n: xi_zeta(n)[0],
            "zeta": lambda n: xi_zeta(n)[1],
            "f": f_poly,
            "M": ascent_plateau,
            "Mtilde": left_ascent_plateau,
            "S2": stirling2_row_poly,
        }
        self._grammar: Dict[str, Callable[[int], Polynomial]] = {
            "b": self._b_by_grammar,
            "Bq": self._bq_by_grammar,
            "C3": self._c3_by_grammar,
            "Q6": lambda n: substitute(self._q8_by_grammar(n), {"s": 1, "t": 1}),
            "Q8": self._q8_by_grammar,
            "F17": self._f17_by_grammar,
            "xi": lambda n: self.xi_zeta_by_grammar(n)[0],
            "zeta": lambda n: self.xi_zeta_by_grammar(n)[1],
        }

    # --- Family dispatch ------------------------------------------------------

    def routes(self, name: str) -> Tuple[str, ...]:
        """Lists the routes available for a family."""
        family_info(name)
        out = [ROUTE_FAST]
        if self._has_enumeration(name):
            out.append(ROUTE_ENUMERATION)
        if name in self._grammar:
            out.append(ROUTE_GRAMMAR)
        return tuple(out)

    def family_poly(self, name: str, n: int, route: str = ROUTE_FAST) -> Polynomial:
        """
        Computes a family polynomial.

        Args:
            name (str): Family name such as "b" or "Q8".
            n (int): Index.
            route (str): "fast", "enumeration" or "grammar".

        Returns:
            Polynomial: The family member.

        Raises:
            UnknownNameError: For an unknown family or a route the family lacks.
            IndexRangeError: When n is below the family's range.
            ResourceGuardError: When an enumeration route would be too large.
        """
        info = family_info(name)
        if n < info.n_min:
            raise IndexRangeError(f"Family {name} needs n >= {info.n_min}, got {n}")
        if route == ROUTE_FAST:
            return self._cached_fast(name, n)
        if route == ROUTE_ENUMERATION:
            return self._by_enumeration(name, n)
        if route == ROUTE_GRAMMAR and name in self._grammar:
            return self._grammar[name](n)
        raise UnknownNameError(f"Family {name} has no {route} route; available: {self.routes(name)}")

    def _cached_fast(self, name: str, n: int) -> Polynomial:
        if self.repository is not None:
            hit = self.repository.get(name, n)
            if hit is not None:
                logger.debug(f"Cache hit for {name}_{n}")
                return hit
        if name in self._fast:
            result = self._fast[name](n)
        else:
            result = self.gamma_substitute(n, name)
        if self.repository is not None:
            self.repository.save(name, n, result)
        return result

    def _has_enumeration(self, name: str) -> bool:
        return name in WORD_WEIGHTS or name in ("A", "B", "Bq", "b", "D", "d", "T")

    def _by_enumeration(self, name: str, n: int) -> Polynomial:
        if name in WORD_WEIGHTS:
            if n == 0:
                return ONE
            stats = tuple(stat for stat, _ in WORD_WEIGHTS[name])
            variables = tuple(v for _, v in WORD_WEIGHTS[name])
            return Polynomial.from_counts(variables, project(word_record_counts(n, self.guard), stats))
        if n == 0 and name in ("A", "B", "Bq", "d", "T"):
            return ONE
        if name == "A":
            return Polynomial.from_counts(("x",), project(perm_record_counts(n, False, self.guard), ("des",)))
        if name == "T":
            return Polynomial.from_counts(("x",), project(perm_record_counts(n, False, self.guard), ("udrun",)))
        if name == "d":
            return Polynomial.from_counts(("x",), project(perm_record_counts(n, True, self.guard), ("exc",)))
        if name == "B":
            return Polynomial.from_counts(("x",), project(signed_record_counts(n, False, self.guard), ("des_b",)))
        if name == "Bq":
            return Polynomial.from_counts(("x", "q"), project(signed_record_counts(n, False, self.guard), ("des_b", "neg")))
        if name == "b":
            return Polynomial.from_counts(("x", "y"), project(signed_record_counts(n, False, self.guard), ("des_a", "des_b")))
        if name == "D":
            return Polynomial.from_counts(("x",), project(signed_record_counts(n, True, self.guard), ("des_d",)))
        raise UnknownNameError(f"Family {name} has no enumeration route")

    # --- Grammar routes -------------------------------------------------------

    def _b_by_grammar(self, n: int) -> Polynomial:
        grammar = builtin("lemma21")
        power = derive_iter(grammar, grammar.seed, n - 1)
        return substitute(power, {"P": 1, "A": 1, "E": 1, "N": Polynomial.var("y"), "D": parse("x*y")})

    def b_by_changed_grammar(self, n: int) -> Polynomial:
        """b_n(x, y) from D^(n-1)(aE) under a=1+y, b=xy+y, E=1, c=xy, d=1+xy."""
        grammar = builtin("gprime")
        power = derive_iter(grammar, grammar.seed, n - 1)
        return substitute(power, {
            "a": parse("1 + y"), "b": parse("x*y + y"), "E": 1, "c": parse("x*y"), "d": parse("1 + x*y"),
        })

    def signed_triple_by_grammar(self, n: int) -> Polynomial:
        """sum over S_n^B of x^(desA+1) y^desB q^neg, via the q-refined grammar."""
        grammar = builtin("g1")
        power = derive_iter(grammar, grammar.seed, n - 1)
        return substitute(power, {"P": X, "A": 1, "E": 1, "N": parse("x*y"), "D": parse("x*y")})

    def signed_triple_by_word_grammar(self, n: int) -> Polynomial:
        """The same triple distribution via the grammar on single-one words."""
        grammar = builtin("g2")
        power = derive_iter(grammar, grammar.seed, n - 1)
        return substitute(power, {"g2_alpha": X, "g2_gamma": 1, "g2_W": 1, "g2_beta": parse("x*y")})

    def _bq_by_grammar(self, n: int) -> Polynomial:
        if n == 0:
            return ONE
        triple = self.signed_triple_by_grammar(n)
        return substitute(triple, {"x": 1, "y": X})

    def _c3_by_grammar(self, n: int) -> Polynomial:
        grammar = builtin("gxyz")
        return derive_iter(grammar, grammar.seed, n)

    def c3_by_dumont(self, n: int) -> Polynomial:
        """C_n(x,y,z) from C_(k+1) = xyz (d/dx + d/dy + d/dz) C_k, C_0 = x."""
        xyz = parse("x*y*z")
        current = X
        for _ in range(n):
            current = xyz * (diff(current, "x") + diff(current, "y") + diff(current, "z"))
        return current

    def _q8_by_grammar(self, n: int) -> Polynomial:
        grammar = builtin("I")
        power = derive_iter(grammar, grammar.seed, n - 1)
        subs = resolve_substitution("Q8")
        return substitute(power, {"P": subs["w"], "P1": subs["v"], "P2": subs["u"]})

    def _f17_by_grammar(self, n: int) -> Polynomial:
        grammar = builtin("J")
        power = derive_iter(grammar, grammar.seed, n - 1)
        subs = resolve_substitution("F17")
        return substitute(power, {"delta": subs["w"], "delta1": subs["v"], "delta2": subs["u"]})

    def xi_zeta_by_grammar(self, n: int) -> Tuple[Polynomial, Polynomial]:
        """
        Reads xi_n and zeta_n off D^(n-1)(aE) for the changed grammar.

        The power must have the form aE sum 4^k xi(n,k) c^k d^(n-1-2k)
        + bE sum 4^k zeta(n,k) c^k d^(n-2-2k).

        Raises:
            InvariantError: If any other monomial shows up or a coefficient is not divisible by 4^k.
        """
        if n < 1:
            raise IndexRangeError("xi_n and zeta_n need n >= 1")
        grammar = builtin("gprime")
        power = derive_iter(grammar, grammar.seed, n - 1)
        xi: Dict[int, int] = {}
        zeta: Dict[int, int] = {}
        for mono, coeff in power.terms.items():
            exps = dict(mono)
            k = exps.get("c", 0)
            if exps.get("E") != 1 or set(exps) - {"a", "b", "c", "d", "E"}:
                raise InvariantError(f"Unexpected monomial {mono} in the xi/zeta grammar power")
            if exps.get("a") == 1 and "b" not in exps and exps.get("d", 0) == n - 1 - 2 * k:
                target = xi
            elif exps.get("b") == 1 and "a" not in exps and exps.get("d", 0) == n - 2 - 2 * k:
                target = zeta
            else:
                raise InvariantError(f"Unexpected monomial {mono} in the xi/zeta grammar power")
            if coeff % 4 ** k:
                raise InvariantError(f"Coefficient {coeff} of {mono} is not divisible by 4^{k}")
            target[k] = coeff // 4 ** k
        return (
            Polynomial.total(Polynomial.monomial({"x": k}, v) for k, v in xi.items()),
            Polynomial.total(Polynomial.monomial({"x": k}, v) for k, v in zeta.items()),
        )

    # --- Gamma tables and substitution ---------------------------------------

    def gamma_table(self, n: int) -> GammaTable:
        """
        gamma(n, i, j, k) computed by the recursion and by the grammar H.

        Raises:
            RouteDisagreementError: If the two routes differ.
        """
        by_recursion = gamma_table_by_recursion(n)
        by_grammar = gamma_table_by_grammar(n)
        if by_recursion.entries != by_grammar.entries:
            raise RouteDisagreementError(
                f"Gamma table routes disagree at n={n}",
                {"n": n, "recursion": by_recursion.to_dict(), "grammar": by_grammar.to_dict()},
            )
        return by_recursion

    def gamma_substitute(self, n: int, spec: Union[str, Mapping[str, PolyLike]]) -> Polynomial:
        """
        Evaluates sum gamma(n,i,j,k) u^i v^j w^k t^(n-i-j-k) for a substitution.

        Args:
            n (int): Index, n >= 1.
            spec (Union[str, Mapping[str, PolyLike]]): Built-in name or explicit u, v, w, t images.

        Returns:
            Polynomial: The substituted expansion.

        Raises:
            InvariantError: If a table entry has i + j + k > n.
        """
        subs = resolve_substitution(spec)
        table = self.gamma_table(n)
        powers: Dict[Tuple[str, int], Polynomial] = {}

        def power(key: str, e: int) -> Polynomial:
            if (key, e) not in powers:
                powers[(key, e)] = subs[key] ** e
            return powers[(key, e)]

        terms: List[Polynomial] = []
        for (i, j, k), g in table.rows():
            rest = n - i - j - k
            if rest < 0:
                raise InvariantError(f"gamma({n},{i},{j},{k}) has negative t exponent")
            terms.append(g * power("u", i) * power("v", j) * power("w", k) * power("t", rest))
        return Polynomial.total(terms)

    # --- Expansion formulas ---------------------------------------------------

    def xi_zeta_from_runs(self, n: int) -> Tuple[Tuple[int, ...], Tuple[int, ...]]:
        """xi(n,k) = T(n, 2k+1) and zeta(n,k) = 2 T(n, 2k+2), read off T_n."""
        runs = up_down_runs(n).coefficients("x")
        xi = tuple(runs[2 * k + 1] if 2 * k + 1 < len(runs) else 0 for k in range((n + 1) // 2))
        zeta = tuple(2 * runs[2 * k + 2] if 2 * k + 2 < len(runs) else 0 for k in range((n + 1) // 2))
        return xi, zeta

    def bn_expansion_rhs(self, n: int) -> Polynomial:
        """
        Right-hand side of the expansion of b_n(x, y) in xi(n,k) and zeta(n,k).

        Raises:
            IndexRangeError: If n < 2.
        """
        if n < 2:
            raise IndexRangeError("The b_n expansion needs n >= 2")
        xi, zeta = self.xi_zeta_from_runs(n)
        y = Polynomial.var("y")
        xy = parse("x*y")
        first = Polynomial.total(4 ** k * c * xy ** k * (1 + xy) ** (n - 1 - 2 * k) for k, c in enumerate(xi) if c)
        second = Polynomial.total(4 ** k * c * xy ** k * (1 + xy) ** (n - 2 - 2 * k) for k, c in enumerate(zeta) if c)
        return (1 + y) * first + y * (1 + X) * second

    def carlitz_series(self, n: int, order: int) -> Tuple[List[int], List[int]]:
        """
        Both sides of sum_k S2(n+k, k) x^k = C_n(x) / (1-x)^(2n+1), truncated.

        Returns:
            Tuple[List[int], List[int]]: (series of C_n times 1/(1-x)^(2n+1), Stirling column), `order` terms each.
        """
        c_n = substitute(self.family_poly("C3", n), {"y": 1, "z": 1}).coefficients("x")
        inverse = [comb(2 * n + j, j) for j in range(order)]
        product = [sum(c_n[i] * inverse[j - i] for i in range(min(j, len(c_n) - 1) + 1)) for j in range(order)]
        column = [stirling2(n + k, k) for k in range(order)]
        return product, column
