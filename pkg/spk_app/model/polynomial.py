"""
Polynomial Model Module

This module defines the sparse multivariate polynomial used by every other
layer. Coefficients are arbitrary-precision integers and exponents are signed
integers, so Laurent monomials can appear while clearing denominators.

A monomial is a tuple of (variable, exponent) pairs sorted by variable name
with zero exponents removed; the empty tuple is the constant monomial. A
Polynomial never stores a zero coefficient, which makes structural equality
the same as mathematical equality. Values are immutable: every operation
returns a new Polynomial.
"""

import re
import sys
from fractions import Fraction
from math import comb
from types import MappingProxyType
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Set, Tuple, Union

from spk_app.errors import PolynomialError

Monomial = Tuple[Tuple[str, int], ...]
Scalar = Union[int, Fraction]
PolyLike = Union["Polynomial", int]

ONE_MONOMIAL: Monomial = ()

_NAME_PATTERN = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


def var_name(name: str) -> str:
    """
    Validates and interns a variable name.

    Args:
        name (str): Candidate name; ASCII letters, digits and underscores, not starting with a digit.

    Returns:
        str: The interned name.

    Raises:
        PolynomialError: If the name is not a valid identifier.
    """
    if not isinstance(name, str) or not _NAME_PATTERN.match(name):
        raise PolynomialError(f"Invalid variable name: {name!r}")
    return sys.intern(name)


def make_monomial(exponents: Mapping[str, int]) -> Monomial:
    """
    Builds a canonical monomial from a variable -> exponent mapping.

    Args:
        exponents (Mapping[str, int]): Exponent of each variable; zeros are dropped.

    Returns:
        Monomial: The sorted monomial tuple.
    """
    return tuple(sorted((var_name(v), int(e)) for v, e in exponents.items() if e != 0))


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    """Multiplies two monomials by adding exponents."""
    if not a:
        return b
    if not b:
        return a
    merged = dict(a)
    for v, e in b:
        total = merged.get(v, 0) + e
        if total:
            merged[v] = total
        else:
            del merged[v]
    return tuple(sorted(merged.items()))


def mono_degree(m: Monomial) -> int:
    return sum(e for _, e in m)


class Polynomial:
    """
    Immutable sparse polynomial with integer coefficients.

    Supports +, -, * and non-negative powers with other polynomials and
    integers. A negative power is allowed only for a monomial whose
    coefficient is 1 or -1, since the result must stay integral.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Optional[Mapping[Monomial, int]] = None) -> None:
        """
        Args:
            terms (Optional[Mapping[Monomial, int]]): Monomial -> coefficient map; zero coefficients are discarded.
        """
        clean: Dict[Monomial, int] = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(coeff, int):
                raise PolynomialError(f"Coefficients must be integers, got {coeff!r}")
            if coeff:
                clean[mono] = coeff
        self._terms = clean
        self._hash: Optional[int] = None

    @classmethod
    def _wrap(cls, terms: Dict[Monomial, int]) -> "Polynomial":
        # terms already validated by the caller; only zero coefficients are dropped
        poly = cls.__new__(cls)
        poly._terms = {m: c for m, c in terms.items() if c}
        poly._hash = None
        return poly

    # --- Constructors ---------------------------------------------------------

    @classmethod
    def zero(cls) -> "Polynomial":
        return cls._wrap({})

    @classmethod
    def constant(cls, value: int) -> "Polynomial":
        return cls._wrap({ONE_MONOMIAL: int(value)})

    @classmethod
    def var(cls, name: str, exponent: int = 1) -> "Polynomial":
        """
        Builds the polynomial consisting of a single variable power.

        Args:
            name (str): Variable name.
            exponent (int): Exponent, possibly negative.

        Returns:
            Polynomial: name^exponent.
        """
        return cls._wrap({make_monomial({name: exponent}): 1})

    @classmethod
    def monomial(cls, exponents: Mapping[str, int], coeff: int = 1) -> "Polynomial":
        return cls._wrap({make_monomial(exponents): coeff})

    @classmethod
    def from_counts(cls, variables: Sequence[str], counts: Mapping[Tuple[int, ...], int]) -> "Polynomial":
        """
        Aggregates a distribution of exponent vectors into a polynomial.

        Args:
            variables (Sequence[str]): Variable attached to each vector position.
            counts (Mapping[Tuple[int, ...], int]): Multiplicity of each exponent vector.

        Returns:
            Polynomial: Sum of count * prod(variables[i] ** vector[i]).
        """
        names = [var_name(v) for v in variables]
        terms: Dict[Monomial, int] = {}
        for vector, count in counts.items():
            if len(vector) != len(names):
                raise PolynomialError("Exponent vector length does not match the variable list")
            exps: Dict[str, int] = {}
            for name, e in zip(names, vector):
                if e:
                    exps[name] = exps.get(name, 0) + e
            mono = tuple(sorted((v, e) for v, e in exps.items() if e))
            terms[mono] = terms.get(mono, 0) + count
        return cls._wrap(terms)

    @classmethod
    def from_coefficients(cls, coeffs: Sequence[int], name: str = "x") -> "Polynomial":
        """Builds sum(coeffs[k] * name^k)."""
        v = var_name(name)
        return cls._wrap({((v, k),) if k else ONE_MONOMIAL: int(c) for k, c in enumerate(coeffs)})

    @staticmethod
    def total(polys: Iterable[PolyLike]) -> "Polynomial":
        """Sums many polynomials into one accumulator."""
        acc: Dict[Monomial, int] = {}
        for p in polys:
            for mono, coeff in as_polynomial(p)._terms.items():
                acc[mono] = acc.get(mono, 0) + coeff
        return Polynomial._wrap(acc)

    # --- Inspection -----------------------------------------------------------

    @property
    def terms(self) -> Mapping[Monomial, int]:
        return MappingProxyType(self._terms)

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def is_constant(self) -> bool:
        return not self._terms or (len(self._terms) == 1 and ONE_MONOMIAL in self._terms)

    @property
    def constant_term(self) -> int:
        return self._terms.get(ONE_MONOMIAL, 0)

    @property
    def is_laurent(self) -> bool:
        """True when some term carries a negative exponent."""
        return any(e < 0 for mono in self._terms for _, e in mono)

    def variables(self) -> Set[str]:
        return {v for mono in self._terms for v, _ in mono}

    def degree(self, name: Optional[str] = None) -> int:
        """
        Returns the total degree, or the degree in one variable.

        Args:
            name (Optional[str]): Variable to measure; total degree when omitted.

        Returns:
            int: The degree; -1 for the zero polynomial.
        """
        if not self._terms:
            return -1
        if name is None:
            return max(mono_degree(m) for m in self._terms)
        return max(dict(m).get(name, 0) for m in self._terms)

    def coefficients(self, name: str = "x") -> List[int]:
        """
        Returns the dense coefficient list of a univariate polynomial.

        Args:
            name (str): The single variable allowed to appear.

        Returns:
            List[int]: Coefficients from degree 0 upward; empty for zero.

        Raises:
            PolynomialError: For other variables or negative exponents.
        """
        extra = self.variables() - {name}
        if extra:
            raise PolynomialError(f"Expected a polynomial in {name} only, found {sorted(extra)}")
        if not self._terms:
            return []
        out = [0] * (self.degree(name) + 1)
        for mono, coeff in self._terms.items():
            e = mono[0][1] if mono else 0
            if e < 0:
                raise PolynomialError("Negative exponent in a univariate coefficient list")
            out[e] = coeff
        return out

    def coefficient(self, exponents: Mapping[str, int]) -> int:
        return self._terms.get(make_monomial(exponents), 0)

    # --- Arithmetic -----------------------------------------------------------

    def __add__(self, other: PolyLike) -> "Polynomial":
        if not isinstance(other, (Polynomial, int)):
            return NotImplemented
        return add(self, other)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._wrap({m: -c for m, c in self._terms.items()})

    def __sub__(self, other: PolyLike) -> "Polynomial":
        if not isinstance(other, (Polynomial, int)):
            return NotImplemented
        return add(self, -as_polynomial(other))

    def __rsub__(self, other: PolyLike) -> "Polynomial":
        if not isinstance(other, (Polynomial, int)):
            return NotImplemented
        return add(as_polynomial(other), -self)

    def __mul__(self, other: PolyLike) -> "Polynomial":
        if not isinstance(other, (Polynomial, int)):
            return NotImplemented
        return mul(self, other)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Polynomial":
        if not isinstance(exponent, int):
            return NotImplemented
        if exponent < 0:
            return self.inverse() ** -exponent
        result = Polynomial.constant(1)
        base = self
        while exponent:
            if exponent & 1:
                result = mul(result, base)
            exponent >>= 1
            if exponent:
                base = mul(base, base)
        return result

    def inverse(self) -> "Polynomial":
        """
        Inverts a unit monomial (coefficient 1 or -1).

        Raises:
            PolynomialError: If the polynomial is not a unit monomial.
        """
        if len(self._terms) != 1:
            raise PolynomialError("Only a single monomial can be raised to a negative power")
        ((mono, coeff),) = self._terms.items()
        if coeff not in (1, -1):
            raise PolynomialError(f"Monomial with coefficient {coeff} has no integral inverse")
        return Polynomial._wrap({tuple((v, -e) for v, e in mono): coeff})

    def exact_div(self, divisor: int) -> "Polynomial":
        """Divides every coefficient by an integer that must divide it exactly."""
        if divisor == 0:
            raise PolynomialError("Division by zero")
        out: Dict[Monomial, int] = {}
        for mono, coeff in self._terms.items():
            q, r = divmod(coeff, divisor)
            if r:
                raise PolynomialError(f"Coefficient {coeff} is not divisible by {divisor}")
            out[mono] = q
        return Polynomial._wrap(out)

    # --- Protocols ------------------------------------------------------------

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            # constants hash like the int they compare equal to
            self._hash = hash(self.constant_term) if self.is_constant else hash(frozenset(self._terms.items()))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self._terms)

    def __str__(self) -> str:
        from spk_app.model.codec import serialize
        return serialize(self)

    def __repr__(self) -> str:
        return f"Polynomial({str(self)!r})"


def as_polynomial(value: PolyLike) -> Polynomial:
    """Coerces an integer or Polynomial to a Polynomial."""
    if isinstance(value, Polynomial):
        return value
    if isinstance(value, int):
        return Polynomial.constant(value)
    raise PolynomialError(f"Cannot use {value!r} as a polynomial")


def add(p: PolyLike, q: PolyLike) -> Polynomial:
    """Returns p + q."""
    p, q = as_polynomial(p), as_polynomial(q)
    out = dict(p._terms)
    for mono, coeff in q._terms.items():
        out[mono] = out.get(mono, 0) + coeff
    return Polynomial._wrap(out)


def mul(p: PolyLike, q: PolyLike) -> Polynomial:
    """Returns p * q."""
    p, q = as_polynomial(p), as_polynomial(q)
    if not p._terms or not q._terms:
        return Polynomial.zero()
    if len(p._terms) > len(q._terms):
        p, q = q, p
    out: Dict[Monomial, int] = {}
    for m1, c1 in p._terms.items():
        for m2, c2 in q._terms.items():
            m = mono_mul(m1, m2)
            out[m] = out.get(m, 0) + c1 * c2
    return Polynomial._wrap(out)


def substitute(p: Polynomial, subs: Mapping[str, PolyLike]) -> Polynomial:
    """
    Replaces variables by polynomials, simultaneously.

    Variables absent from `subs` are kept as they are. A variable carrying a
    negative exponent may only be replaced by a unit monomial.

    Args:
        p (Polynomial): The polynomial to rewrite.
        subs (Mapping[str, PolyLike]): Variable -> replacement.

    Returns:
        Polynomial: The substituted polynomial.

    Raises:
        PolynomialError: If a negative power of a non-invertible replacement is needed.
    """
    if not subs:
        return p
    images = {var_name(v): as_polynomial(image) for v, image in subs.items()}
    powers: Dict[Tuple[str, int], Polynomial] = {}
    acc: Dict[Monomial, int] = {}
    for mono, coeff in p._terms.items():
        kept: List[Tuple[str, int]] = []
        factor = Polynomial.constant(coeff)
        for v, e in mono:
            image = images.get(v)
            if image is None:
                kept.append((v, e))
                continue
            key = (v, e)
            if key not in powers:
                powers[key] = image ** e
            factor = mul(factor, powers[key])
        rest = tuple(kept)
        for m, c in factor._terms.items():
            merged = mono_mul(rest, m)
            acc[merged] = acc.get(merged, 0) + c
    return Polynomial._wrap(acc)


def rename(p: Polynomial, mapping: Mapping[str, str]) -> Polynomial:
    """Renames variables; two variables may be mapped onto the same name."""
    return substitute(p, {old: Polynomial.var(new) for old, new in mapping.items()})


def diff(p: Polynomial, name: str) -> Polynomial:
    """
    Formal partial derivative with respect to one variable.

    Raises:
        PolynomialError: If `name` appears with a negative exponent.
    """
    out: Dict[Monomial, int] = {}
    for mono, coeff in p._terms.items():
        for idx, (v, e) in enumerate(mono):
            if v != name:
                continue
            if e < 0:
                raise PolynomialError(f"Cannot differentiate negative power of {name}")
            if e == 1:
                reduced = mono[:idx] + mono[idx + 1:]
            else:
                reduced = mono[:idx] + ((v, e - 1),) + mono[idx + 1:]
            out[reduced] = out.get(reduced, 0) + coeff * e
            break
    return Polynomial._wrap(out)


def eval_at(p: Polynomial, point: Mapping[str, Scalar]) -> Fraction:
    """
    Evaluates a polynomial exactly at a rational point.

    Args:
        p (Polynomial): Polynomial to evaluate.
        point (Mapping[str, Scalar]): Value of every variable of p.

    Returns:
        Fraction: The exact value.

    Raises:
        PolynomialError: For an unassigned variable or a negative power of zero.
    """
    total = Fraction(0)
    for mono, coeff in p._terms.items():
        value = Fraction(coeff)
        for v, e in mono:
            if v not in point:
                raise PolynomialError(f"Variable {v} has no value at the evaluation point")
            x = Fraction(point[v])
            if e < 0 and x == 0:
                raise PolynomialError(f"Negative power of {v} evaluated at zero")
            value *= x ** e
        total += value
    return total


def coeff_extract(p: Polynomial, variables: Iterable[str]) -> Dict[Monomial, Polynomial]:
    """
    Groups p by monomials in the chosen variables.

    Args:
        p (Polynomial): Polynomial to split.
        variables (Iterable[str]): The variables to extract.

    Returns:
        Dict[Monomial, Polynomial]: Monomial m in the chosen variables -> coefficient of m,
        a polynomial in the remaining variables.
    """
    chosen = set(variables)
    groups: Dict[Monomial, Dict[Monomial, int]] = {}
    for mono, coeff in p._terms.items():
        key = tuple(item for item in mono if item[0] in chosen)
        rest = tuple(item for item in mono if item[0] not in chosen)
        bucket = groups.setdefault(key, {})
        bucket[rest] = bucket.get(rest, 0) + coeff
    return {key: Polynomial._wrap(bucket) for key, bucket in groups.items()}


def gamma_decompose(p: Polynomial, n: int, name: Optional[str] = None) -> List[int]:
    """
    Writes a palindromic polynomial in the basis x^k (1+x)^(n-1-2k).

    The lowest remaining coefficient is peeled off repeatedly; anything left
    over means p was not palindromic of centre (n-1)/2.

    Args:
        p (Polynomial): Univariate polynomial of degree at most n-1.
        n (int): Index fixing the centre of symmetry; n >= 1.
        name (Optional[str]): Variable of p; inferred when omitted.

    Returns:
        List[int]: g_0 .. g_{floor((n-1)/2)}.

    Raises:
        PolynomialError: If p is multivariate, too large or not palindromic.
    """
    if n < 1:
        raise PolynomialError("gamma_decompose needs n >= 1")
    names = p.variables()
    if len(names) > 1:
        raise PolynomialError(f"gamma_decompose needs a univariate polynomial, got {sorted(names)}")
    name = name or (next(iter(names)) if names else "x")
    span = n - 1
    coeffs = p.coefficients(name)
    if len(coeffs) > span + 1:
        raise PolynomialError(f"Degree {len(coeffs) - 1} exceeds {span}")
    coeffs = coeffs + [0] * (span + 1 - len(coeffs))
    gammas: List[int] = []
    for k in range(span // 2 + 1):
        g = coeffs[k]
        gammas.append(g)
        if g:
            width = span - 2 * k
            for t in range(width + 1):
                coeffs[k + t] -= g * comb(width, t)
    if any(coeffs):
        raise PolynomialError("Polynomial is not palindromic around (n-1)/2")
    return gammas
