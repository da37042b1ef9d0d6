"""
Context-Free Grammar Service

A grammar assigns to some variables a replacement polynomial. Its formal
derivative D acts on monomials by the Leibniz rule: each occurrence of a
variable with a rule is replaced by that rule, the others are constants.

The built-in grammars used by the catalog and verification layers are parsed
once at import time; applying a grammar never parses text.
"""

from dataclasses import dataclass
from types import MappingProxyType
from typing import Dict, Mapping, Tuple

from spk_app.errors import GrammarError, UnknownNameError
from spk_app.logger.logger import logger
from spk_app.model.codec import parse
from spk_app.model.polynomial import Monomial, Polynomial, mono_mul, var_name


@dataclass(frozen=True)
class Grammar:
    """
    A named set of substitution rules.

    Attributes:
        name (str): Identifier of the grammar.
        rules (Mapping[str, Polynomial]): Variable -> replacement polynomial.
        seed (Polynomial): Default starting polynomial.
    """
    name: str
    rules: Mapping[str, Polynomial]
    seed: Polynomial


def make_grammar(name: str, rules: Mapping[str, str], seed: str) -> Grammar:
    """
    Builds a Grammar from rule text.

    Args:
        name (str): Grammar identifier.
        rules (Mapping[str, str]): Variable -> polynomial text.
        seed (str): Polynomial text of the default seed.

    Returns:
        Grammar: The parsed grammar.
    """
    parsed = {var_name(v): parse(text) for v, text in rules.items()}
    return Grammar(name=name, rules=MappingProxyType(parsed), seed=parse(seed))


def derive(grammar: Grammar, p: Polynomial) -> Polynomial:
    """
    Applies the formal derivative of a grammar once.

    Args:
        grammar (Grammar): The grammar.
        p (Polynomial): Polynomial to differentiate.

    Returns:
        Polynomial: D(p).

    Raises:
        GrammarError: If a variable with a rule carries a negative exponent.
    """
    out: Dict[Monomial, int] = {}
    for mono, coeff in p.terms.items():
        for idx, (v, e) in enumerate(mono):
            rule = grammar.rules.get(v)
            if rule is None:
                continue
            if e < 0:
                raise GrammarError(f"Grammar {grammar.name} cannot act on {v}^{e}")
            if e == 1:
                reduced: Monomial = mono[:idx] + mono[idx + 1:]
            else:
                reduced = mono[:idx] + ((v, e - 1),) + mono[idx + 1:]
            scale = coeff * e
            for rule_mono, rule_coeff in rule.terms.items():
                merged = mono_mul(reduced, rule_mono)
                out[merged] = out.get(merged, 0) + scale * rule_coeff
    return Polynomial(out)


def derive_iter(grammar: Grammar, p: Polynomial, k: int) -> Polynomial:
    """
    Applies the derivative k times.

    Args:
        grammar (Grammar): The grammar.
        p (Polynomial): Starting polynomial.
        k (int): Number of applications, k >= 0.

    Returns:
        Polynomial: D^k(p).
    """
    if k < 0:
        raise GrammarError("The power of a grammar derivative must be non-negative")
    result = p
    for step in range(k):
        result = derive(grammar, result)
        logger.debug(f"{grammar.name}: D^{step + 1} has {len(result.terms)} terms")
    return result


def derive_powers(grammar: Grammar, p: Polynomial, k: int) -> Tuple[Polynomial, ...]:
    """Returns (p, D(p), ..., D^k(p))."""
    powers = [p]
    for _ in range(k):
        powers.append(derive(grammar, powers[-1]))
    return tuple(powers)


_BUILTIN_RULES: Dict[str, Tuple[Dict[str, str], str]] = {
    # type B descent pairs; seed PE + NE
    "lemma21": (
        {"P": "P*D + N*A", "N": "P*D + N*A", "E": "A*E + D*E", "A": "2*A*D", "D": "2*A*D"},
        "P*E + N*E",
    ),
    # up-down runs and the xi/zeta pair
    "gprime": (
        {"a": "2*b", "b": "2*a*c + b*d", "c": "2*c*d", "d": "4*c", "E": "d*E"},
        "a*E",
    ),
    # q-refinement tracking negative letters
    "g1": (
        {"P": "P*D + q*N*A", "N": "P*D + q*N*A", "E": "A*E + q*D*E", "A": "A*D + q*A*D", "D": "A*D + q*A*D"},
        "P*E + q*N*E",
    ),
    "g2": (
        {
            "g2_alpha": "g2_alpha*g2_W + q*g2_beta*g2_gamma",
            "g2_gamma": "g2_alpha*g2_W + q*g2_beta*g2_gamma",
            "g2_beta": "g2_beta*g2_W + q*g2_beta*g2_W",
            "g2_W": "g2_beta*g2_W + q*g2_beta*g2_W",
        },
        "g2_alpha*g2_W + q*g2_beta*g2_gamma",
    ),
    "g3": ({"x": "x*y + q*x*y", "y": "x*y + q*x*y"}, "1"),
    # ascents, plateaus and descents of Stirling permutations
    "gxyz": ({"x": "x*y*z", "y": "x*y*z", "z": "x*y*z"}, "x"),
    "H": ({"w": "v*w", "u": "3*w", "v": "2*u*w"}, "w"),
    "I": ({"P": "P*P1", "P1": "2*P*P2", "P2": "3*t*P"}, "P"),
    "J": ({"delta": "delta*delta1", "delta1": "2*delta*delta2", "delta2": "3*t*delta"}, "delta"),
}

BUILTIN_GRAMMARS: Mapping[str, Grammar] = MappingProxyType(
    {name: make_grammar(name, rules, seed) for name, (rules, seed) in _BUILTIN_RULES.items()}
)


def builtin(name: str) -> Grammar:
    """
    Looks up a built-in grammar.

    Raises:
        UnknownNameError: If no grammar has that name.
    """
    try:
        return BUILTIN_GRAMMARS[name]
    except KeyError:
        raise UnknownNameError(f"Unknown grammar {name!r}; expected one of {sorted(BUILTIN_GRAMMARS)}") from None
