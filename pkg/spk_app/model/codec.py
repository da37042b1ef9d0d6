"""
Polynomial Text Codec

Canonical text form of a Polynomial and the matching parser.

Terms are written in ascending graded order: lower total degree first, and
within a degree the monomial with the larger exponent on the alphabetically
first variable comes first. A coefficient of 1 is omitted except on the
constant term, "-x" stands for -1*x, terms are joined by " + " or " - ",
a leading negative sign has no space, and the zero polynomial is "0".

The parser accepts integers, identifiers, '+', '-', '*', '^' (with an optional
negative integer exponent) and parentheses, so every canonical string parses
back to the polynomial that produced it.
"""

import re
from typing import List, NamedTuple, Tuple

from spk_app.errors import PolynomialError, PolynomialParseError
from spk_app.model.polynomial import Monomial, Polynomial, mono_degree, var_name


def term_order_key(mono: Monomial) -> Tuple[int, Tuple[Tuple[str, int], ...]]:
    """Sort key placing monomials in ascending graded order."""
    return mono_degree(mono), tuple((v, -e) for v, e in mono)


def _term_body(mono: Monomial, magnitude: int) -> str:
    if not mono:
        return str(magnitude)
    factors = "*".join(v if e == 1 else f"{v}^{e}" for v, e in mono)
    return factors if magnitude == 1 else f"{magnitude}*{factors}"


def serialize(p: Polynomial) -> str:
    """
    Renders the canonical text of a polynomial.

    Args:
        p (Polynomial): The polynomial.

    Returns:
        str: Canonical text, e.g. "-3 + x^2*y".
    """
    if p.is_zero:
        return "0"
    parts: List[str] = []
    for index, (mono, coeff) in enumerate(sorted(p.terms.items(), key=lambda kv: term_order_key(kv[0]))):
        body = _term_body(mono, abs(coeff))
        if index == 0:
            parts.append(f"-{body}" if coeff < 0 else body)
        else:
            parts.append(f" - {body}" if coeff < 0 else f" + {body}")
    return "".join(parts)


class _Token(NamedTuple):
    kind: str
    text: str
    position: int


_TOKEN_PATTERN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*^()]))")


def _tokenize(text: str) -> List[_Token]:
    tokens: List[_Token] = []
    position = 0
    while position < len(text):
        if text[position:].strip() == "":
            break
        match = _TOKEN_PATTERN.match(text, position)
        if not match:
            offset = position + (len(text[position:]) - len(text[position:].lstrip()))
            raise PolynomialParseError(f"Unexpected character {text[offset]!r}", offset)
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), match.start(kind)))
        position = match.end()
    tokens.append(_Token("end", "", len(text)))
    return tokens


class _Parser:
    """Recursive-descent parser over the token list."""

    def __init__(self, text: str) -> None:
        self.tokens = _tokenize(text)
        self.index = 0

    @property
    def current(self) -> _Token:
        return self.tokens[self.index]

    def _advance(self) -> _Token:
        token = self.current
        self.index += 1
        return token

    def _accept(self, text: str) -> bool:
        if self.current.kind == "op" and self.current.text == text:
            self.index += 1
            return True
        return False

    def parse(self) -> Polynomial:
        if self.current.kind == "end":
            raise PolynomialParseError("Empty polynomial text", self.current.position)
        result = self._expression()
        if self.current.kind != "end":
            raise PolynomialParseError(f"Unexpected token {self.current.text!r}", self.current.position)
        return result

    def _expression(self) -> Polynomial:
        negate = False
        if self._accept("-"):
            negate = True
        else:
            self._accept("+")
        result = self._term()
        if negate:
            result = -result
        while True:
            if self._accept("+"):
                result = result + self._term()
            elif self._accept("-"):
                result = result - self._term()
            else:
                return result

    def _term(self) -> Polynomial:
        result = self._factor()
        while self._accept("*"):
            result = result * self._factor()
        return result

    def _factor(self) -> Polynomial:
        base = self._atom()
        if not self._accept("^"):
            return base
        sign = -1 if self._accept("-") else 1
        token = self._advance()
        if token.kind != "int":
            raise PolynomialParseError("Expected an integer exponent", token.position)
        try:
            return base ** (sign * int(token.text))
        except PolynomialError as exc:
            raise PolynomialParseError(str(exc), token.position) from exc

    def _atom(self) -> Polynomial:
        token = self._advance()
        if token.kind == "int":
            return Polynomial.constant(int(token.text))
        if token.kind == "ident":
            return Polynomial.var(var_name(token.text))
        if token.kind == "op" and token.text == "(":
            inner = self._expression()
            if not self._accept(")"):
                raise PolynomialParseError("Missing closing parenthesis", self.current.position)
            return inner
        if token.kind == "end":
            raise PolynomialParseError("Unexpected end of input", token.position)
        raise PolynomialParseError(f"Unexpected token {token.text!r}", token.position)


def parse(text: str) -> Polynomial:
    """
    Parses polynomial text.

    Args:
        text (str): Text such as "x^2*y - 3" or "(1+x)^3".

    Returns:
        Polynomial: The parsed polynomial.

    Raises:
        PolynomialParseError: With the character position of the first problem.
    """
    return _Parser(text).parse()
