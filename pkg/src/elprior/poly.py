"""Exact sparse polynomials over the rationals in two slots ``s`` and ``k``.

The slot ``s`` stands for a skewness (sample ``g3`` or population ``beta3``)
and ``k`` for a kurtosis (``g4`` or ``beta4``). Coefficients are
:class:`fractions.Fraction`, so every identity check is exact.

Text syntax (used by the CLI and for rendering)::

    5/4*s^2 - 2/3*k + 2
    1/2*(s^2 + 1)
    -s*k + 3

JSON syntax::

    {"terms": [{"i": 2, "j": 0, "num": 5, "den": 4}, ...]}
"""

from __future__ import annotations

import re
from fractions import Fraction
from numbers import Rational as _Rational
from typing import Any, Iterator, Mapping, Union

from .errors import ParseError

Rational = Fraction
Exponent = tuple[int, int]
Scalar = Union[int, Fraction]


def as_rational(value: Any) -> Fraction:
    """Coerce ints, Fractions and ``"p/q"`` strings to a Fraction.

    Floats are rejected: silently rounding a coefficient would defeat the
    point of exact arithmetic.
    """
    if isinstance(value, bool):
        raise TypeError("bool is not a rational coefficient")
    if isinstance(value, (int, _Rational)):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"not a rational number: {value!r}") from exc
    raise TypeError(f"cannot use {type(value).__name__} as an exact coefficient")


class Poly2:
    """Immutable polynomial ``sum c_ij * s^i * k^j`` with Fraction coefficients.

    Zero coefficients are never stored, so two polynomials are equal exactly
    when their term maps are equal.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[Exponent, Any] | None = None):
        clean: dict[Exponent, Fraction] = {}
        for (i, j), c in (terms or {}).items():
            if i < 0 or j < 0:
                raise ValueError(f"negative exponent ({i}, {j})")
            c = as_rational(c)
            if c:
                key = (int(i), int(j))
                clean[key] = clean.get(key, Fraction(0)) + c
                if not clean[key]:
                    del clean[key]
        self._terms = dict(sorted(clean.items()))
        self._hash: int | None = None

    # construction helpers

    @classmethod
    def const(cls, c: Any) -> "Poly2":
        return cls({(0, 0): c})

    @classmethod
    def monomial(cls, c: Any, i: int = 0, j: int = 0) -> "Poly2":
        return cls({(i, j): c})

    @classmethod
    def _coerce(cls, other: Any) -> "Poly2":
        if isinstance(other, Poly2):
            return other
        return cls.const(other)

    # container-ish access

    @property
    def terms(self) -> dict[Exponent, Fraction]:
        return dict(self._terms)

    def coeff(self, i: int, j: int = 0) -> Fraction:
        return self._terms.get((i, j), Fraction(0))

    def __iter__(self) -> Iterator[tuple[Exponent, Fraction]]:
        return iter(self._terms.items())

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def is_univariate(self) -> bool:
        """True when no term involves ``k``."""
        return all(j == 0 for (_, j) in self._terms)

    def degree(self) -> int:
        return max((i + j for (i, j) in self._terms), default=-1)

    # ring operations

    def __add__(self, other: Any) -> "Poly2":
        other = self._coerce(other)
        out = dict(self._terms)
        for key, c in other._terms.items():
            out[key] = out.get(key, Fraction(0)) + c
        return Poly2(out)

    __radd__ = __add__

    def __neg__(self) -> "Poly2":
        return Poly2({key: -c for key, c in self._terms.items()})

    def __sub__(self, other: Any) -> "Poly2":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Any) -> "Poly2":
        return self._coerce(other) - self

    def __mul__(self, other: Any) -> "Poly2":
        other = self._coerce(other)
        out: dict[Exponent, Fraction] = {}
        for (i1, j1), c1 in self._terms.items():
            for (i2, j2), c2 in other._terms.items():
                key = (i1 + i2, j1 + j2)
                out[key] = out.get(key, Fraction(0)) + c1 * c2
        return Poly2(out)

    __rmul__ = __mul__

    def __pow__(self, exponent: int) -> "Poly2":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("only nonnegative integer powers are supported")
        result = Poly2.const(1)
        for _ in range(exponent):
            result = result * self
        return result

    def deriv_s(self) -> "Poly2":
        return Poly2({(i - 1, j): i * c for (i, j), c in self._terms.items() if i > 0})

    def deriv_k(self) -> "Poly2":
        return Poly2({(i, j - 1): j * c for (i, j), c in self._terms.items() if j > 0})

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Poly2):
            return self._terms == other._terms
        if isinstance(other, (int, Fraction)):
            return self == Poly2.const(other)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    # evaluation

    def __call__(self, s: Any, k: Any = 0.0) -> Any:
        return self.eval(s, k)

    def eval(self, s: Any, k: Any = 0.0) -> Any:
        """Floating evaluation at ``(s, k)``; numpy arrays broadcast."""
        total: Any = 0.0
        for (i, j), c in self._terms.items():
            term: Any = float(c)
            if i:
                term = term * s**i
            if j:
                term = term * k**j
            total = total + term
        return total

    def eval_exact(self, s: Any, k: Any = 0) -> Fraction:
        s, k = as_rational(s), as_rational(k)
        return sum((c * s**i * k**j for (i, j), c in self._terms.items()), Fraction(0))

    # serialisation

    def to_json(self) -> dict[str, list[dict[str, int]]]:
        return {
            "terms": [
                {"i": i, "j": j, "num": c.numerator, "den": c.denominator}
                for (i, j), c in self._terms.items()
            ]
        }

    @classmethod
    def from_json(cls, doc: Mapping[str, Any]) -> "Poly2":
        try:
            return cls(
                {(int(t["i"]), int(t["j"])): Fraction(int(t["num"]), int(t["den"])) for t in doc["terms"]}
            )
        except (KeyError, TypeError, ValueError, ZeroDivisionError) as exc:
            raise ParseError(f"malformed polynomial JSON: {exc}") from exc

    @classmethod
    def parse(cls, text: str) -> "Poly2":
        return _Parser(text).parse()

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        # highest total degree first, s before k within a degree
        keys = sorted(self._terms, key=lambda ij: (-(ij[0] + ij[1]), -ij[0]))
        pieces = []
        for n, key in enumerate(keys):
            c = self._terms[key]
            sign = "-" if c < 0 else "+"
            body = _render_term(abs(c), *key)
            if n == 0:
                pieces.append(body if sign == "+" else f"-{body}")
            else:
                pieces.append(f" {sign} {body}")
        return "".join(pieces)

    def __repr__(self) -> str:
        return f"Poly2('{self}')"


def _render_term(c: Fraction, i: int, j: int) -> str:
    factors = []
    if i:
        factors.append("s" if i == 1 else f"s^{i}")
    if j:
        factors.append("k" if j == 1 else f"k^{j}")
    if not factors:
        return str(c)
    if c == 1:
        return "*".join(factors)
    return "*".join([str(c)] + factors)


_TOKEN = re.compile(r"\s*(?:(\d+)|([sk])|(\*\*|[-+*/^()]))")


class _Parser:
    """Recursive-descent parser for the polynomial text syntax.

    Grammar::

        expr   := ['+'|'-'] term (('+'|'-') term)*
        term   := factor (('*'|'/') factor)*     # '/' only by integer constants
        factor := atom ('^' INT)?
        atom   := INT | 's' | 'k' | '(' expr ')' | '-' factor
    """

    def __init__(self, text: str):
        self.text = text
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        stripped = text.rstrip()
        while pos < len(stripped):
            m = _TOKEN.match(stripped, pos)
            if not m:
                bad = len(stripped[pos:]) - len(stripped[pos:].lstrip())
                raise ParseError(f"unexpected character in polynomial {text!r}", position=pos + bad)
            start = m.start(m.lastindex)
            if m.group(1):
                self.tokens.append(("int", m.group(1), start))
            elif m.group(2):
                self.tokens.append(("var", m.group(2), start))
            else:
                op = "^" if m.group(3) == "**" else m.group(3)
                self.tokens.append(("op", op, start))
            pos = m.end()
        self.i = 0

    def _peek(self) -> tuple[str, str, int] | None:
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def _take(self) -> tuple[str, str, int]:
        tok = self._peek()
        if tok is None:
            raise ParseError(f"unexpected end of polynomial {self.text!r}", position=len(self.text))
        self.i += 1
        return tok

    def _expect(self, op: str) -> None:
        tok = self._take()
        if tok[:2] != ("op", op):
            raise ParseError(f"expected {op!r} in polynomial {self.text!r}", position=tok[2])

    def parse(self) -> Poly2:
        if not self.tokens:
            raise ParseError("empty polynomial", position=0)
        result = self._expr()
        tok = self._peek()
        if tok is not None:
            raise ParseError(f"trailing input in polynomial {self.text!r}", position=tok[2])
        return result

    def _expr(self) -> Poly2:
        tok = self._peek()
        negate = False
        if tok and tok[0] == "op" and tok[1] in "+-":
            self._take()
            negate = tok[1] == "-"
        result = self._term()
        if negate:
            result = -result
        while (tok := self._peek()) and tok[0] == "op" and tok[1] in "+-":
            self._take()
            rhs = self._term()
            result = result + rhs if tok[1] == "+" else result - rhs
        return result

    def _term(self) -> Poly2:
        result = self._factor()
        while (tok := self._peek()) and tok[0] == "op" and tok[1] in "*/":
            self._take()
            rhs = self._factor()
            if tok[1] == "*":
                result = result * rhs
            else:
                if rhs.degree() > 0 or rhs.is_zero():
                    raise ParseError("can only divide by a nonzero constant", position=tok[2])
                result = result * Poly2.const(1 / rhs.coeff(0, 0))
        return result

    def _factor(self) -> Poly2:
        base = self._atom()
        tok = self._peek()
        if tok and tok[:2] == ("op", "^"):
            self._take()
            exp_tok = self._take()
            if exp_tok[0] != "int":
                raise ParseError("exponent must be a nonnegative integer", position=exp_tok[2])
            base = base ** int(exp_tok[1])
        return base

    def _atom(self) -> Poly2:
        kind, value, pos = self._take()
        if kind == "int":
            return Poly2.const(int(value))
        if kind == "var":
            return Poly2.monomial(1, 1, 0) if value == "s" else Poly2.monomial(1, 0, 1)
        if value == "(":
            inner = self._expr()
            self._expect(")")
            return inner
        if value == "-":
            return -self._factor()
        raise ParseError(f"unexpected {value!r} in polynomial {self.text!r}", position=pos)


ZERO = Poly2()
ONE = Poly2.const(1)
S = Poly2.monomial(1, 1, 0)
K = Poly2.monomial(1, 0, 1)


def poly_add(p: Poly2, q: Poly2) -> Poly2:
    return p + q


def poly_mul(p: Poly2, q: Poly2) -> Poly2:
    return p * q


def poly_eval(p: Poly2, s: Any, k: Any = 0.0) -> Any:
    return p.eval(s, k)


def poly_deriv_s(p: Poly2) -> Poly2:
    return p.deriv_s()


def poly_is_zero(p: Poly2) -> bool:
    return p.is_zero()
