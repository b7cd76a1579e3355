"""Empirical-type likelihoods described by their expansion polynomials.

A likelihood in this class is, up to a factor free of ``theta``,

    phi(y) * [1 + n^-1/2 (a1 y + a3 y^3) + n^-1 (b0 + b2 y^2 + b4 y^4 + b6 y^6)]

where ``y`` is the studentized pivot and the six coefficients are
polynomials in the sample skewness ``s = g3`` (``a1``, ``a3``) or in
``(s, k) = (g3, g4)`` (the ``b``'s).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, replace
from fractions import Fraction
from pathlib import Path
from typing import Any

import numpy as np

from .errors import ParseError
from .moments import SampleSummary, pivot_y
from .normal import norm_pdf
from .poly import K, ONE, S, ZERO, Poly2, as_rational

COEFFICIENTS = ("a1", "a3", "b0", "b2", "b4", "b6")


@dataclass(frozen=True)
class LikelihoodFamily:
    name: str
    a1: Poly2 = ZERO
    a3: Poly2 = ZERO
    b0: Poly2 = ZERO
    b2: Poly2 = ZERO
    b4: Poly2 = ZERO
    b6: Poly2 = ZERO

    def __post_init__(self) -> None:
        for attr in ("a1", "a3"):
            if not getattr(self, attr).is_univariate():
                raise ValueError(f"{attr} must be a polynomial in s only")

    def __eq__(self, other: object) -> bool:
        # the name is a label; equality is about the likelihood itself
        if not isinstance(other, LikelihoodFamily):
            return NotImplemented
        return self.coefficients() == other.coefficients()

    def __hash__(self) -> int:
        return hash(tuple(self.coefficients().values()))

    def coefficients(self) -> dict[str, Poly2]:
        return {c: getattr(self, c) for c in COEFFICIENTS}

    def with_b0(self, b0: Poly2) -> "LikelihoodFamily":
        return replace(self, b0=b0)

    def to_json(self) -> dict[str, Any]:
        doc: dict[str, Any] = {"name": self.name}
        doc.update({c: p.to_json() for c, p in self.coefficients().items()})
        return doc

    @classmethod
    def from_json(cls, doc: dict[str, Any]) -> "LikelihoodFamily":
        polys = {}
        for c in COEFFICIENTS:
            entry = doc.get(c)
            if entry is None:
                polys[c] = ZERO
            elif isinstance(entry, str):
                polys[c] = Poly2.parse(entry)
            else:
                polys[c] = Poly2.from_json(entry)
        return cls(name=str(doc.get("name", "custom")), **polys)


def _r(x: Any) -> Fraction:
    return as_rational(x)


def family_cressie_read(tau3: Any, tau4: Any) -> LikelihoodFamily:
    """Likelihoods from empirical (Cressie-Read type) discrepancy statistics."""
    tau3, tau4 = _r(tau3), _r(tau4)
    return LikelihoodFamily(
        name=f"cressie-read:tau3={tau3},tau4={tau4}",
        a3=tau3 * S,
        b4=tau4 * K - Fraction(9, 2) * tau3**2 * (S * S + 1),
        b6=Fraction(1, 2) * tau3**2 * S * S,
    )


def family_gel(gamma3: Any, gamma4: Any) -> LikelihoodFamily:
    """Generalized empirical likelihoods."""
    gamma3, gamma4 = _r(gamma3), _r(gamma4)
    return LikelihoodFamily(
        name=f"gel:gamma3={gamma3},gamma4={gamma4}",
        a3=gamma3 * S,
        b4=gamma4 * K - Fraction(9, 2) * gamma3**2 * S * S - 3 * gamma3 + Fraction(1, 2),
        b6=Fraction(1, 2) * gamma3**2 * S * S,
    )


def family_geef(mu: Any) -> LikelihoodFamily:
    """Generalized empirical exponential family likelihoods."""
    mu = _r(mu)
    return LikelihoodFamily(
        name=f"geef:mu={mu}",
        a3=Fraction(1, 3) * S,
        b4=mu * K - (mu + Fraction(1, 4)) * (S * S + 1),
        b6=Fraction(1, 18) * S * S,
    )


def family_el() -> LikelihoodFamily:
    """The usual empirical likelihood."""
    return LikelihoodFamily(
        name="el",
        a3=Fraction(1, 3) * S,
        b4=Fraction(1, 4) * K - Fraction(1, 2) * (S * S + 1),
        b6=Fraction(1, 18) * S * S,
    )


def family_schennach() -> LikelihoodFamily:
    """Bayesian exponentially tilted empirical likelihood (GEEF with mu = 1/8)."""
    return replace(family_geef(Fraction(1, 8)), name="schennach")


def family_fm_matching() -> LikelihoodFamily:
    """The family that admits a data-free matching prior to order 1/n."""
    return LikelihoodFamily(
        name="fm-matching",
        a1=Fraction(-1, 2) * S,
        a3=Fraction(1, 3) * S,
        b2=Fraction(3, 4) * S * S - Fraction(1, 3) * K + ONE,
        b4=Fraction(1, 4) * K - Fraction(2, 3) * S * S - Fraction(1, 2),
        b6=Fraction(1, 18) * S * S,
    )


def likelihood_kernel(family: LikelihoodFamily, summary: SampleSummary, theta: Any) -> Any:
    """Truncated expansion of ``L(theta)``, unnormalized.

    The truncation can turn negative far in the tails; it is returned as-is.
    """
    y = pivot_y(summary, theta)
    g3, g4, n = summary.g3, summary.g4, summary.n
    y2 = y * y
    odd = family.a1.eval(g3) * y + family.a3.eval(g3) * y * y2
    even = (
        family.b0.eval(g3, g4)
        + family.b2.eval(g3, g4) * y2
        + family.b4.eval(g3, g4) * y2 * y2
        + family.b6.eval(g3, g4) * y2 * y2 * y2
    )
    return norm_pdf(y) * (1.0 + odd / np.sqrt(n) + even / n)


PRESETS = ("el", "schennach", "fm-matching", "cressie-read", "gel", "geef")


def _parse_params(body: str, expected: tuple[str, ...], spec: str, offset: int) -> dict[str, Fraction]:
    params: dict[str, Fraction] = {}
    pos = offset
    for item in body.split(","):
        if "=" not in item:
            raise ParseError(f"expected key=value in family spec {spec!r}", position=pos)
        key, value = (part.strip() for part in item.split("=", 1))
        if key not in expected:
            raise ParseError(f"unknown parameter {key!r} in family spec {spec!r}", position=pos)
        try:
            params[key] = as_rational(value)
        except (ParseError, TypeError):
            raise ParseError(f"bad rational {value!r} in family spec {spec!r}", position=pos) from None
        pos += len(item) + 1
    missing = [k for k in expected if k not in params]
    if missing:
        raise ParseError(f"family spec {spec!r} is missing {', '.join(missing)}", position=len(spec))
    return params


def parse_family(spec: str) -> LikelihoodFamily:
    """Build a family from a CLI spec string.

    Accepted forms: ``el``, ``schennach``, ``fm-matching``,
    ``cressie-read:tau3=<r>,tau4=<r>``, ``gel:gamma3=<r>,gamma4=<r>``,
    ``geef:mu=<r>`` and ``file:<path>`` (JSON with the six polynomials).
    """
    text = spec.strip()
    head, sep, body = text.partition(":")
    head = head.lower()
    offset = len(head) + 1
    if head == "file" and sep:
        try:
            doc = json.loads(Path(body).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ParseError(f"cannot read family file {body!r}: {exc}") from exc
        # accept the document written by ``elprior families show --json``
        if "result" in doc and "a1" not in doc:
            doc = doc["result"]
        return LikelihoodFamily.from_json(doc)
    if not sep:
        if head == "el":
            return family_el()
        if head == "schennach":
            return family_schennach()
        if head in ("fm-matching", "fm"):
            return family_fm_matching()
    else:
        if head == "cressie-read":
            p = _parse_params(body, ("tau3", "tau4"), spec, offset)
            return family_cressie_read(p["tau3"], p["tau4"])
        if head == "gel":
            p = _parse_params(body, ("gamma3", "gamma4"), spec, offset)
            return family_gel(p["gamma3"], p["gamma4"])
        if head == "geef":
            p = _parse_params(body, ("mu",), spec, offset)
            return family_geef(p["mu"])
    raise ParseError(f"unknown family spec {spec!r}; presets: {', '.join(PRESETS)}, file:<path>", position=0)
