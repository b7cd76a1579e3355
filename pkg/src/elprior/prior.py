"""Data-dependent priors for the mean.

Every prior here is characterised, for the purpose of the posterior
expansion, by two numbers: the first and second ``theta``-derivatives of
``log pi`` at ``theta = Xbar`` (``psi1``, ``psi11``). Higher derivatives only
enter at order ``n^-3/2``.

Classes:

* :class:`Flat` -- ``pi = 1``.
* :class:`Simple` -- ``log pi = (theta - Xbar) m2^-1/2 chi(g3)``.
* :class:`Elaborate` -- adds ``1/2 (theta - Xbar)^2 m2^-1 lambda(g3, g4)``.
* :class:`Custom` -- arbitrary callables for ``psi1`` and ``psi11``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable, Union

import numpy as np

from .errors import NoDensity, ParseError
from .likelihood import LikelihoodFamily
from .moments import SampleSummary
from .poly import K, S, ZERO, Poly2


@dataclass(frozen=True)
class Flat:
    name: str = "flat"


@dataclass(frozen=True)
class Simple:
    chi: Poly2
    name: str = "simple"

    def __post_init__(self) -> None:
        if not self.chi.is_univariate():
            raise ValueError("chi must be a polynomial in s only")


@dataclass(frozen=True)
class Elaborate:
    chi: Poly2
    lam: Poly2
    name: str = "elaborate"

    def __post_init__(self) -> None:
        if not self.chi.is_univariate():
            raise ValueError("chi must be a polynomial in s only")


@dataclass(frozen=True)
class Custom:
    """Prior known only through ``psi1(summary)`` and ``psi11(summary)``.

    Both callables must be pure; the simulator may call them from several
    threads and with batch summaries whose fields are arrays.
    """

    psi1: Callable[[SampleSummary], Any]
    psi11: Callable[[SampleSummary], Any]
    name: str = "custom"


PriorSpec = Union[Flat, Simple, Elaborate, Custom]


def chi_of(prior: PriorSpec) -> Poly2:
    if isinstance(prior, (Simple, Elaborate)):
        return prior.chi
    if isinstance(prior, Flat):
        return ZERO
    raise TypeError(f"{type(prior).__name__} prior has no chi polynomial")


def lambda_of(prior: PriorSpec) -> Poly2:
    if isinstance(prior, Elaborate):
        return prior.lam
    if isinstance(prior, (Flat, Simple)):
        return ZERO
    raise TypeError(f"{type(prior).__name__} prior has no lambda polynomial")


def log_prior_derivs(prior: PriorSpec, summary: SampleSummary) -> tuple[Any, Any]:
    """``(psi1, psi11)``: d/dtheta and d2/dtheta2 of ``log pi`` at ``Xbar``."""
    if isinstance(prior, Flat):
        return 0.0, 0.0
    if isinstance(prior, Simple):
        return prior.chi.eval(summary.g3) / np.sqrt(summary.m2), 0.0
    if isinstance(prior, Elaborate):
        psi1 = prior.chi.eval(summary.g3) / np.sqrt(summary.m2)
        psi11 = prior.lam.eval(summary.g3, summary.g4) / summary.m2
        return psi1, psi11
    if isinstance(prior, Custom):
        return prior.psi1(summary), prior.psi11(summary)
    raise TypeError(f"not a prior: {prior!r}")


def prior_eq26(family: LikelihoodFamily) -> Simple:
    """The skewness-tilted prior that matches ``family`` to order ``n^-1/2``.

    ``chi = -(a1 + s/2)``. Whether it actually matches depends on ``a3``;
    see :func:`elprior.matching.check_order_half`.
    """
    return Simple(chi=-(family.a1 + Fraction(1, 2) * S), name=f"eq26[{family.name}]")


def prior_eq29() -> Simple:
    return Simple(chi=Fraction(-1, 2) * S, name="eq29")


def prior_eq34() -> Elaborate:
    return Elaborate(
        chi=Fraction(-1, 2) * S,
        lam=Fraction(5, 4) * S * S - Fraction(2, 3) * K + 2,
        name="eq34",
    )


def log_prior(prior: PriorSpec, summary: SampleSummary, theta: Any) -> Any:
    if isinstance(prior, Custom):
        raise NoDensity("a custom prior is described only by its log-derivatives")
    if isinstance(prior, Flat):
        return np.zeros_like(np.asarray(theta, dtype=float))
    t = (theta - summary.mean) / np.sqrt(summary.m2)
    out = t * prior.chi.eval(summary.g3)
    if isinstance(prior, Elaborate):
        out = out + 0.5 * t * t * prior.lam.eval(summary.g3, summary.g4)
    return out


def prior_density(prior: PriorSpec, summary: SampleSummary, theta: Any) -> Any:
    """Unnormalized prior density, equal to 1 at ``theta = Xbar``.

    Raises:
        NoDensity: for :class:`Custom` priors.
    """
    out = np.exp(log_prior(prior, summary, theta))
    return float(out) if np.ndim(out) == 0 else out


def prior_to_json(prior: PriorSpec) -> dict[str, Any]:
    if isinstance(prior, Flat):
        return {"kind": "flat", "name": prior.name}
    if isinstance(prior, Simple):
        return {"kind": "simple", "name": prior.name, "chi": prior.chi.to_json()}
    if isinstance(prior, Elaborate):
        return {"kind": "elaborate", "name": prior.name, "chi": prior.chi.to_json(), "lambda": prior.lam.to_json()}
    raise NoDensity("custom priors cannot be serialised")


def prior_from_json(doc: dict[str, Any]) -> PriorSpec:
    kind = doc.get("kind")
    name = doc.get("name", kind)
    if kind == "flat":
        return Flat()
    if kind == "simple":
        return Simple(Poly2.from_json(doc["chi"]), name=name)
    if kind == "elaborate":
        return Elaborate(Poly2.from_json(doc["chi"]), Poly2.from_json(doc["lambda"]), name=name)
    raise ParseError(f"unknown prior kind {kind!r}")


def _split_kv(body: str, spec: str, offset: int) -> dict[str, str]:
    """Split ``chi=<poly>,lambda=<poly>``; commas never occur inside polys."""
    out: dict[str, str] = {}
    pos = offset
    for item in body.split(","):
        if "=" not in item:
            raise ParseError(f"expected key=value in prior spec {spec!r}", position=pos)
        key, value = item.split("=", 1)
        out[key.strip()] = value
        pos += len(item) + 1
    return out


def parse_prior(spec: str, family: LikelihoodFamily | None = None) -> PriorSpec:
    """Build a prior from a CLI spec string.

    Forms: ``flat``, ``eq26`` (needs ``family``), ``eq29``, ``eq34``,
    ``simple:chi=<poly>``, ``elaborate:chi=<poly>,lambda=<poly>``.
    """
    text = spec.strip()
    head, sep, body = text.partition(":")
    head = head.lower()
    if not sep:
        if head == "flat":
            return Flat()
        if head == "eq29":
            return prior_eq29()
        if head == "eq34":
            return prior_eq34()
        if head == "eq26":
            if family is None:
                raise ParseError("prior 'eq26' is derived from a likelihood family; pass one")
            return prior_eq26(family)
    else:
        kv = _split_kv(body, spec, len(head) + 1)
        try:
            if head == "simple" and set(kv) == {"chi"}:
                return Simple(Poly2.parse(kv["chi"]))
            if head == "elaborate" and set(kv) == {"chi", "lambda"}:
                return Elaborate(Poly2.parse(kv["chi"]), Poly2.parse(kv["lambda"]))
        except ValueError as exc:
            if isinstance(exc, ParseError):
                raise
            raise ParseError(f"bad prior spec {spec!r}: {exc}") from exc
    raise ParseError(
        f"unknown prior spec {spec!r}; use flat, eq26, eq29, eq34, simple:chi=..., elaborate:chi=...,lambda=...",
        position=0,
    )
