"""Posterior expansion coefficients and approximate posterior quantiles.

All functions broadcast over batch summaries (array-valued fields), which is
how the Monte Carlo harness evaluates thousands of replications at once.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Literal

import numpy as np

from .errors import OutOfRange
from .likelihood import LikelihoodFamily
from .moments import SampleSummary
from .normal import inverse_normal_cdf, norm_pdf
from .prior import PriorSpec, log_prior_derivs

Order = Literal["first", "second"]

__all__ = [
    "PosteriorCoeffs",
    "QuantileResult",
    "inverse_normal_cdf",
    "normalize_order",
    "posterior_coeffs",
    "posterior_density",
    "quantile",
    "u_coeffs",
]


@dataclass(frozen=True)
class PosteriorCoeffs:
    r1: Any
    r2: Any
    r3: Any
    r4: Any
    r6: Any


@dataclass(frozen=True)
class QuantileResult:
    alpha: float
    z: float
    u1: Any
    u2: Any
    theta1: Any
    theta2: Any
    order: Order = "first"

    @property
    def theta(self) -> Any:
        """The quantile selected by ``order``."""
        return self.theta1 if self.order == "first" else self.theta2


def normalize_order(order: Any) -> Order:
    key = str(order).strip().lower()
    if key in ("1", "first", "half"):
        return "first"
    if key in ("2", "second", "one"):
        return "second"
    raise OutOfRange(f"order must be first/second (1/2), got {order!r}")


def posterior_coeffs(family: LikelihoodFamily, prior: PriorSpec, summary: SampleSummary) -> PosteriorCoeffs:
    g3, g4, m2 = summary.g3, summary.g4, summary.m2
    psi1, psi11 = log_prior_derivs(prior, summary)
    root_m2 = np.sqrt(m2)
    a1 = family.a1.eval(g3)
    a3 = family.a3.eval(g3)
    return PosteriorCoeffs(
        r1=a1 + root_m2 * psi1,
        r2=family.b2.eval(g3, g4) + root_m2 * a1 * psi1 + 0.5 * m2 * (psi11 + psi1 * psi1),
        r3=a3,
        r4=family.b4.eval(g3, g4) + root_m2 * a3 * psi1,
        r6=family.b6.eval(g3, g4),
    )


def u_coeffs(coeffs: PosteriorCoeffs, z: float) -> tuple[Any, Any]:
    z2 = z * z
    u1 = coeffs.r1 + coeffs.r3 * (z2 + 2.0)
    u2 = (
        2.0 * u1 * z * coeffs.r3
        - 0.5 * u1 * u1 * z
        + coeffs.r2 * z
        + coeffs.r4 * (z2 * z + 3.0 * z)
        + coeffs.r6 * (z2 * z2 * z + 5.0 * z2 * z + 15.0 * z)
    )
    return u1, u2


def quantile(
    family: LikelihoodFamily,
    prior: PriorSpec,
    summary: SampleSummary,
    alpha: float,
    order: Any = "first",
) -> QuantileResult:
    """Approximate ``(1 - alpha)`` posterior quantile of the mean.

    ``theta1`` carries posterior error ``o_p(n^-1/2)``, ``theta2`` carries
    ``o_p(n^-1)``. Both are always computed.

    Raises:
        OutOfRange: unless ``0 < alpha < 1``.
    """
    if not 0.0 < alpha < 1.0:
        raise OutOfRange(f"alpha must lie in (0, 1), got {alpha!r}")
    order = normalize_order(order)
    z = inverse_normal_cdf(1.0 - alpha)
    u1, u2 = u_coeffs(posterior_coeffs(family, prior, summary), z)
    n = summary.n
    scale = np.sqrt(summary.m2 / n)
    theta1 = summary.mean + scale * (z + u1 / np.sqrt(n))
    theta2 = theta1 + scale * (u2 / n)
    return QuantileResult(alpha=alpha, z=z, u1=u1, u2=u2, theta1=theta1, theta2=theta2, order=order)


def posterior_density(family: LikelihoodFamily, prior: PriorSpec, summary: SampleSummary, y: Any) -> Any:
    """Expansion of the posterior density of the pivot ``y``.

    Like any Edgeworth-type series this can dip below zero for extreme ``y``
    at small ``n``; the value is returned unaltered.
    """
    c = posterior_coeffs(family, prior, summary)
    return density_from_coeffs(c, summary.n, y)


def density_from_coeffs(c: PosteriorCoeffs, n: int, y: Any) -> Any:
    y = np.asarray(y, dtype=float)
    y2 = y * y
    y4 = y2 * y2
    half = c.r1 * y + c.r3 * y2 * y
    one = c.r2 * (y2 - 1.0) + c.r4 * (y4 - 3.0) + c.r6 * (y4 * y2 - 15.0)
    return norm_pdf(y) * (1.0 + half / np.sqrt(n) + one / n)
