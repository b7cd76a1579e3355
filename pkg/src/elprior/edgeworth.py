"""Predicted frequentist coverage of the posterior quantile ``theta2``.

The coverage expansion is

    P(theta <= theta2) = 1 - alpha + (n^-1/2 delta1 + n^-1 delta2) phi(z) + o(1/n)

with ``delta1``, ``delta2`` built from the approximate cumulants ``k1..k4``
of the W-adjusted pivot and the population counterparts of the posterior
coefficients. Only flat and simple (tilted) priors are supported: for the
elaborate class no closed form is available here, so asking for one raises
instead of returning something plausible but wrong.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

from .errors import OutOfRange, UnsupportedPriorClass
from .likelihood import LikelihoodFamily
from .moments import PopulationMoments
from .normal import inverse_normal_cdf, norm_pdf
from .prior import Flat, PriorSpec, Simple


@dataclass(frozen=True)
class PriorPopulationDerivs:
    """Derivatives of ``psi(t1, t2, t3)`` at ``(theta, sigma^2, beta3)``.

    ``psi11_0`` is d2/dt1^2, ``psi12_0`` is d2/dt1 dt2 (``t2`` is the
    variance slot), ``psi13_0`` is d2/dt1 dt3 (``t3`` the skewness slot).
    """

    psi1_0: float
    psi11_0: float
    psi12_0: float
    psi13_0: float


@dataclass(frozen=True)
class PopulationCoeffs:
    r10: float
    r20: float
    r30: float
    r40: float
    r60: float


@dataclass(frozen=True)
class EdgeworthReport:
    alpha: float
    z: float
    n: int
    order: str
    r10: float
    r20: float
    r30: float
    r40: float
    r60: float
    u10: float
    u20: float
    k1: float
    k2: float
    k3: float
    k4: float
    delta1: float
    delta2: float
    raw_coverage: float
    predicted_coverage: float
    clamped: bool

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)


def _require_simple(prior: PriorSpec) -> None:
    if not isinstance(prior, (Flat, Simple)):
        raise UnsupportedPriorClass(
            f"coverage prediction supports flat and simple priors only, got {type(prior).__name__}"
        )


def population_prior_derivs(prior: PriorSpec, pop: PopulationMoments) -> PriorPopulationDerivs:
    """Closed forms for ``psi = t1 * t2^-1/2 * chi(t3)``."""
    _require_simple(prior)
    if isinstance(prior, Flat):
        return PriorPopulationDerivs(0.0, 0.0, 0.0, 0.0)
    sigma = pop.sigma
    chi = float(prior.chi.eval(pop.beta3))
    dchi = float(prior.chi.deriv_s().eval(pop.beta3))
    return PriorPopulationDerivs(
        psi1_0=chi / sigma,
        psi11_0=0.0,
        psi12_0=-0.5 * chi / sigma**3,
        psi13_0=dchi / sigma,
    )


def population_coeffs(family: LikelihoodFamily, prior: PriorSpec, pop: PopulationMoments) -> PopulationCoeffs:
    d = population_prior_derivs(prior, pop)
    b3, b4, sigma = pop.beta3, pop.beta4, pop.sigma
    a1 = float(family.a1.eval(b3))
    a3 = float(family.a3.eval(b3))
    return PopulationCoeffs(
        r10=a1 + sigma * d.psi1_0,
        r20=float(family.b2.eval(b3, b4)) + sigma * a1 * d.psi1_0
        + 0.5 * pop.sigma2 * (d.psi11_0 + d.psi1_0**2),
        r30=a3,
        r40=float(family.b4.eval(b3, b4)) + sigma * a3 * d.psi1_0,
        r60=float(family.b6.eval(b3, b4)),
    )


def leading_u(c: PopulationCoeffs, z: float) -> tuple[float, float]:
    z2 = z * z
    u10 = c.r10 + c.r30 * (z2 + 2.0)
    u20 = (
        2.0 * u10 * z * c.r30
        - 0.5 * u10 * u10 * z
        + c.r20 * z
        + c.r40 * (z2 * z + 3.0 * z)
        + c.r60 * (z2 * z2 * z + 5.0 * z2 * z + 15.0 * z)
    )
    return u10, u20


def cumulants(
    family: LikelihoodFamily, prior: PriorSpec, pop: PopulationMoments, z: float
) -> tuple[float, float, float, float]:
    """Leading cumulant coefficients ``(k1, k2, k3, k4)`` of the adjusted pivot."""
    d = population_prior_derivs(prior, pop)
    b3, b4, sigma = pop.beta3, pop.beta4, pop.sigma
    da1 = float(family.a1.deriv_s().eval(b3))
    da3 = float(family.a3.deriv_s().eval(b3))
    k1 = 0.5 * b3
    k3 = 2.0 * b3
    k4 = 12.0 + 12.0 * b3 * b3 - 2.0 * b4
    k2 = (
        3.0
        + 1.75 * b3 * b3
        + 2.0 * (da1 + da3 * (z * z + 2.0) + sigma * d.psi13_0) * (b4 - 3.0 - 1.5 * b3 * b3)
        + 2.0 * pop.sigma2 * d.psi11_0
        + 2.0 * b3 * sigma * (0.5 * d.psi1_0 + pop.sigma2 * d.psi12_0)
    )
    return k1, k2, k3, k4


def _deltas(u10: float, u20: float, k: tuple[float, float, float, float], z: float) -> tuple[float, float]:
    k1, k2, k3, k4 = k
    z2 = z * z
    delta1 = u10 - k1 - k3 * (z2 - 1.0) / 6.0
    delta2 = (
        u20
        - 0.5 * u10 * u10 * z
        + z * u10 * (k1 + k3 * (z2 - 3.0) / 6.0)
        - 0.5 * (k2 + k1 * k1) * z
        - (k4 / 24.0 + k1 * k3 / 6.0) * (z2 * z - 3.0 * z)
        - k3 * k3 * (z2 * z2 * z - 10.0 * z2 * z + 15.0 * z) / 72.0
    )
    return delta1, delta2


def delta_terms(
    family: LikelihoodFamily, prior: PriorSpec, pop: PopulationMoments, z: float
) -> tuple[float, float]:
    """Coverage error coefficients ``(delta1, delta2)`` at normal quantile ``z``."""
    u10, u20 = leading_u(population_coeffs(family, prior, pop), z)
    return _deltas(u10, u20, cumulants(family, prior, pop, z), z)


def predict_coverage(
    family: LikelihoodFamily,
    prior: PriorSpec,
    pop: PopulationMoments,
    n: int,
    alpha: float,
    order: str = "one",
) -> EdgeworthReport:
    """Coverage of ``(-inf, theta2]`` predicted to order ``n^-1/2`` or ``n^-1``.

    The result is clamped to ``[0, 1]``; ``clamped`` flags when that
    happened and ``raw_coverage`` keeps the unclamped value.
    """
    if n < 4:
        raise OutOfRange(f"n must be at least 4, got {n}")
    if not 0.0 < alpha < 1.0:
        raise OutOfRange(f"alpha must lie in (0, 1), got {alpha!r}")
    if order not in ("half", "one"):
        raise OutOfRange(f"order must be 'half' or 'one', got {order!r}")
    z = inverse_normal_cdf(1.0 - alpha)
    pc = population_coeffs(family, prior, pop)
    u10, u20 = leading_u(pc, z)
    k = cumulants(family, prior, pop, z)
    delta1, delta2 = _deltas(u10, u20, k, z)
    correction = delta1 / math.sqrt(n)
    if order == "one":
        correction += delta2 / n
    raw = 1.0 - alpha + correction * float(norm_pdf(z))
    clamped = min(1.0, max(0.0, raw))
    return EdgeworthReport(
        alpha=alpha, z=z, n=n, order=order,
        r10=pc.r10, r20=pc.r20, r30=pc.r30, r40=pc.r40, r60=pc.r60,
        u10=u10, u20=u20,
        k1=k[0], k2=k[1], k3=k[2], k4=k[3],
        delta1=delta1, delta2=delta2,
        raw_coverage=raw, predicted_coverage=clamped, clamped=clamped != raw,
    )


def w_terms(
    family: LikelihoodFamily,
    prior: PriorSpec,
    pop: PopulationMoments,
    a1s: Any,
    a2s: Any,
    a3s: Any,
) -> tuple[Any, Any]:
    """First-order random parts ``(W1, W3)`` of ``R1`` and ``R3``.

    ``a1s, a2s, a3s`` are the standardized sums
    ``n^-1/2 sum(Z_i^s - beta_s)`` for ``s = 1, 2, 3``; arrays broadcast.
    """
    d = population_prior_derivs(prior, pop)
    b3, sigma, s2 = pop.beta3, pop.sigma, pop.sigma2
    da1 = float(family.a1.deriv_s().eval(b3))
    da3 = float(family.a3.deriv_s().eval(b3))
    skew_fluct = a3s - 3.0 * a1s - 1.5 * b3 * a2s
    w1 = s2 * d.psi11_0 * a1s + sigma * (0.5 * d.psi1_0 + s2 * d.psi12_0) * a2s + (da1 + sigma * d.psi13_0) * skew_fluct
    w3 = da3 * skew_fluct
    return w1, w3
