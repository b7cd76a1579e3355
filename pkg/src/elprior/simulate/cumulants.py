"""Monte Carlo check of the approximate cumulants of the adjusted pivot.

For each replication the pivot ``y`` is evaluated at the true mean and
adjusted to ``y - (W1 + W3 (z^2 + 2)) / n``. The scaled cumulant estimates

    sqrt(n) * mean,  n * (var - 1),  sqrt(n) * kappa3,  n * kappa4

are compared with the predicted ``k1..k4``. Standard errors come from batch
means over equal contiguous groups of replications.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Any

import numpy as np

from ..edgeworth import cumulants, w_terms
from ..likelihood import LikelihoodFamily, family_el
from ..moments import DistributionSpec, get_distribution, pivot_y, summarize_batch
from ..normal import inverse_normal_cdf
from ..prior import PriorSpec, prior_eq29
from .harness import blocks, parallel_map
from .rng import GENERATOR_ID, uniforms


@dataclass(frozen=True)
class CumulantEstimate:
    name: str
    estimate: float
    stderr: float
    predicted: float

    @property
    def z_score(self) -> float:
        return (self.estimate - self.predicted) / self.stderr

    def within(self, n_se: float) -> bool:
        return abs(self.estimate - self.predicted) <= n_se * self.stderr


@dataclass(frozen=True)
class CumulantReport:
    dist: str
    n: int
    reps: int
    master_seed: int
    z: float
    family: str
    prior: str
    estimates: tuple[CumulantEstimate, ...]
    generator: str = GENERATOR_ID

    def to_dict(self) -> dict[str, Any]:
        out = asdict(self)
        for e, d in zip(self.estimates, out["estimates"]):
            d["z_score"] = e.z_score
        return out


def _kstats(y: np.ndarray) -> tuple[float, float, float, float]:
    """Unbiased k-statistics ``k1..k4`` of a one-dimensional sample."""
    m = y.size
    mean = float(np.mean(y))
    d = y - mean
    d2 = d * d
    m2 = float(np.mean(d2))
    m3 = float(np.mean(d2 * d))
    m4 = float(np.mean(d2 * d2))
    k2 = m * m2 / (m - 1)
    k3 = m * m * m3 / ((m - 1) * (m - 2))
    k4 = m * m * ((m + 1) * m4 - 3 * (m - 1) * m2 * m2) / ((m - 1) * (m - 2) * (m - 3))
    return mean, k2, k3, k4


def adjusted_pivots(
    dist: DistributionSpec,
    n: int,
    start: int,
    stop: int,
    master_seed: int,
    family: LikelihoodFamily,
    prior: PriorSpec,
    z: float,
) -> np.ndarray:
    pop = dist.moments
    x = dist.inverse_cdf(uniforms(master_seed, start, stop, n))
    summary, _ = summarize_batch(x)
    y = pivot_y(summary, pop.theta)
    zs = (x - pop.theta) / pop.sigma
    root_n = math.sqrt(n)
    zs2 = zs * zs
    a1s = zs.sum(axis=1) / root_n
    a2s = (zs2 - 1.0).sum(axis=1) / root_n
    a3s = (zs2 * zs - pop.beta3).sum(axis=1) / root_n
    w1, w3 = w_terms(family, prior, pop, a1s, a2s, a3s)
    return y - (w1 + w3 * (z * z + 2.0)) / n


def validate_cumulants(
    dist: DistributionSpec | str,
    n: int,
    reps: int,
    master_seed: int,
    family: LikelihoodFamily | None = None,
    prior: PriorSpec | None = None,
    alpha: float = 0.05,
    workers: int = 1,
    batches: int = 200,
) -> CumulantReport:
    """Compare simulated and predicted cumulant coefficients of the pivot.

    ``alpha`` fixes the normal quantile ``z`` that enters the adjustment and
    the predicted ``k2``.
    """
    if isinstance(dist, str):
        dist = get_distribution(dist)
    if n < 20:
        raise ValueError("cumulant validation needs n >= 20")
    if reps < 4 * batches:
        batches = max(2, reps // 4)
    family = family or family_el()
    prior = prior or prior_eq29()
    z = inverse_normal_cdf(1.0 - alpha)

    parts = parallel_map(
        lambda b: adjusted_pivots(dist, n, b[0], b[1], master_seed, family, prior, z),
        blocks(reps, n),
        workers,
    )
    y = np.concatenate(parts)

    scale = np.array([math.sqrt(n), n, math.sqrt(n), n])
    shift = np.array([0.0, 1.0, 0.0, 0.0])
    overall = (np.array(_kstats(y)) - shift) * scale
    per_batch = np.array([(np.array(_kstats(chunk)) - shift) * scale for chunk in np.array_split(y, batches)])
    stderr = per_batch.std(axis=0, ddof=1) / math.sqrt(batches)

    predicted = cumulants(family, prior, dist.moments, z)
    names = ("k1", "k2", "k3", "k4")
    estimates = tuple(
        CumulantEstimate(name, float(overall[i]), float(stderr[i]), float(predicted[i])) for i, name in enumerate(names)
    )
    return CumulantReport(
        dist=dist.kind, n=n, reps=reps, master_seed=master_seed, z=z,
        family=family.name, prior=prior.name, estimates=estimates,
    )
