"""Frequentist coverage of approximate posterior quantiles by simulation.

Replications are processed in fixed-size blocks whose boundaries depend only
on ``n``, never on the worker count; each block is a pure function of the
master seed and its replication range, and the integer hit counts are summed
afterwards. Results are therefore bit-identical for any ``workers``.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Callable, Iterable, TypeVar

import math
import numpy as np

from ..errors import OutOfRange
from ..likelihood import LikelihoodFamily
from ..moments import DistributionSpec, get_distribution, summarize_batch
from ..posterior import normalize_order, quantile
from ..prior import Custom, PriorSpec, prior_to_json
from .rng import GENERATOR_ID, uniforms

T = TypeVar("T")

# about 2^20 variates per block keeps temporaries near 10 MB
_BLOCK_VARIATES = 1 << 20


def block_size(n: int) -> int:
    return max(1, _BLOCK_VARIATES // n)


def blocks(reps: int, n: int) -> list[tuple[int, int]]:
    size = block_size(n)
    return [(start, min(start + size, reps)) for start in range(0, reps, size)]


def parallel_map(fn: Callable[[tuple[int, int]], T], items: Iterable[tuple[int, int]], workers: int) -> list[T]:
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


def sample(dist: DistributionSpec | str, u: Any) -> Any:
    """Inverse-transform draw(s) from a built-in population.

    Raises:
        OutOfRange: unless every ``u`` lies in the open unit interval.
    """
    if isinstance(dist, str):
        dist = get_distribution(dist)
    arr = np.asarray(u, dtype=float)
    if not np.all((arr > 0.0) & (arr < 1.0)):
        raise OutOfRange("uniform draw must lie in (0, 1)")
    out = dist.inverse_cdf(arr)
    return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SimConfig:
    dist: DistributionSpec
    n: int
    alpha: float
    reps: int
    family: LikelihoodFamily
    prior: PriorSpec
    order: str = "first"
    master_seed: int = 0

    def __post_init__(self) -> None:
        if isinstance(self.dist, str):
            object.__setattr__(self, "dist", get_distribution(self.dist))
        object.__setattr__(self, "order", normalize_order(self.order))
        if int(self.n) != self.n or self.n < 4:
            raise OutOfRange(f"n must be an integer >= 4, got {self.n!r}")
        if not 0.0 < self.alpha < 1.0:
            raise OutOfRange(f"alpha must lie in (0, 1), got {self.alpha!r}")
        if int(self.reps) != self.reps or self.reps < 1:
            raise OutOfRange(f"reps must be a positive integer, got {self.reps!r}")
        if not 0 <= int(self.master_seed) < 2**64:
            raise OutOfRange("master_seed must be an unsigned 64-bit integer")

    def to_dict(self) -> dict[str, Any]:
        return {
            "dist": self.dist.kind,
            "n": self.n,
            "alpha": self.alpha,
            "reps": self.reps,
            "family": self.family.to_json(),
            "prior": {"kind": "custom", "name": self.prior.name}
            if isinstance(self.prior, Custom)
            else prior_to_json(self.prior),
            "order": self.order,
            "master_seed": int(self.master_seed),
            "generator": GENERATOR_ID,
        }


@dataclass(frozen=True)
class CoverageReport:
    config: SimConfig
    hits: int
    valid_reps: int
    degenerate_skipped: int
    generator: str = field(default=GENERATOR_ID)

    @property
    def coverage(self) -> float:
        return self.hits / self.valid_reps if self.valid_reps else math.nan

    @property
    def mc_stderr(self) -> float:
        p = self.coverage
        return math.sqrt(p * (1.0 - p) / self.valid_reps) if self.valid_reps else math.nan

    def to_dict(self) -> dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "hits": self.hits,
            "valid_reps": self.valid_reps,
            "degenerate_skipped": self.degenerate_skipped,
            "coverage": self.coverage,
            "mc_stderr": self.mc_stderr,
            "generator": self.generator,
        }


def _coverage_block(config: SimConfig, start: int, stop: int) -> tuple[int, int]:
    u = uniforms(config.master_seed, start, stop, config.n)
    x = config.dist.inverse_cdf(u)
    summary, degenerate = summarize_batch(x)
    with np.errstate(divide="ignore", invalid="ignore"):
        q = quantile(config.family, config.prior, summary, config.alpha, config.order)
        hit = config.dist.moments.theta <= q.theta
    hits = int(np.count_nonzero(hit & ~degenerate))
    return hits, int(np.count_nonzero(degenerate))


def run_coverage(config: SimConfig, workers: int = 1) -> CoverageReport:
    """Estimate ``P(theta <= quantile)`` over ``config.reps`` replications.

    Replications whose sample has zero spread are skipped and reported in
    ``degenerate_skipped``; they are excluded from the denominator.
    """
    results = parallel_map(lambda b: _coverage_block(config, *b), blocks(config.reps, config.n), workers)
    hits = sum(h for h, _ in results)
    skipped = sum(d for _, d in results)
    return CoverageReport(config=config, hits=hits, valid_reps=config.reps - skipped, degenerate_skipped=skipped)
