"""Sample summaries, the studentized pivot, and the built-in populations."""

from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Callable, Iterable

import numpy as np

from .errors import DegenerateSample, ParseError, TooFewPoints
from .normal import inverse_normal_cdf

MIN_SAMPLE_SIZE = 4


@dataclass(frozen=True)
class SampleSummary:
    """``n``, the mean and the central-moment shape statistics of a sample.

    Moments use divisor ``n``. ``g3 = m3 / m2**1.5`` and ``g4 = m4 / m2**2``.
    The fields may also hold equal-length numpy arrays, one entry per
    replication, as produced by :func:`summarize_batch`; every downstream
    formula is written to broadcast over them.
    """

    n: int
    mean: Any
    m2: Any
    g3: Any
    g4: Any

    def __post_init__(self) -> None:
        if self.n < MIN_SAMPLE_SIZE:
            raise TooFewPoints(f"need at least {MIN_SAMPLE_SIZE} observations, got {self.n}")


@dataclass(frozen=True)
class PopulationMoments:
    theta: float
    sigma2: float
    beta3: float
    beta4: float

    def __post_init__(self) -> None:
        if not self.sigma2 > 0:
            raise ValueError("population variance must be positive")
        if self.beta4 < 1.0 + self.beta3**2 - 1e-12:
            raise ValueError("beta4 must be at least 1 + beta3^2")

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)


def summarize(data: Iterable[float]) -> SampleSummary:
    """Summarize one sample.

    Raises:
        TooFewPoints: fewer than four observations.
        DegenerateSample: all observations equal (``m2 == 0``).
    """
    x = np.asarray(list(data) if not isinstance(data, np.ndarray) else data, dtype=float)
    if x.ndim != 1:
        raise ValueError("summarize expects a one-dimensional sample")
    n = x.size
    if n < MIN_SAMPLE_SIZE:
        raise TooFewPoints(f"need at least {MIN_SAMPLE_SIZE} observations, got {n}")
    mean = float(np.mean(x))
    d = x - mean
    d2 = d * d
    m2 = float(np.mean(d2))
    if m2 == 0.0:
        raise DegenerateSample("sample has zero spread (m2 == 0)")
    m3 = float(np.mean(d2 * d))
    m4 = float(np.mean(d2 * d2))
    return SampleSummary(n=n, mean=mean, m2=m2, g3=m3 / m2**1.5, g4=m4 / (m2 * m2))


def summarize_batch(x: np.ndarray) -> tuple[SampleSummary, np.ndarray]:
    """Summarize each row of a ``(reps, n)`` array.

    Returns the batch summary and a boolean mask of degenerate rows
    (``m2 == 0``). Shape statistics of degenerate rows are NaN.
    """
    x = np.asarray(x, dtype=float)
    n = x.shape[1]
    mean = x.mean(axis=1)
    d = x - mean[:, None]
    d2 = d * d
    m2 = d2.mean(axis=1)
    m3 = (d2 * d).mean(axis=1)
    m4 = (d2 * d2).mean(axis=1)
    degenerate = m2 == 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        g3 = m3 / m2**1.5
        g4 = m4 / (m2 * m2)
    return SampleSummary(n=n, mean=mean, m2=m2, g3=g3, g4=g4), degenerate


def pivot_y(summary: SampleSummary, theta: Any) -> Any:
    """Studentized pivot ``(n / m2)^(1/2) * (theta - mean)``."""
    return np.sqrt(summary.n / summary.m2) * (theta - summary.mean)


def read_data(path: str | Path) -> np.ndarray:
    """Read one number per line; a single leading header line is allowed.

    Blank lines are skipped. Any other non-numeric line is an error.
    """
    values: list[float] = []
    seen_content = False
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            if not seen_content:
                seen_content = True
                continue  # header
            raise ParseError(f"{path}: line {lineno}: not a number: {line!r}") from None
        seen_content = True
    return np.asarray(values, dtype=float)


@dataclass(frozen=True)
class DistributionSpec:
    """A built-in population: its exact moments and its quantile function."""

    kind: str
    label: str
    moments: PopulationMoments
    inverse_cdf: Callable[[np.ndarray], np.ndarray]
    density: Callable[[float], float]
    support: tuple[float, float]

    def __repr__(self) -> str:
        return f"DistributionSpec({self.kind!r})"


def _rayleigh_moments() -> PopulationMoments:
    pi = math.pi
    return PopulationMoments(
        theta=math.sqrt(pi / 2.0),
        sigma2=(4.0 - pi) / 2.0,
        beta3=2.0 * math.sqrt(pi) * (pi - 3.0) / (4.0 - pi) ** 1.5,
        beta4=(32.0 - 3.0 * pi**2) / (4.0 - pi) ** 2,
    )


DISTRIBUTIONS: dict[str, DistributionSpec] = {
    "normal": DistributionSpec(
        "normal", "Normal(0,1)",
        PopulationMoments(0.0, 1.0, 0.0, 3.0),
        inverse_normal_cdf,
        lambda x: math.exp(-0.5 * x * x) / math.sqrt(2.0 * math.pi),
        (-math.inf, math.inf),
    ),
    "uniform": DistributionSpec(
        "uniform", "Uniform(0,1)",
        PopulationMoments(0.5, 1.0 / 12.0, 0.0, 1.8),
        lambda u: np.asarray(u, dtype=float),
        lambda x: 1.0,
        (0.0, 1.0),
    ),
    "beta12": DistributionSpec(
        "beta12", "Beta(1,2)",
        PopulationMoments(1.0 / 3.0, 1.0 / 18.0, 2.0 * math.sqrt(2.0) / 5.0, 2.4),
        lambda u: 1.0 - np.sqrt(1.0 - np.asarray(u, dtype=float)),
        lambda x: 2.0 * (1.0 - x),
        (0.0, 1.0),
    ),
    "exponential": DistributionSpec(
        "exponential", "Exponential(1)",
        PopulationMoments(1.0, 1.0, 2.0, 9.0),
        lambda u: -np.log1p(-np.asarray(u, dtype=float)),
        lambda x: math.exp(-x),
        (0.0, math.inf),
    ),
    "rayleigh": DistributionSpec(
        "rayleigh", "Rayleigh(1)",
        _rayleigh_moments(),
        lambda u: np.sqrt(-2.0 * np.log1p(-np.asarray(u, dtype=float))),
        lambda x: x * math.exp(-0.5 * x * x),
        (0.0, math.inf),
    ),
}

_ALIASES = {
    "norm": "normal", "gauss": "normal",
    "unif": "uniform",
    "beta": "beta12", "beta(1,2)": "beta12",
    "exp": "exponential",
    "ray": "rayleigh",
}

# row order of the published simulation table
TABLE_ORDER = ("normal", "uniform", "beta12", "exponential", "rayleigh")


def get_distribution(name: str) -> DistributionSpec:
    key = name.strip().lower()
    key = _ALIASES.get(key, key)
    try:
        return DISTRIBUTIONS[key]
    except KeyError:
        known = ", ".join(sorted(set(DISTRIBUTIONS) | set(_ALIASES)))
        raise ParseError(f"unknown distribution {name!r}; known: {known}") from None


def dist_moments(dist: DistributionSpec | str) -> PopulationMoments:
    if isinstance(dist, str):
        dist = get_distribution(dist)
    return dist.moments
