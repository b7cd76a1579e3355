"""Reproducible Monte Carlo engine."""

from .cumulants import CumulantEstimate, CumulantReport, validate_cumulants
from .harness import CoverageReport, SimConfig, run_coverage, sample
from .rng import GENERATOR_ID, uniforms
from .table2 import Table2Cell, reproduce_table2

__all__ = [
    "GENERATOR_ID",
    "CoverageReport",
    "CumulantEstimate",
    "CumulantReport",
    "SimConfig",
    "Table2Cell",
    "reproduce_table2",
    "run_coverage",
    "sample",
    "uniforms",
    "validate_cumulants",
]
