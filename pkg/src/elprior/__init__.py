"""Data-dependent probability matching priors for empirical-type likelihoods."""

from .likelihood import (
    LikelihoodFamily,
    family_cressie_read,
    family_el,
    family_fm_matching,
    family_gel,
    family_geef,
    family_schennach,
    parse_family,
)
from .moments import PopulationMoments, SampleSummary, pivot_y, summarize
from .poly import Poly2
from .posterior import QuantileResult, posterior_coeffs, quantile
from .prior import Elaborate, Flat, Simple, parse_prior, prior_eq26, prior_eq29, prior_eq34

__version__ = "0.1.0"

__all__ = [
    "Elaborate",
    "Flat",
    "LikelihoodFamily",
    "Poly2",
    "PopulationMoments",
    "QuantileResult",
    "SampleSummary",
    "Simple",
    "family_cressie_read",
    "family_el",
    "family_fm_matching",
    "family_gel",
    "family_geef",
    "family_schennach",
    "parse_family",
    "parse_prior",
    "pivot_y",
    "posterior_coeffs",
    "prior_eq26",
    "prior_eq29",
    "prior_eq34",
    "quantile",
    "summarize",
]
