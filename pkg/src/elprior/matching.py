"""Exact checks of the probability-matching conditions.

Everything here is polynomial algebra over the rationals in the population
slots ``s = beta3`` and ``k = beta4``. A condition holds when its residual is
the zero polynomial, i.e. identically in the population parameters.

Conditions by name:

* ``a3``: ``a3 = s/3`` (needed for matching to order ``n^-1/2``).
* ``b2``, ``b4``, ``b6``: the three further likelihood identities for order
  ``n^-1`` under the simple (tilted) prior class.
* ``b4``, ``b6`` with a free quadratic prior term: the elaborate class needs
  only these two; ``b2`` is absorbed by ``lambda``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Literal

from .errors import PreconditionViolated
from .likelihood import LikelihoodFamily
from .poly import K, S, Poly2

_HALF = Fraction(1, 2)
_THIRD = Fraction(1, 3)


@dataclass(frozen=True)
class ConditionResult:
    name: str
    passed: bool
    residual: Poly2
    description: str = ""


@dataclass(frozen=True)
class MatchingReport:
    order: Literal["half", "one"]
    prior_class: Literal["simple", "elaborate"]
    family_name: str
    conditions: tuple[ConditionResult, ...]
    derived_chi: Poly2 | None = None
    derived_lambda: Poly2 | None = None

    @property
    def feasible(self) -> bool:
        return all(c.passed for c in self.conditions)

    def failed(self) -> list[ConditionResult]:
        return [c for c in self.conditions if not c.passed]

    def to_json(self) -> dict:
        return {
            "family": self.family_name,
            "order": self.order,
            "prior_class": self.prior_class,
            "feasible": self.feasible,
            "conditions": [
                {
                    "name": c.name,
                    "pass": c.passed,
                    "residual": str(c.residual),
                    "residual_terms": c.residual.to_json(),
                    "description": c.description,
                }
                for c in self.conditions
            ],
            "derived_chi": None if self.derived_chi is None else str(self.derived_chi),
            "derived_lambda": None if self.derived_lambda is None else str(self.derived_lambda),
        }


def _cond(name: str, residual: Poly2, description: str) -> ConditionResult:
    return ConditionResult(name=name, passed=residual.is_zero(), residual=residual, description=description)


def _a3_condition(family: LikelihoodFamily) -> ConditionResult:
    return _cond("a3", family.a3 - _THIRD * S, "a3 = 1/3*s (likelihood skewness term, order n^-1/2)")


def _b2_target(family: LikelihoodFamily) -> Poly2:
    return _HALF * family.a1 * family.a1 + Fraction(5, 8) * S * S - _THIRD * K + 1


def _b4_target(family: LikelihoodFamily) -> Poly2:
    return _THIRD * S * family.a1 - _HALF * S * S + Fraction(1, 4) * K - _HALF


def _b6_target() -> Poly2:
    return Fraction(1, 18) * S * S


def derived_chi(family: LikelihoodFamily) -> Poly2:
    """Prior tilt ``chi = -(a1 + s/2)`` that kills the order ``n^-1/2`` error."""
    return -(family.a1 + _HALF * S)


def derived_lambda(family: LikelihoodFamily) -> Poly2:
    """Quadratic prior term ``lambda = a1^2 - 2 b2 + 5/4 s^2 - 2/3 k + 2``."""
    return family.a1 * family.a1 - 2 * family.b2 + Fraction(5, 4) * S * S - Fraction(2, 3) * K + 2


def check_order_half(family: LikelihoodFamily) -> MatchingReport:
    cond = _a3_condition(family)
    return MatchingReport(
        order="half",
        prior_class="simple",
        family_name=family.name,
        conditions=(cond,),
        derived_chi=derived_chi(family) if cond.passed else None,
    )


def check_order_one_simple(family: LikelihoodFamily) -> MatchingReport:
    conds = (
        _a3_condition(family),
        _cond("b2", family.b2 - _b2_target(family),
              "b2 = 1/2*a1^2 + 5/8*s^2 - 1/3*k + 1 (simple prior class, order n^-1)"),
        _cond("b4", family.b4 - _b4_target(family),
              "b4 = 1/3*s*a1 - 1/2*s^2 + 1/4*k - 1/2 (simple prior class, order n^-1)"),
        _cond("b6", family.b6 - _b6_target(), "b6 = 1/18*s^2 (simple prior class, order n^-1)"),
    )
    return MatchingReport(
        order="one",
        prior_class="simple",
        family_name=family.name,
        conditions=conds,
        derived_chi=derived_chi(family) if conds[0].passed else None,
    )


def check_order_one_elaborate(family: LikelihoodFamily) -> MatchingReport:
    conds = (
        _a3_condition(family),
        _cond("b4", family.b4 - _b4_target(family),
              "b4 = 1/3*s*a1 - 1/2*s^2 + 1/4*k - 1/2 (elaborate prior class, order n^-1)"),
        _cond("b6", family.b6 - _b6_target(), "b6 = 1/18*s^2 (elaborate prior class, order n^-1)"),
    )
    feasible = all(c.passed for c in conds)
    return MatchingReport(
        order="one",
        prior_class="elaborate",
        family_name=family.name,
        conditions=conds,
        derived_chi=derived_chi(family) if conds[0].passed else None,
        derived_lambda=derived_lambda(family) if feasible else None,
    )


def check(family: LikelihoodFamily, order: str, prior_class: str) -> MatchingReport:
    if order == "half":
        if prior_class == "elaborate":
            # the quadratic term does not enter at this order
            report = check_order_half(family)
            return MatchingReport(
                order="half",
                prior_class="elaborate",
                family_name=family.name,
                conditions=report.conditions,
                derived_chi=report.derived_chi,
            )
        return check_order_half(family)
    if order == "one":
        if prior_class == "elaborate":
            return check_order_one_elaborate(family)
        return check_order_one_simple(family)
    raise ValueError(f"order must be 'half' or 'one', got {order!r}")


def symbolic_delta1(family: LikelihoodFamily, chi: Poly2) -> tuple[Poly2, Poly2]:
    """Coefficients of ``z^0`` and ``z^2`` in the order ``n^-1/2`` coverage error.

    ``chi`` is the prior tilt, i.e. ``sigma * psi1`` at the population values.
    """
    coeff_z0 = family.a1 + 2 * family.a3 + chi - Fraction(1, 6) * S
    coeff_z2 = family.a3 - _THIRD * S
    return coeff_z0, coeff_z2


def symbolic_C(family: LikelihoodFamily) -> tuple[Poly2, Poly2, Poly2]:
    """``(C1, C3, C5)`` with order ``n^-1`` error ``C1 z + C3 z^3 + C5 z^5``.

    Valid only for families with ``a3 = s/3`` under their derived tilt prior.

    Raises:
        PreconditionViolated: if ``a3 != s/3``.
    """
    a3_check = _a3_condition(family)
    if not a3_check.passed:
        raise PreconditionViolated(
            f"C-form needs a3 = 1/3*s; residual is {a3_check.residual}"
        )
    a1, b2, b4, b6 = family.a1, family.b2, family.b4, family.b6
    c1 = (
        b2 + 3 * b4 + 15 * b6 - _HALF * a1 * a1 - S * a1
        + Fraction(1, 24) * S * S - Fraction(5, 12) * K + _HALF
    )
    c3 = b4 + 5 * b6 - _THIRD * S * a1 + Fraction(2, 9) * S * S - Fraction(1, 4) * K + _HALF
    c5 = b6 - Fraction(1, 18) * S * S
    return c1, c3, c5
