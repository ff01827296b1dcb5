"""
Łukasiewicz step sets.

A step set S = {-1, b_1, ..., b_{m-1}} has exactly one negative step, -1,
which is kept implicit. Only the non-negative steps are stored.

This module provides construction and parsing (with precise error types for
every way a step set can be invalid) and the elementary derived quantities:
the characteristic polynomial S(u) and its derivatives, the period and the
drift.
"""

import math
from collections.abc import Iterable
from fractions import Fraction

from pydantic import BaseModel, ConfigDict, field_validator

from ascents.errors import (
    DegenerateSet,
    EmptyUps,
    IllegalStep,
    InvalidInputError,
    MissingDownStep,
    NonPositiveArgument,
)

MAX_DERIVATIVE_ORDER = 4


class StepSet(BaseModel):
    """
    Validated Łukasiewicz step set.

    Only the non-negative steps are stored (ascending, distinct); the down
    step -1 is structural. Instances are immutable and hashable, so they can
    key caches.
    """

    model_config = ConfigDict(frozen=True)

    ups: tuple[int, ...]

    @field_validator("ups")
    @classmethod
    def _check_ups(cls, ups: tuple[int, ...]) -> tuple[int, ...]:
        if not ups:
            raise ValueError("ups must not be empty")
        if any(b < 0 for b in ups):
            raise ValueError("ups must be non-negative")
        if list(ups) != sorted(set(ups)):
            raise ValueError("ups must be strictly increasing")
        if ups == (0,):
            raise ValueError("the step set {-1, 0} is excluded")
        return ups

    @property
    def max_up(self) -> int:
        """Largest step."""
        return self.ups[-1]

    @property
    def steps(self) -> tuple[int, ...]:
        """All steps including -1, ascending."""
        return (-1, *self.ups)

    @property
    def size(self) -> int:
        """Number of steps |S| = S(1)."""
        return len(self.ups) + 1

    @property
    def has_zero(self) -> bool:
        """True if the horizontal step 0 belongs to S."""
        return self.ups[0] == 0

    def __str__(self) -> str:
        return to_text(self)


def make_step_set(steps: Iterable[int]) -> StepSet:
    """
    Build a StepSet from a list of integer steps.

    Duplicates are collapsed and the order is irrelevant.

    Args:
        steps: Integer steps; must contain -1 and otherwise only values >= 0

    Returns:
        Validated StepSet

    Raises:
        MissingDownStep: If -1 is absent
        IllegalStep: If a step is below -1
        EmptyUps: If there is no non-negative step
        DegenerateSet: If the input is {-1, 0}

    Examples:
        >>> make_step_set([-1, 1]).ups
        (1,)
        >>> make_step_set([2, -1, 0, 2]).ups
        (0, 2)
    """
    distinct = set(steps)

    illegal = sorted(s for s in distinct if s < -1)
    if illegal:
        raise IllegalStep(
            f"Steps {illegal} are not allowed: -1 must be the only negative step."
        )
    if -1 not in distinct:
        raise MissingDownStep("A Łukasiewicz step set must contain the down step -1.")

    ups = tuple(sorted(distinct - {-1}))
    if not ups:
        raise EmptyUps("A step set needs at least one non-negative step besides -1.")
    if ups == (0,):
        raise DegenerateSet("The step set {-1, 0} is excluded (it admits no growth).")

    return StepSet(ups=ups)


def parse_step_set(text: str) -> StepSet:
    """
    Parse the canonical text form, e.g. "-1,0,2".

    Whitespace and an optional pair of braces are tolerated; the order of the
    entries is irrelevant.

    Raises:
        InvalidInputError: If an entry is not an integer
        (and every error of make_step_set)
    """
    body = text.strip().strip("{}[]")
    try:
        steps = [int(part) for part in body.split(",") if part.strip()]
    except ValueError as e:
        raise InvalidInputError(
            f"Invalid step set {text!r}: expected comma-separated integers like '-1,0,2'."
        ) from e
    return make_step_set(steps)


def to_text(step_set: StepSet) -> str:
    """Canonical comma-separated text form, ascending."""
    return ",".join(str(s) for s in step_set.steps)


def eval_S(step_set: StepSet, u, order: int = 0):
    """
    Evaluate the order-th derivative of S(u) = 1/u + sum(u**b for b in ups).

    The arithmetic follows the type of u: int and Fraction arguments give an
    exact Fraction, mpmath and float arguments give a result of that type. No
    truncation is involved; each monomial is differentiated exactly.

    Args:
        step_set: The step set
        u: Evaluation point, must be positive
        order: Derivative order, 0..4

    Returns:
        S^(order)(u)

    Raises:
        NonPositiveArgument: If u <= 0
        InvalidInputError: If order is outside 0..4
    """
    if not 0 <= order <= MAX_DERIVATIVE_ORDER:
        raise InvalidInputError(f"Derivative order must be in 0..4, got {order}")
    if u <= 0:
        raise NonPositiveArgument(f"S(u) is only evaluated for u > 0, got u={u}")

    if isinstance(u, int):
        u = Fraction(u)

    total = 0 * u
    for s in step_set.steps:
        falling = math.prod(s - j for j in range(order))
        if falling:
            total += falling * u ** (s - order)
    return total


def eval_S_plus(step_set: StepSet, u):
    """Evaluate S_+(u) = S(u) - 1/u, the part of S(u) from non-negative steps."""
    if isinstance(u, int):
        u = Fraction(u)
    return sum((u**b for b in step_set.ups), 0 * u)


def period(step_set: StepSet) -> int:
    """
    Period p: the largest p with u*S(u) a polynomial in u**p.

    Excursions exist only for lengths divisible by p.
    """
    return math.gcd(*(b + 1 for b in step_set.ups))


def drift(step_set: StepSet) -> Fraction:
    """Drift S'(1) = (sum of non-negative steps) - 1."""
    return Fraction(sum(step_set.ups) - 1)


def is_tau_one(step_set: StepSet) -> bool:
    """
    True exactly for {-1, 1} and {-1, 0, 1}.

    These are the only step sets whose structural constant tau equals 1;
    all asymptotic evaluators dispatch on this.
    """
    return step_set.ups in ((1,), (0, 1))


def is_dyck(step_set: StepSet) -> bool:
    """True for S = {-1, 1}."""
    return step_set.ups == (1,)


def is_motzkin(step_set: StepSet) -> bool:
    """True for S = {-1, 0, 1}."""
    return step_set.ups == (0, 1)
