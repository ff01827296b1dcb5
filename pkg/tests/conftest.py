"""Shared fixtures and the step-set corpus used across the test suite."""

import pytest

from ascents.stepset import StepSet, make_step_set

CORPUS_STEPS = [
    [-1, 1],
    [-1, 0, 1],
    [-1, 2],
    [-1, 0, 2],
    [-1, 1, 3],
    [-1, 0, 1, 2, 3],
]

CORPUS: list[StepSet] = [make_step_set(steps) for steps in CORPUS_STEPS]

DYCK = make_step_set([-1, 1])
MOTZKIN = make_step_set([-1, 0, 1])
TERNARY = make_step_set([-1, 2])


@pytest.fixture
def dyck() -> StepSet:
    return DYCK


@pytest.fixture
def motzkin() -> StepSet:
    return MOTZKIN


@pytest.fixture
def ternary() -> StepSet:
    return TERNARY
