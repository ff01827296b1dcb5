"""
Exception hierarchy for the ascents toolkit.

Every error raised by the library derives from AscentsError. The two
category bases decide how the command line reports a failure:

- InvalidInputError: the request itself is invalid (exit code 2)
- NumericalError: a numerical procedure did not converge (exit code 3)
"""


class AscentsError(Exception):
    """Base exception for all ascents errors."""

    pass


class InvalidInputError(AscentsError):
    """Raised when a request violates a precondition."""

    pass


class NumericalError(AscentsError):
    """Raised when a numerical procedure fails to produce a result."""

    pass


# Step sets


class MissingDownStep(InvalidInputError):
    """Raised when a step set does not contain the down step -1."""

    pass


class IllegalStep(InvalidInputError):
    """Raised when a step set contains a step below -1."""

    pass


class DegenerateSet(InvalidInputError):
    """Raised for the excluded step set {-1, 0}."""

    pass


class EmptyUps(InvalidInputError):
    """Raised when a step set has no non-negative step."""

    pass


class NonPositiveArgument(InvalidInputError):
    """Raised when S(u) is evaluated at u <= 0."""

    pass


# Path families


class DispersedNeedsNoZeroStep(InvalidInputError):
    """Raised when dispersed excursions are requested over a set containing 0."""

    pass


class EmptyFamily(InvalidInputError):
    """Raised when a statistic is requested for a family without paths."""

    pass


class CapExceeded(InvalidInputError):
    """Raised when brute-force enumeration is asked for too long paths."""

    pass


# Asymptotics


class PeriodMismatch(InvalidInputError):
    """Raised when an excursion expansion is evaluated at a length p does not divide."""

    pass


class TauIsOne(InvalidInputError):
    """Raised when a tau != 1 formula is requested for {-1,1} or {-1,0,1}."""

    pass


class NoConvergence(NumericalError):
    """Raised when a root finder exhausts its iteration budget."""

    pass


# Sampling


class ZeroTrials(InvalidInputError):
    """Raised when a Monte Carlo estimate is requested with no trials."""

    pass


class TooFewTrials(InvalidInputError):
    """Raised when the normality check gets fewer trials than it needs."""

    pass


# Trees


class NotAnExcursion(InvalidInputError):
    """Raised when a step word is not an excursion over the step set."""

    pass


class IllegalOutdegree(InvalidInputError):
    """Raised when a tree node has an outdegree outside 1 + S."""

    pass


class MalformedTree(InvalidInputError):
    """Raised when tree text cannot be parsed."""

    pass
