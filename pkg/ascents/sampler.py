"""
Exact uniform sampling of excursions, dispersed excursions and meanders.

Sampling is done by unranking: a single uniform integer x below the number of
paths is drawn, and steps are then chosen one by one, skipping over the
completion counts of the smaller alternatives. With exact integer tables this
is exactly uniform.

Random numbers come from numpy's PCG64 generator. Trial i of a Monte Carlo run
uses the seed derive_seed(seed, i), which hashes (seed, i) through numpy's
SeedSequence, so every trial is reproducible on its own.
"""

from functools import lru_cache

import numpy as np
import structlog
from mpmath import mp
from pydantic import BaseModel, ConfigDict
from scipy import stats

from ascents import asymptotics
from ascents.errors import EmptyFamily, InvalidInputError, TooFewTrials, ZeroTrials
from ascents.exact import HORIZONTAL, check_request, count_ascents
from ascents.kind import PathKind
from ascents.stepset import StepSet

logger = structlog.get_logger()

MIN_NORMALITY_TRIALS = 100
SEED_LIMIT = 1 << 64

Table = tuple[tuple[int, ...], ...]


class LatticePath(BaseModel):
    """
    A path as a step word.

    For dispersed excursions the value HORIZONTAL (0) marks an inserted
    horizontal step.
    """

    model_config = ConfigDict(frozen=True)

    kind: PathKind
    steps: tuple[int, ...]

    @property
    def n(self) -> int:
        """Length of the path."""
        return len(self.steps)


class EmpiricalMoments(BaseModel):
    """Sample mean and variance of the r-ascent number over `trials` draws."""

    model_config = ConfigDict(frozen=True)

    mean: float
    variance: float
    trials: int


def validate_path(step_set: StepSet, path: LatticePath) -> None:
    """
    Check that a path belongs to its family.

    Raises:
        InvalidInputError: If a step is not allowed, the path dips below 0,
            a horizontal step occurs above 0, or an excursion does not end at 0
    """
    dispersed = path.kind is PathKind.DISPERSED
    altitude = 0
    for i, step in enumerate(path.steps):
        if dispersed and step == HORIZONTAL:
            if altitude != 0:
                raise InvalidInputError(f"Horizontal step at altitude {altitude} (position {i})")
            continue
        if step not in step_set.steps:
            raise InvalidInputError(f"Step {step} at position {i} is not in {step_set}")
        altitude += step
        if altitude < 0:
            raise InvalidInputError(f"Path goes below 0 at position {i}")
    if path.kind.ends_at_zero and altitude != 0:
        raise InvalidInputError(f"A {path.kind.value} must end at altitude 0, ends at {altitude}")


def _options(step_set: StepSet, kind: PathKind, altitude: int) -> list[tuple[int, int]]:
    """(step symbol, altitude change) pairs allowed from `altitude`, in a fixed order."""
    options = [(s, s) for s in step_set.steps if altitude + s >= 0]
    if kind is PathKind.DISPERSED and altitude == 0:
        options.append((HORIZONTAL, 0))
        options.sort()
    return options


class _Completions:
    """
    completions(k, a): number of valid ways to finish a path with k steps
    left from altitude a.

    Excursion rows cover a = 0..k (higher altitudes cannot return to 0).
    Meander rows cover a = 0..k-1; from a >= k no step sequence can reach a
    negative altitude, so every one of the |S|**k words is valid.
    """

    def __init__(self, step_set: StepSet, kind: PathKind, rows: Table):
        self.kind = kind
        self.size = step_set.size
        self.rows = rows

    def __call__(self, k: int, a: int) -> int:
        if a < 0:
            return 0
        row = self.rows[k]
        if a < len(row):
            return row[a]
        return self.size**k if self.kind is PathKind.MEANDER else 0


@lru_cache(maxsize=16)
def _completion_table(step_set: StepSet, kind: PathKind, n: int) -> _Completions:
    meander = kind is PathKind.MEANDER
    rows: list[tuple[int, ...]] = [() if meander else (1,)]
    table = _Completions(step_set, kind, tuple(rows))

    for k in range(1, n + 1):
        width = k if meander else k + 1
        row = tuple(
            sum(table(k - 1, a + delta) for _, delta in _options(step_set, kind, a))
            for a in range(width)
        )
        rows.append(row)
        table = _Completions(step_set, kind, tuple(rows))

    logger.debug("completion_table_built", steps=str(step_set), kind=kind.value, n=n)
    return table


def _rng(seed: int) -> np.random.Generator:
    if not 0 <= seed < SEED_LIMIT:
        raise InvalidInputError(f"Seed must be a 64-bit unsigned integer, got {seed}")
    return np.random.Generator(np.random.PCG64(seed))


def derive_seed(seed: int, index: int) -> int:
    """Seed of trial `index`: the first 64-bit word of SeedSequence((seed, index))."""
    state = np.random.SeedSequence((seed, index)).generate_state(1, dtype=np.uint64)
    return int(state[0])


def uniform_below(rng: np.random.Generator, bound: int) -> int:
    """
    Uniform integer in [0, bound) for arbitrarily large bound.

    Assembles bound.bit_length() random bits from 32-bit words and rejects
    values >= bound.
    """
    bits = bound.bit_length()
    words = (bits + 31) // 32
    while True:
        value = 0
        for word in rng.integers(0, 1 << 32, size=words, dtype=np.uint64):
            value = (value << 32) | int(word)
        value >>= words * 32 - bits
        if value < bound:
            return value


def _unrank(
    step_set: StepSet, kind: PathKind, n: int, table: _Completions, rank: int
) -> tuple[int, ...]:
    steps = []
    altitude = 0
    for k in range(n, 0, -1):
        for symbol, delta in _options(step_set, kind, altitude):
            block = table(k - 1, altitude + delta)
            if rank < block:
                steps.append(symbol)
                altitude += delta
                break
            rank -= block
    return tuple(steps)


def sample_path(step_set: StepSet, kind: PathKind, n: int, seed: int) -> LatticePath:
    """
    Draw a path uniformly at random from all paths of the given kind and length.

    The same (step_set, kind, n, seed) always gives the same path.

    Raises:
        EmptyFamily: If there are no paths of this kind and length
    """
    check_request(step_set, kind, n)
    table = _completion_table(step_set, kind, n)
    total = table(n, 0)
    if total == 0:
        raise EmptyFamily(f"There are no {kind.value} paths of length {n} over {step_set}.")

    rank = uniform_below(_rng(seed), total)
    return LatticePath(kind=kind, steps=_unrank(step_set, kind, n, table, rank))


def _ascent_samples(
    step_set: StepSet, kind: PathKind, n: int, r: int, trials: int, seed: int
) -> np.ndarray:
    dispersed = kind is PathKind.DISPERSED
    return np.array(
        [
            count_ascents(sample_path(step_set, kind, n, derive_seed(seed, i)).steps, r, dispersed)
            for i in range(trials)
        ],
        dtype=float,
    )


def empirical_moments(
    step_set: StepSet, kind: PathKind, n: int, r: int, trials: int, seed: int
) -> EmpiricalMoments:
    """
    Sample mean and (unbiased) variance of the r-ascent number.

    Raises:
        ZeroTrials: If trials is 0
        EmptyFamily: If there are no paths of this kind and length
    """
    if trials < 1:
        raise ZeroTrials(f"At least one trial is needed, got {trials}")
    check_request(step_set, kind, n, r)

    samples = _ascent_samples(step_set, kind, n, r, trials, seed)
    variance = float(np.var(samples, ddof=1)) if trials > 1 else 0.0
    return EmpiricalMoments(mean=float(np.mean(samples)), variance=variance, trials=trials)


def normality_check(
    step_set: StepSet,
    r: int,
    n: int,
    trials: int,
    seed: int,
    centering: str = "leading",
    jitter: bool = False,
) -> float:
    """
    Kolmogorov-Smirnov distance between standardized meander ascent counts
    and the standard normal distribution.

    By default the statistic is that of (M - mu n) / sqrt(sigma^2 n). With
    centering="full" counts are centred by the expansion mu n + c0 instead
    and scaled by the full asymptotic variance. jitter=True adds a seeded
    uniform(-1/2, 1/2) offset to smooth out the integer lattice.

    Raises:
        TooFewTrials: If trials < 100
    """
    if trials < MIN_NORMALITY_TRIALS:
        raise TooFewTrials(
            f"A normality check needs at least {MIN_NORMALITY_TRIALS} trials, got {trials}"
        )
    if centering not in ("full", "leading"):
        raise InvalidInputError(f"Unknown centering {centering!r}; use 'full' or 'leading'")

    if centering == "full":
        center = asymptotics.meander_expectation_asym(step_set, r, n)
        scale = mp.sqrt(asymptotics.meander_variance_asym(step_set, r, n))
    else:
        mu, sigma2 = asymptotics.meander_leading_terms(step_set, r)
        center = mu * n
        scale = mp.sqrt(sigma2 * n)

    samples = _ascent_samples(step_set, PathKind.MEANDER, n, r, trials, seed)
    if jitter:
        samples = samples + _rng(derive_seed(seed, trials)).uniform(-0.5, 0.5, size=trials)

    standardized = (samples - float(center)) / float(scale)
    statistic = float(stats.kstest(standardized, "norm").statistic)

    logger.info(
        "normality_checked",
        steps=str(step_set),
        r=r,
        n=n,
        trials=trials,
        centering=centering,
        jitter=jitter,
        ks=statistic,
    )
    return statistic
