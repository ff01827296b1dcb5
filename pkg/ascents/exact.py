"""
Exact enumeration of excursions, dispersed excursions and meanders.

Paths are counted by a forward dynamic program over the state
(run length u, altitude a), where u is the length of the current maximal run
of non-down steps clipped to r + 1. When a run is closed (by a down step, a
dispersed horizontal step, or the end of the path) an r-ascent is recorded
iff u == r.

Each DP layer is a numpy object array of Python integers with shape
(payload, r + 2, altitude), so exactness is never traded for speed. The
payload axis carries what is being counted:

- counts only (payload size 1)
- moment sums (count, sum k, sum k^2) of the ascent number k (size 3)
- the full ascent distribution, indexed by k (size floor((n+1)/(r+1)) + 1)

A direct brute-force enumerator is provided as an independent oracle.

Note: a trailing run of exactly r up steps at the end of a path counts as
an r-ascent. This matches the trailing factor of the meander generating
function and is pinned by the series cross-checks.
"""

from collections import deque
from collections.abc import Callable, Iterator
from concurrent.futures import ThreadPoolExecutor
from fractions import Fraction

import numpy as np
import structlog
from pydantic import BaseModel, ConfigDict

from ascents.errors import CapExceeded, DispersedNeedsNoZeroStep, EmptyFamily, InvalidInputError
from ascents.kind import PathKind
from ascents.stepset import StepSet
from config.settings import settings

logger = structlog.get_logger()

# Dispersed excursions are only defined for step sets without 0, so the
# value 0 is free to encode the extra horizontal step in step words.
HORIZONTAL = 0


class AscentDistribution(BaseModel):
    """
    Exact distribution of the number of r-ascents.

    counts[k] is the number of paths of the given kind and length with exactly
    k r-ascents, for k = 0 .. floor((n+1)/(r+1)).
    """

    model_config = ConfigDict(frozen=True)

    n: int
    r: int
    kind: PathKind
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        """Number of paths (the marginal over k)."""
        return sum(self.counts)

    def moments(self) -> "Moments":
        """
        Exact mean and variance computed from the distribution.

        Raises:
            EmptyFamily: If there are no paths
        """
        first = sum(k * c for k, c in enumerate(self.counts))
        second = sum(k * k * c for k, c in enumerate(self.counts))
        return Moments.from_sums(self.total, first, second)


class Moments(BaseModel):
    """Count of paths with exact mean and variance of the r-ascent number."""

    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    count: int
    mean: Fraction
    variance: Fraction
    second_factorial: Fraction

    @classmethod
    def from_sums(cls, count: int, first: int, second: int) -> "Moments":
        """
        Build moments from the raw sums (sum of 1, sum of k, sum of k^2).

        Raises:
            EmptyFamily: If count is 0
        """
        if count == 0:
            raise EmptyFamily("There are no paths of this kind and length.")
        mean = Fraction(first, count)
        return cls(
            count=count,
            mean=mean,
            variance=Fraction(second, count) - mean * mean,
            second_factorial=Fraction(second - first, count),
        )


class _Payload:
    """What a DP layer carries per state; see the module docstring."""

    size: int = 1

    def unit(self) -> list[int]:
        return [1]

    def bump(self, block: np.ndarray) -> np.ndarray:
        """Account for one more ascent in every entry of block (axis 0 = payload)."""
        return block


class _MomentPayload(_Payload):
    size = 3

    def unit(self) -> list[int]:
        return [1, 0, 0]

    def bump(self, block: np.ndarray) -> np.ndarray:
        out = np.empty_like(block)
        out[0] = block[0]
        out[1] = block[1] + block[0]
        out[2] = block[2] + 2 * block[1] + block[0]
        return out


class _DistributionPayload(_Payload):
    def __init__(self, size: int):
        self.size = size

    def unit(self) -> list[int]:
        return [1] + [0] * (self.size - 1)

    def bump(self, block: np.ndarray) -> np.ndarray:
        out = np.zeros_like(block)
        out[1:] = block[:-1]
        return out


def max_ascents(n: int, r: int) -> int:
    """Upper bound floor((n+1)/(r+1)) on the number of r-ascents of a length-n path."""
    return (n + 1) // (r + 1)


def check_request(step_set: StepSet, kind: PathKind, n: int, r: int = 1) -> None:
    if n < 0:
        raise InvalidInputError(f"Path length must be non-negative, got {n}")
    if r < 1:
        raise InvalidInputError(f"Ascent length r must be at least 1, got {r}")
    if kind is PathKind.DISPERSED and step_set.has_zero:
        raise DispersedNeedsNoZeroStep(
            f"Dispersed excursions need a step set without 0, got {step_set}"
        )


def _close_runs(block: np.ndarray, r: int, payload: _Payload) -> np.ndarray:
    """Merge the run-length axis (axis 1), recording an ascent for runs of length r."""
    return block.sum(axis=1) - block[:, r] + payload.bump(block[:, r])


def _forward_layers(
    step_set: StepSet,
    kind: PathKind,
    n: int,
    r: int,
    payload: _Payload,
    threads: int = 1,
) -> Iterator[np.ndarray]:
    """
    Run the forward DP and yield the payload read-out for every length 0..n.

    For excursions and dispersed excursions the read-out is the altitude-0
    column; for meanders it is the sum over all altitudes. States that can no
    longer return to 0 within n steps are pruned.
    """
    runs = r + 2
    max_up = step_set.max_up
    ends_at_zero = kind.ends_at_zero
    width = n + 1 if ends_at_zero else n * max_up + 1

    layer = np.zeros((payload.size, runs, width), dtype=object)
    layer[:, 0, 0] = payload.unit()
    top = 0

    def read_out(current: np.ndarray, current_top: int) -> np.ndarray:
        if ends_at_zero:
            return _close_runs(current[:, :, 0:1], r, payload)[:, 0]
        return _close_runs(current[:, :, : current_top + 1], r, payload).sum(axis=1)

    yield read_out(layer, top)

    executor = ThreadPoolExecutor(max_workers=threads) if threads > 1 else None
    try:
        for i in range(1, n + 1):
            limit = n - i if ends_at_zero else i * max_up
            new_top = min(top + max_up, limit)
            moves = _moves(step_set, kind, layer, top, new_top, r, payload)

            if executor is None:
                results = [move() for move in moves]
            else:
                results = list(executor.map(lambda move: move(), moves))

            new = np.zeros_like(layer)
            # applied in step order whatever the thread count
            for target, value in results:
                new[target] += value

            layer, top = new, new_top
            yield read_out(layer, top)
    finally:
        if executor is not None:
            executor.shutdown()


def _moves(
    step_set: StepSet,
    kind: PathKind,
    layer: np.ndarray,
    top: int,
    new_top: int,
    r: int,
    payload: _Payload,
) -> list[Callable[[], tuple[tuple, np.ndarray]]]:
    """One deferred contribution per step type: (target index, value to add)."""
    moves: list[Callable[[], tuple[tuple, np.ndarray]]] = []

    for b in step_set.ups:
        hi = min(top, new_top - b)
        if hi < 0:
            continue

        def up_move(b: int = b, hi: int = hi) -> tuple[tuple, np.ndarray]:
            src = layer[:, :, : hi + 1]
            value = np.zeros_like(src)
            value[:, 1:] = src[:, :-1]
            value[:, -1] += src[:, -1]
            return (slice(None), slice(None), slice(b, b + hi + 1)), value

        moves.append(up_move)

    down_hi = min(top, new_top + 1)
    if down_hi >= 1:

        def down_move() -> tuple[tuple, np.ndarray]:
            src = layer[:, :, 1 : down_hi + 1]
            return (slice(None), 0, slice(0, down_hi)), _close_runs(src, r, payload)

        moves.append(down_move)

    if kind is PathKind.DISPERSED:

        def horizontal_move() -> tuple[tuple, np.ndarray]:
            return (slice(None), 0, 0), _close_runs(layer[:, :, 0:1], r, payload)[:, 0]

        moves.append(horizontal_move)

    return moves


def _final(
    step_set: StepSet, kind: PathKind, n: int, r: int, payload: _Payload, threads: int
) -> np.ndarray:
    """Read-out after the last step."""
    return deque(_forward_layers(step_set, kind, n, r, payload, threads), maxlen=1)[0]


def count(step_set: StepSet, kind: PathKind, n: int) -> int:
    """
    Exact number of paths of the given kind and length.

    The empty path counts once for every kind.

    Raises:
        DispersedNeedsNoZeroStep: For dispersed excursions over a set containing 0
    """
    check_request(step_set, kind, n)
    result = _final(step_set, kind, n, 1, _Payload(), threads=1)
    return int(result[0])


def distribution(
    step_set: StepSet, kind: PathKind, n: int, r: int, threads: int = 1
) -> AscentDistribution:
    """
    Exact distribution of the number of r-ascents over all paths of length n.

    Args:
        step_set: The step set
        kind: Path family
        n: Path length
        r: Ascent length (r >= 1)
        threads: Worker threads for the per-step moves (results are identical)

    Returns:
        AscentDistribution with floor((n+1)/(r+1)) + 1 entries

    Raises:
        DispersedNeedsNoZeroStep: For dispersed excursions over a set containing 0
    """
    check_request(step_set, kind, n, r)
    payload = _DistributionPayload(max_ascents(n, r) + 1)
    result = _final(step_set, kind, n, r, payload, threads)
    counts = tuple(int(c) for c in result)

    logger.debug(
        "distribution_computed",
        steps=str(step_set),
        kind=kind.value,
        n=n,
        r=r,
        total=sum(counts),
    )
    return AscentDistribution(n=n, r=r, kind=kind, counts=counts)


def moment_profile(
    step_set: StepSet, kind: PathKind, n_max: int, r: int, threads: int = 1
) -> list[Moments | None]:
    """
    Moments for every length 0..n_max from a single forward pass.

    Entry m is None when there is no path of length m (e.g. excursions of a
    length not divisible by the period).
    """
    check_request(step_set, kind, n_max, r)
    profile: list[Moments | None] = []
    for sums in _forward_layers(step_set, kind, n_max, r, _MomentPayload(), threads):
        c, first, second = (int(x) for x in sums)
        profile.append(Moments.from_sums(c, first, second) if c else None)

    logger.debug("moment_profile_computed", steps=str(step_set), kind=kind.value, n_max=n_max, r=r)
    return profile


def moments(
    step_set: StepSet,
    kind: PathKind,
    n: int,
    r: int,
    method: str = "dp",
    threads: int = 1,
) -> Moments:
    """
    Exact count, mean and variance of the number of r-ascents.

    Args:
        method: "dp" propagates (count, sum k, sum k^2) through the DP, which
            keeps the state small for long paths; "distribution" computes the
            full distribution first. Both give identical results.

    Raises:
        EmptyFamily: If there are no paths of this kind and length
        DispersedNeedsNoZeroStep: For dispersed excursions over a set containing 0
    """
    if method == "distribution":
        return distribution(step_set, kind, n, r, threads).moments()
    if method != "dp":
        raise InvalidInputError(f"Unknown moments method: {method!r}")

    check_request(step_set, kind, n, r)
    c, first, second = (int(x) for x in _final(step_set, kind, n, r, _MomentPayload(), threads))
    return Moments.from_sums(c, first, second)


def factorial_moment(step_set: StepSet, kind: PathKind, n: int, r: int) -> Fraction:
    """Exact second factorial moment E[X(X-1)] of the r-ascent number."""
    return moments(step_set, kind, n, r).second_factorial


def count_ascents(steps: list[int] | tuple[int, ...], r: int, dispersed: bool = False) -> int:
    """
    Count r-ascents of a step word by a direct scan.

    A run is a maximal block of non-down steps; it is an r-ascent if it has
    exactly r steps. With dispersed=True the value HORIZONTAL (0) is the
    inserted horizontal step, which closes a run without belonging to it.

    Examples:
        >>> count_ascents([1, -1, 1, -1], 1)
        2
        >>> count_ascents([1, 1], 1)
        0
    """
    ascents = 0
    run = 0
    for step in steps:
        if step == -1 or (dispersed and step == HORIZONTAL):
            if run == r:
                ascents += 1
            run = 0
        else:
            run += 1
    if run == r:
        ascents += 1
    return ascents


def enumerate_paths(step_set: StepSet, kind: PathKind, n: int) -> Iterator[tuple[int, ...]]:
    """
    Yield every path of the given kind and length, in lexicographic step order.

    Depth-first search over step words; prefixes that dip below 0 (or, for
    excursions, cannot return to 0 in time) are abandoned.
    """
    check_request(step_set, kind, n)
    alphabet = list(step_set.steps)
    if kind is PathKind.DISPERSED:
        alphabet = sorted([*alphabet, HORIZONTAL])

    # explicit stack of (prefix, altitude)
    stack: list[tuple[tuple[int, ...], int]] = [((), 0)]
    while stack:
        prefix, altitude = stack.pop()
        if len(prefix) == n:
            if altitude == 0 or not kind.ends_at_zero:
                yield prefix
            continue

        remaining = n - len(prefix) - 1
        for step in reversed(alphabet):
            if kind is PathKind.DISPERSED and step == HORIZONTAL and altitude != 0:
                continue
            nxt = altitude + step
            if nxt < 0 or (kind.ends_at_zero and nxt > remaining):
                continue
            stack.append(((*prefix, step), nxt))


def brute_force_distribution(
    step_set: StepSet, kind: PathKind, n: int, r: int, cap: int | None = None
) -> AscentDistribution:
    """
    Independent oracle: enumerate all paths and scan each for r-ascents.

    Args:
        cap: Longest admissible length (default: settings().brute_force_cap)

    Raises:
        CapExceeded: If n exceeds the cap
    """
    cap = settings().brute_force_cap if cap is None else cap
    if n > cap:
        raise CapExceeded(f"Brute force is limited to n <= {cap}, got n={n}")
    check_request(step_set, kind, n, r)

    counts = [0] * (max_ascents(n, r) + 1)
    dispersed = kind is PathKind.DISPERSED
    for path in enumerate_paths(step_set, kind, n):
        counts[count_ascents(path, r, dispersed)] += 1

    return AscentDistribution(n=n, r=r, kind=kind, counts=tuple(counts))
