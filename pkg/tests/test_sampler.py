"""
Unit tests for uniform sampling.

Covers determinism, path validity, uniformity over small families, Monte
Carlo moments against exact values and the normality check for meanders.
"""

from collections import Counter

import numpy as np
import pytest
from mpmath import mp
from scipy import stats

from ascents import exact
from ascents.asymptotics import meander_leading_terms
from ascents.errors import EmptyFamily, InvalidInputError, TooFewTrials, ZeroTrials
from ascents.kind import PathKind
from ascents.sampler import (
    LatticePath,
    derive_seed,
    empirical_moments,
    normality_check,
    sample_path,
    uniform_below,
    validate_path,
)
from tests.conftest import CORPUS, DYCK, MOTZKIN, TERNARY


def _kinds(step_set):
    kinds = [PathKind.EXCURSION, PathKind.MEANDER]
    if not step_set.has_zero:
        kinds.append(PathKind.DISPERSED)
    return kinds


@pytest.mark.unit
class TestSamplePath:
    """Test suite for sample_path()."""

    def test_unique_excursion(self):
        for seed in range(5):
            assert sample_path(TERNARY, PathKind.EXCURSION, 3, seed).steps == (2, -1, -1)

    def test_empty_path(self):
        for step_set in CORPUS:
            for kind in _kinds(step_set):
                path = sample_path(step_set, kind, 0, 11)
                assert path.steps == ()
                assert path.n == 0

    def test_deterministic(self):
        first = sample_path(CORPUS[-1], PathKind.MEANDER, 40, 1234)
        second = sample_path(CORPUS[-1], PathKind.MEANDER, 40, 1234)

        assert first == second

    def test_empty_family(self):
        with pytest.raises(EmptyFamily):
            sample_path(DYCK, PathKind.EXCURSION, 5, 0)

    def test_seed_range(self):
        with pytest.raises(InvalidInputError):
            sample_path(DYCK, PathKind.MEANDER, 4, -1)
        with pytest.raises(InvalidInputError):
            sample_path(DYCK, PathKind.MEANDER, 4, 1 << 64)

    def test_dispersed_needs_no_zero(self):
        with pytest.raises(InvalidInputError):
            sample_path(MOTZKIN, PathKind.DISPERSED, 4, 0)

    @pytest.mark.parametrize("step_set", CORPUS, ids=str)
    def test_samples_are_valid(self, step_set):
        for kind in _kinds(step_set):
            for seed in range(20):
                path = sample_path(step_set, kind, 30, derive_seed(99, seed))
                validate_path(step_set, path)
                assert path.kind is kind
                assert path.n == 30

    def test_every_path_is_reachable(self):
        seen = {sample_path(TERNARY, PathKind.DISPERSED, 6, seed).steps for seed in range(400)}
        expected = set(exact.enumerate_paths(TERNARY, PathKind.DISPERSED, 6))

        assert seen == expected

    @pytest.mark.slow
    def test_uniform_over_dyck_excursions(self):
        """Each of the 5 Dyck paths of length 6 is drawn with frequency in [0.19, 0.21]."""
        draws = 100_000
        freq = Counter(
            sample_path(DYCK, PathKind.EXCURSION, 6, derive_seed(3, i)).steps for i in range(draws)
        )

        assert len(freq) == 5
        for hits in freq.values():
            assert 0.19 <= hits / draws <= 0.21

    @pytest.mark.slow
    def test_chi_square_uniformity(self):
        """Chi-square goodness of fit over all 96 Motzkin meanders of length 5."""
        draws = 100_000
        paths = list(exact.enumerate_paths(MOTZKIN, PathKind.MEANDER, 5))
        freq = Counter(
            sample_path(MOTZKIN, PathKind.MEANDER, 5, derive_seed(17, i)).steps
            for i in range(draws)
        )
        observed = [freq[p] for p in paths]

        assert sum(observed) == draws
        assert stats.chisquare(observed).pvalue > 1e-3


@pytest.mark.unit
class TestValidatePath:
    """Test suite for validate_path()."""

    def test_valid(self):
        validate_path(TERNARY, LatticePath(kind=PathKind.DISPERSED, steps=(0, 2, -1, -1, 0)))

    def test_below_zero(self):
        with pytest.raises(InvalidInputError):
            validate_path(DYCK, LatticePath(kind=PathKind.MEANDER, steps=(-1, 1)))

    def test_foreign_step(self):
        with pytest.raises(InvalidInputError):
            validate_path(DYCK, LatticePath(kind=PathKind.MEANDER, steps=(2,)))

    def test_horizontal_above_zero(self):
        with pytest.raises(InvalidInputError):
            validate_path(TERNARY, LatticePath(kind=PathKind.DISPERSED, steps=(2, 0, -1, -1)))

    def test_excursion_must_return(self):
        with pytest.raises(InvalidInputError):
            validate_path(DYCK, LatticePath(kind=PathKind.EXCURSION, steps=(1, 1, -1)))


@pytest.mark.unit
class TestRandomSource:
    """Seed derivation and big-integer draws."""

    def test_derive_seed_reproducible(self):
        assert derive_seed(7, 3) == derive_seed(7, 3)
        assert derive_seed(7, 3) != derive_seed(7, 4)
        assert 0 <= derive_seed(7, 3) < 1 << 64

    def test_uniform_below_bounds(self):
        rng = np.random.Generator(np.random.PCG64(5))
        bound = 3**200
        values = [uniform_below(rng, bound) for _ in range(200)]

        assert all(0 <= v < bound for v in values)
        assert max(values) > bound // 2

    def test_uniform_below_one(self):
        rng = np.random.Generator(np.random.PCG64(5))
        assert uniform_below(rng, 1) == 0

    def test_small_bound_is_uniform(self):
        rng = np.random.Generator(np.random.PCG64(8))
        freq = Counter(uniform_below(rng, 3) for _ in range(30_000))
        assert all(9_000 < freq[v] < 11_000 for v in range(3))


@pytest.mark.unit
class TestEmpiricalMoments:
    """Test suite for empirical_moments()."""

    def test_zero_trials(self):
        with pytest.raises(ZeroTrials):
            empirical_moments(DYCK, PathKind.EXCURSION, 6, 1, 0, 1)

    def test_single_trial(self):
        result = empirical_moments(TERNARY, PathKind.EXCURSION, 3, 1, 1, 1)

        assert result.mean == 1.0
        assert result.variance == 0.0
        assert result.trials == 1

    def test_empty_family(self):
        with pytest.raises(EmptyFamily):
            empirical_moments(DYCK, PathKind.EXCURSION, 7, 1, 10, 1)

    def test_dyck_mean(self):
        exact_moments = exact.moments(DYCK, PathKind.EXCURSION, 6, 1)
        result = empirical_moments(DYCK, PathKind.EXCURSION, 6, 1, 10_000, 1)
        spread = 3 * (result.variance / result.trials) ** 0.5

        assert abs(result.mean - float(exact_moments.mean)) < spread

    def test_reproducible(self):
        first = empirical_moments(MOTZKIN, PathKind.MEANDER, 20, 2, 50, 9)
        second = empirical_moments(MOTZKIN, PathKind.MEANDER, 20, 2, 50, 9)

        assert first == second

    @pytest.mark.slow
    def test_ternary_meander_mean(self):
        exact_moments = exact.moments(TERNARY, PathKind.MEANDER, 200, 1)
        result = empirical_moments(TERNARY, PathKind.MEANDER, 200, 1, 10_000, 1)
        spread = 3 * (result.variance / result.trials) ** 0.5

        assert abs(result.mean - float(exact_moments.mean)) < spread


@pytest.mark.unit
class TestNormalityCheck:
    """Test suite for normality_check()."""

    def test_too_few_trials(self):
        with pytest.raises(TooFewTrials):
            normality_check(TERNARY, 1, 400, 10, 7)

    def test_unknown_centering(self):
        with pytest.raises(InvalidInputError):
            normality_check(TERNARY, 1, 50, 100, 7, centering="median")

    def test_statistic_range(self):
        statistic = normality_check(TERNARY, 1, 60, 200, 7)
        assert 0.0 <= statistic <= 1.0

    def test_reproducible(self):
        assert normality_check(TERNARY, 1, 60, 150, 3) == normality_check(TERNARY, 1, 60, 150, 3)

    def test_default_is_leading_without_jitter(self):
        default = normality_check(TERNARY, 1, 60, 150, 3)
        explicit = normality_check(TERNARY, 1, 60, 150, 3, centering="leading", jitter=False)

        assert default == explicit

    @pytest.mark.parametrize("step_set", [DYCK, MOTZKIN, TERNARY], ids=str)
    def test_standardizes_by_leading_terms(self, mocker, step_set):
        counts = np.arange(100, dtype=float)
        mocker.patch("ascents.sampler._ascent_samples", return_value=counts)
        kstest = mocker.patch(
            "ascents.sampler.stats.kstest", return_value=stats.kstest([0.0, 1.0], "norm")
        )

        normality_check(step_set, 2, 80, 100, 5)

        mu, sigma2 = meander_leading_terms(step_set, 2)
        expected = (counts - float(mu * 80)) / float(mp.sqrt(sigma2 * 80))
        np.testing.assert_allclose(kstest.call_args.args[0], expected)

    def test_full_centering_with_jitter(self):
        statistic = normality_check(TERNARY, 1, 60, 200, 7, centering="full", jitter=True)

        assert 0.0 <= statistic <= 1.0
        assert statistic != normality_check(TERNARY, 1, 60, 200, 7)

    def test_uses_kolmogorov_smirnov(self, mocker):
        kstest = mocker.patch(
            "ascents.sampler.stats.kstest", return_value=stats.kstest([0.0, 1.0], "norm")
        )

        normality_check(DYCK, 1, 20, 100, 1)

        kstest.assert_called_once()
        samples, distribution = kstest.call_args.args
        assert len(samples) == 100
        assert distribution == "norm"

    @pytest.mark.slow
    def test_ternary_meanders_are_normal(self):
        statistic = normality_check(TERNARY, 1, 400, 10_000, 7, centering="leading", jitter=False)
        assert statistic < 0.05
