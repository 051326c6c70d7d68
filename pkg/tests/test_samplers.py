"""Initial-point samplers and the functional maximizer."""

import math

import numpy as np
import pytest

from npaboundary.config.settings import Settings
from npaboundary.core.bell import (
    bell_value,
    branch_condition,
    correlations_from_realization,
    criterion_one_residual,
    criterion_report,
    positivity_product,
    s_parameters,
)
from npaboundary.core.exceptions import SamplerExhaustedError
from npaboundary.core.models import SampleMode
from npaboundary.experiments.maximize import extremal_by_maximization, realization_from_parameters
from npaboundary.experiments.oracles import TSIRELSON_BOUND, QbFamily, chsh_functional, qb_functional
from npaboundary.experiments.samplers.base import BaseRealizationSampler, sample_random_point
from npaboundary.experiments.samplers.factory import SamplerFactory
from npaboundary.experiments.samplers.realizations import (
    Crit1Sampler,
    RealizationFilter,
    sample_realization,
)


class TestRandomPoint:

    def test_deterministic(self):
        first = sample_random_point(np.random.default_rng(42))
        second = sample_random_point(np.random.default_rng(42))
        assert first == second

    def test_statistics(self, rng):
        values = np.array([sample_random_point(rng).as_values() for _ in range(10_000)])
        assert np.all(np.abs(values) <= 1.0)
        np.testing.assert_allclose(values.mean(axis=0), 0.0, atol=0.05)


class TestFactory:

    def test_every_mode_supported(self):
        assert set(SamplerFactory.get_supported_modes()) == set(SampleMode)

    @pytest.mark.parametrize("mode", list(SampleMode))
    def test_create(self, mode):
        sampler = SamplerFactory.create(mode, Settings())
        assert sampler.mode is mode
        assert sampler.is_realization_sampler() == (mode is not SampleMode.RANDOM_POINT)

    def test_register(self):
        original = SamplerFactory._samplers[SampleMode.REALIZATION_CRIT1]

        class StrictCrit1(Crit1Sampler):
            pass

        try:
            SamplerFactory.register(SampleMode.REALIZATION_CRIT1, StrictCrit1)
            assert isinstance(SamplerFactory.create(SampleMode.REALIZATION_CRIT1), StrictCrit1)
        finally:
            SamplerFactory.register(SampleMode.REALIZATION_CRIT1, original)


class TestRealizationFilters:

    def test_base_ranges(self, rng):
        for _ in range(1000):
            r = sample_realization(rng)
            assert 0.0 < r.chi <= math.pi / 4
            assert all(-math.pi <= t < math.pi for t in r.theta_a + r.theta_b)

    def test_positive(self, rng):
        for _ in range(50):
            r = sample_realization(rng, RealizationFilter.POSITIVE)
            assert positivity_product(correlations_from_realization(r)) >= 0.0

    def test_crit1_invariant(self, rng):
        for _ in range(200):
            r = sample_realization(rng, RealizationFilter.CRIT1)
            assert branch_condition(r)
            p = correlations_from_realization(r)
            assert criterion_one_residual(p) <= 1e-10
            for x in (0, 1):
                for y in (0, 1):
                    assert s_parameters(p, x, y).s_plus == pytest.approx(r.sin2chi ** 2, abs=1e-10)

    def test_crit12_satisfies_criterion(self, rng):
        for _ in range(5):
            r = sample_realization(rng, RealizationFilter.CRIT12)
            report = criterion_report(r, 1e-8)
            assert report.satisfied
            assert report.max_residual <= 1e-8

    def test_exhausted_budget(self, rng):
        settings = Settings(rejection_budget=1)
        sampler = SamplerFactory.create(SampleMode.REALIZATION_CRIT1, settings)
        assert isinstance(sampler, BaseRealizationSampler)
        with pytest.raises(SamplerExhaustedError):
            for _ in range(200):
                sampler.draw(rng)


class TestMaximization:

    def test_parameter_map_covers_chi_range(self):
        assert realization_from_parameters([0, 0, 0, 0, math.pi / 2]).chi == pytest.approx(math.pi / 4)
        assert realization_from_parameters([0, 0, 0, 0, -math.pi / 2]).chi > 0.0

    def test_chsh_reaches_tsirelson(self, rng):
        f = chsh_functional()
        r = extremal_by_maximization(rng, f, restarts=8)
        assert bell_value(correlations_from_realization(r), f) >= TSIRELSON_BOUND - 1e-6

    def test_qb3_linear_branch(self, rng):
        f = qb_functional(QbFamily.QB3, 1.6)
        r = extremal_by_maximization(rng, f, restarts=8)
        assert bell_value(correlations_from_realization(r), f) == pytest.approx(3.6, abs=1e-6)

    def test_deterministic(self):
        first = extremal_by_maximization(np.random.default_rng(3), restarts=2)
        second = extremal_by_maximization(np.random.default_rng(3), restarts=2)
        assert first == second
