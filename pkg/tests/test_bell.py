"""Two-qubit correlations, S parameters and the extremality criterion."""

import math

import numpy as np
import pytest

from npaboundary.core.bell import (
    bell_value,
    branch_condition,
    correlations_from_realization,
    criterion_one_residual,
    criterion_report,
    guessing_probabilities,
    positivity_product,
    s_parameters,
    scaled_correlators,
    scaled_tlm_residual,
    tlm_gap,
    tlm_unscaled_satisfied,
)
from npaboundary.core.exceptions import (
    DiscriminantNegativeError,
    InvalidPointError,
    InvalidRealizationError,
    ScaleOutOfRangeError,
)
from npaboundary.core.models import (
    BellFunctional,
    CorrelationPoint,
    Level,
    Realization,
    ScaleSide,
)
from npaboundary.experiments.oracles import TSIRELSON_BOUND, chsh_functional
from npaboundary.experiments.samplers.base import sample_base_realization

from conftest import SQRT2_HALF

HALF_PI = math.pi / 2


def _uniform_realization(theta: float, chi: float) -> Realization:
    return Realization((theta, theta), (theta, theta), chi)


class TestModels:

    def test_realization_rejects_chi_outside_range(self):
        with pytest.raises(InvalidRealizationError):
            Realization((0.0, 0.0), (0.0, 0.0), 0.0)
        with pytest.raises(InvalidRealizationError):
            Realization((0.0, 0.0), (0.0, 0.0), 1.0)

    def test_realization_rejects_non_finite(self):
        with pytest.raises(InvalidRealizationError):
            Realization((float("nan"), 0.0), (0.0, 0.0), 0.3)

    def test_angles_normalized(self):
        r = Realization((math.pi, 3 * math.pi / 2), (0.0, -math.pi), 0.3)
        assert r.theta_a[0] == pytest.approx(-math.pi)
        assert r.theta_a[1] == pytest.approx(-HALF_PI)
        assert r.theta_b[1] == pytest.approx(-math.pi)

    def test_point_rejects_entry_outside_unit_interval(self):
        with pytest.raises(InvalidPointError):
            CorrelationPoint.from_values([0, 0, 0, 0, 1.5, 0, 0, 0])
        with pytest.raises(InvalidPointError):
            CorrelationPoint.from_values([0] * 7)

    def test_point_value_order(self):
        p = CorrelationPoint.from_values([0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8])
        assert p.a == (0.1, 0.2)
        assert p.b == (0.3, 0.4)
        assert p.c == ((0.5, 0.6), (0.7, 0.8))
        assert p.as_values() == (0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8)

    def test_functional_rejects_non_finite(self):
        with pytest.raises(ValueError):
            BellFunctional(alpha=(float("inf"), 0.0))

    @pytest.mark.parametrize("label,level", [
        ("1", Level.ONE), ("1+AB", Level.ONE_AB), ("1ab", Level.ONE_AB), ("4", Level.FOUR),
    ])
    def test_level_parse(self, label, level):
        assert Level.parse(label) is level

    def test_level_list_sorted(self):
        assert Level.parse_list("2,1+AB") == [Level.ONE_AB, Level.TWO]


class TestCorrelations:

    def test_chsh_realization(self, chsh_realization):
        p = correlations_from_realization(chsh_realization)
        np.testing.assert_allclose(p.c, [[SQRT2_HALF, SQRT2_HALF], [SQRT2_HALF, -SQRT2_HALF]], atol=1e-15)
        np.testing.assert_allclose(p.a + p.b, [0, 0, 0, 0], atol=1e-15)

    def test_maximal_entanglement_aligned(self):
        p = correlations_from_realization(_uniform_realization(HALF_PI, math.pi / 4))
        np.testing.assert_allclose(p.c, np.ones((2, 2)), atol=1e-15)
        np.testing.assert_allclose(p.a + p.b, [0, 0, 0, 0], atol=1e-15)

    def test_partial_entanglement_aligned(self):
        p = correlations_from_realization(_uniform_realization(HALF_PI, math.pi / 6))
        np.testing.assert_allclose(p.c, np.ones((2, 2)), atol=1e-15)
        np.testing.assert_allclose(p.a + p.b, [0.5] * 4, atol=1e-15)

    def test_range(self, rng):
        for _ in range(2000):
            values = correlations_from_realization(sample_base_realization(rng)).as_values()
            assert max(abs(v) for v in values) <= 1.0


class TestGuessingProbabilities:

    def test_values(self):
        d_b, _ = guessing_probabilities(Realization((0.0, 0.0), (0.0, 0.0), math.pi / 6))
        assert d_b[0] == pytest.approx(math.sqrt(3) / 2, abs=1e-15)
        d_b, _ = guessing_probabilities(Realization((HALF_PI, 0.0), (0.0, 0.0), math.pi / 8))
        assert d_b[0] == pytest.approx(1.0, abs=1e-15)

    def test_maximal_entanglement_gives_one(self, chsh_realization):
        d_b, d_a = guessing_probabilities(chsh_realization)
        np.testing.assert_allclose(d_b + d_a, [1.0] * 4, atol=1e-15)

    def test_range(self, rng):
        for _ in range(2000):
            r = sample_base_realization(rng)
            d_b, d_a = guessing_probabilities(r)
            for d in d_b + d_a:
                assert r.sin2chi - 1e-15 <= d <= 1.0 + 1e-15


class TestSParameters:

    def test_distinct_roots(self):
        p = correlations_from_realization(Realization((0.0, 0.0), (0.0, 0.0), math.pi / 6))
        branch = s_parameters(p, 0, 0)
        assert branch.j == pytest.approx(7 / 4, abs=1e-14)
        assert branch.k == pytest.approx(math.sqrt(3) / 2, abs=1e-14)
        assert branch.s_plus == pytest.approx(1.0, abs=1e-14)
        assert branch.s_minus == pytest.approx(0.75, abs=1e-14)

    def test_double_root(self):
        p = correlations_from_realization(_uniform_realization(HALF_PI, math.pi / 4))
        branch = s_parameters(p, 1, 1)
        assert branch.s_plus == pytest.approx(1.0, abs=1e-12)
        assert branch.s_minus == pytest.approx(1.0, abs=1e-12)

    def test_zero_point(self, zero_point):
        branch = s_parameters(zero_point, 0, 1)
        assert (branch.j, branch.k, branch.s_plus, branch.s_minus) == (1.0, 0.0, 1.0, 0.0)

    def test_inconsistent_point_raises(self):
        # outcome (-1, -1) on pair (0, 0) gets probability (1 + c - a - b)/4 < 0
        p = CorrelationPoint((0.9, 0.0), (0.9, 0.0), ((-0.9, 0.0), (0.0, 0.0)))
        with pytest.raises(DiscriminantNegativeError):
            s_parameters(p, 0, 0)

    def test_root_property(self, rng):
        """sin^2(2 chi) is always one of the two roots."""
        for _ in range(10_000):
            r = sample_base_realization(rng)
            p = correlations_from_realization(r)
            target = r.sin2chi ** 2
            for x in (0, 1):
                for y in (0, 1):
                    branch = s_parameters(p, x, y)
                    assert min(abs(branch.s_plus - target), abs(branch.s_minus - target)) <= 1e-10

    def test_vieta(self, rng):
        for _ in range(2000):
            p = correlations_from_realization(sample_base_realization(rng))
            branch = s_parameters(p, 1, 0)
            assert branch.s_plus >= branch.s_minus >= -1e-12
            assert branch.s_plus + branch.s_minus == pytest.approx(branch.j, abs=1e-10)
            assert branch.s_plus * branch.s_minus == pytest.approx(branch.k ** 2, abs=1e-10)


class TestPositivityAndCriterionOne:

    def test_zero_point(self, zero_point):
        assert positivity_product(zero_point) == 0.0
        assert criterion_one_residual(zero_point) == 0.0

    def test_chsh_point(self, chsh_point):
        assert positivity_product(chsh_point) == pytest.approx(0.0, abs=1e-15)
        assert criterion_one_residual(chsh_point) == pytest.approx(0.0, abs=1e-12)

    def test_aligned_partial_entanglement(self):
        # c = 1, a = b = 1/2: S+ = 3/4 on every pair, each factor vanishes
        p = correlations_from_realization(_uniform_realization(HALF_PI, math.pi / 6))
        assert s_parameters(p, 0, 0).s_plus == pytest.approx(0.75, abs=1e-7)
        assert positivity_product(p) == pytest.approx(0.0, abs=1e-12)

    def test_single_nonzero_correlator(self):
        h = math.sqrt(3) / 2
        p = CorrelationPoint((0.0, 0.0), (0.0, 0.0), ((h, 0.0), (0.0, 0.0)))
        assert criterion_one_residual(p) == pytest.approx(0.0, abs=1e-14)


class TestTlm:

    def test_chsh_point_is_on_boundary(self, chsh_point):
        assert scaled_tlm_residual(chsh_point, (1.0, 1.0), ScaleSide.BY_B) == pytest.approx(0.0, abs=1e-14)
        assert tlm_unscaled_satisfied(chsh_point)

    def test_zero_point(self, zero_point):
        assert scaled_tlm_residual(zero_point, (1.0, 1.0), ScaleSide.BY_A) == pytest.approx(2.0)
        assert tlm_unscaled_satisfied(zero_point)

    def test_pr_box(self, pr_box):
        assert scaled_tlm_residual(pr_box, (1.0, 1.0), ScaleSide.BY_B) == pytest.approx(2.0)
        assert not tlm_unscaled_satisfied(pr_box)

    def test_scale_out_of_range(self, chsh_point):
        with pytest.raises(ScaleOutOfRangeError):
            scaled_correlators(chsh_point, (0.5, 0.5), ScaleSide.BY_B)
        with pytest.raises(ScaleOutOfRangeError):
            scaled_correlators(chsh_point, (0.0, 1.0), ScaleSide.BY_A)

    def test_scale_side_indexing(self):
        p = CorrelationPoint((0.0, 0.0), (0.0, 0.0), ((0.2, 0.4), (0.3, 0.1)))
        by_b = scaled_correlators(p, (0.5, 1.0), ScaleSide.BY_B)
        by_a = scaled_correlators(p, (0.5, 1.0), ScaleSide.BY_A)
        np.testing.assert_allclose(by_b, [[0.4, 0.8], [0.3, 0.1]])
        np.testing.assert_allclose(by_a, [[0.4, 0.4], [0.6, 0.1]])

    def test_scaled_equals_unscaled_at_maximal_entanglement(self, rng):
        for _ in range(200):
            base = sample_base_realization(rng)
            r = Realization(base.theta_a, base.theta_b, math.pi / 4)
            p = correlations_from_realization(r)
            d_b, _ = guessing_probabilities(r)
            assert scaled_tlm_residual(p, d_b, ScaleSide.BY_B) == pytest.approx(abs(tlm_gap(p.c)), abs=1e-9)


class TestBellValue:

    def test_chsh(self, chsh_point, pr_box, zero_point):
        assert bell_value(chsh_point, chsh_functional()) == pytest.approx(TSIRELSON_BOUND, abs=1e-14)
        assert bell_value(pr_box, chsh_functional()) == 4.0
        assert bell_value(zero_point, BellFunctional.from_values([1, -2, 3, -4, 5, -6, 7, -8])) == 0.0

    def test_tsirelson_over_realizations(self, rng):
        f = chsh_functional()
        for _ in range(10_000):
            p = correlations_from_realization(sample_base_realization(rng))
            assert bell_value(p, f) <= TSIRELSON_BOUND + 1e-9


class TestBranchCondition:

    def test_examples(self, chsh_realization):
        assert branch_condition(chsh_realization)
        assert not branch_condition(Realization((0.0, 0.0), (0.0, 0.0), math.pi / 6))
        for chi in (0.1, math.pi / 8, math.pi / 5):
            assert branch_condition(_uniform_realization(HALF_PI, chi))

    def test_branch_selects_larger_root(self, rng):
        for _ in range(2000):
            r = sample_base_realization(rng)
            if not branch_condition(r):
                continue
            p = correlations_from_realization(r)
            for x in (0, 1):
                for y in (0, 1):
                    assert s_parameters(p, x, y).s_plus == pytest.approx(r.sin2chi ** 2, abs=1e-9)


class TestCriterionReport:

    def test_chsh_realization_satisfies_everything(self, chsh_realization):
        report = criterion_report(chsh_realization, 1e-9)
        assert report.eq11_satisfied
        assert report.eq8_satisfied
        assert report.tlm_b_satisfied
        assert report.tlm_a_satisfied
        assert report.satisfied
        assert report.branch_condition

    def test_aligned_realization(self):
        # c = 1 everywhere and D = 1: the scaled TLM relation holds with equality
        report = criterion_report(_uniform_realization(HALF_PI, math.pi / 8), 1e-9)
        assert report.eq11_satisfied
        assert report.tlm_scaled_residual_b == pytest.approx(0.0, abs=1e-12)
        assert report.tlm_scaled_residual_a == pytest.approx(0.0, abs=1e-12)
        np.testing.assert_allclose(report.s_plus, [[0.5, 0.5], [0.5, 0.5]], atol=1e-7)

    def test_distinct_branches_fail_criterion_one(self):
        r = Realization((0.0, HALF_PI), (0.0, HALF_PI), math.pi / 6)
        report = criterion_report(r, 1e-9)
        assert not report.branch_condition
        assert not report.eq11_satisfied
        assert not report.satisfied

    def test_residuals_nonnegative(self, rng):
        for _ in range(500):
            report = criterion_report(sample_base_realization(rng))
            assert report.eq11_residual >= 0.0
            assert report.tlm_scaled_residual_b >= 0.0
            assert report.tlm_scaled_residual_a >= 0.0
            assert report.satisfied == (report.eq11_satisfied and report.eq8_satisfied
                                        and report.tlm_b_satisfied and report.tlm_a_satisfied)
