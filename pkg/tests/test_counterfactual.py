"""
Counterfactual Tests
Tests for the mixture correction and the early-diagnosis alive probability.
"""

import numpy as np
import pytest
from pydantic import ValidationError

from stage_survival.core.exceptions import (
    InconsistentMixtureError,
    ParameterValidationError,
    UndefinedMixtureError,
)
from stage_survival.schemas import MixtureScenario
from stage_survival.services.counterfactual_service import counterfactual_service
from stage_survival.services.exact_service import exact_service
from stage_survival.services.model_service import model_service


def _scenario(s: float, f: float) -> MixtureScenario:
    return MixtureScenario(overall_survival=s, nonprogressive_fraction=f)


class TestProgressiveSurvival:
    """Tests for CounterfactualService.progressive_survival."""

    def test_half_nonprogressive(self):
        """91% overall with half non-progressive leaves 41 of 50 progressive survivors, exactly."""
        assert counterfactual_service.progressive_survival(_scenario(0.91, 0.50)) == 0.82

    def test_no_nonprogressive_mass(self):
        """With f = 0 nothing changes."""
        for s in (0.0, 0.3, 0.91, 1.0):
            assert counterfactual_service.progressive_survival(_scenario(s, 0.0)) == s

    def test_seventy_percent_nonprogressive(self):
        assert counterfactual_service.progressive_survival(_scenario(0.91, 0.70)) == 0.70

    def test_never_above_overall_survival(self):
        """The correction only lowers survival, and leaves it alone only when f = 0 or s = 1."""
        grid = [round(x, 2) for x in np.linspace(0.0, 1.0, 21)]
        for s in grid:
            for f in grid:
                if f >= 1.0 or s < f:
                    continue
                corrected = counterfactual_service.progressive_survival(_scenario(s, f))
                assert corrected <= s
                if f == 0.0 or s == 1.0:
                    assert corrected == s
                else:
                    assert corrected < s

    def test_decreasing_in_fraction(self):
        """More non-progressive tumors leave less survival to credit treatment with."""
        fractions = np.linspace(0.0, 0.9, 10)
        values = [counterfactual_service.progressive_survival(_scenario(0.91, f)) for f in fractions]
        assert all(later < earlier for earlier, later in zip(values, values[1:]))

    def test_survival_below_fraction(self):
        with pytest.raises(InconsistentMixtureError):
            counterfactual_service.progressive_survival(_scenario(0.40, 0.50))

    def test_all_nonprogressive(self):
        with pytest.raises(UndefinedMixtureError):
            counterfactual_service.progressive_survival(_scenario(1.0, 1.0))

    def test_scenario_range(self):
        """Rates outside [0, 1] never make a scenario."""
        with pytest.raises(ValidationError):
            _scenario(1.2, 0.5)

    def test_mixture_report(self):
        result = counterfactual_service.mixture_report(_scenario(0.91, 0.5))
        assert result.probability == pytest.approx(0.82)
        assert result.assumptions["kind"] == "mixture"
        assert result.assumptions["nonprogressive_fraction"] == 0.5


class TestCounterfactualAlive:
    """Tests for CounterfactualService.counterfactual_alive."""

    def test_no_treatment_uses_longer_horizon(self, default_params, default_matrix):
        """Found 10 years earlier and untreated: stage 1 survival over 15 years."""
        probability = counterfactual_service.counterfactual_alive(default_params, 0.0, 10, 5)
        expected = exact_service.survival_curve(default_matrix, 1, 15).at(15)
        assert probability == pytest.approx(expected, abs=1e-15)
        assert probability < exact_service.survival_curve(default_matrix, 1, 5).at(5)

    def test_perfect_treatment(self, default_params):
        """gamma = 1 keeps every stage 1 tumor alive."""
        for back, horizon in ((0, 0), (10, 5), (30, 20)):
            assert counterfactual_service.counterfactual_alive(default_params, 1.0, back, horizon) == 1.0

    def test_zero_horizons(self, default_params):
        assert counterfactual_service.counterfactual_alive(default_params, 0.3, 0, 0) == 1.0

    def test_increasing_in_gamma(self, default_params):
        values = [
            counterfactual_service.counterfactual_alive(default_params, g, 10, 5)
            for g in (0.0, 0.25, 0.5, 0.75, 1.0)
        ]
        assert values == sorted(values)

    def test_non_increasing_in_horizons(self, param_samples):
        """Looking further back or further ahead never raises the alive probability."""
        for params in param_samples:
            gamma_cf = params.gamma
            by_back = [counterfactual_service.counterfactual_alive(params, gamma_cf, back, 5) for back in (0, 5, 10)]
            by_horizon = [
                counterfactual_service.counterfactual_alive(params, gamma_cf, 10, horizon) for horizon in (0, 5, 10)
            ]
            assert all(later <= earlier for earlier, later in zip(by_back, by_back[1:]))
            assert all(later <= earlier for earlier, later in zip(by_horizon, by_horizon[1:]))

    def test_gamma_out_of_range(self, default_params):
        with pytest.raises(ParameterValidationError) as exc_info:
            counterfactual_service.counterfactual_alive(default_params, 1.5, 10, 5)
        assert exc_info.value.field == "gamma"

    def test_negative_years(self, default_params):
        with pytest.raises(ValueError):
            counterfactual_service.counterfactual_alive(default_params, 0.0, -1, 5)

    def test_gain_zero_at_factual_gamma(self, default_params):
        """No gain when the counterfactual treatment is the factual one."""
        assert counterfactual_service.counterfactual_gain(default_params, default_params.gamma, 10, 5) == 0.0

    def test_gain_positive_with_treatment(self, default_params):
        assert counterfactual_service.counterfactual_gain(default_params, 0.5, 10, 5) > 0.0

    def test_alive_report_assumptions(self, default_params):
        """The report names every input the probability depends on."""
        result = counterfactual_service.alive_report(default_params, 0.5, 10, 5)
        assumptions = result.assumptions
        assert assumptions["kind"] == "early_detection"
        assert assumptions["survival_horizon_years"] == 15
        assert assumptions["gamma_cf"] == 0.5
        assert assumptions["factual_gamma"] == 0.0
        assert assumptions["params"]["mu"] == pytest.approx(0.30)
        matrix = model_service.build_transition_matrix(default_params.replace(gamma=0.5))
        assert result.probability == pytest.approx(exact_service.survival_curve(matrix, 1, 15).at(15))
