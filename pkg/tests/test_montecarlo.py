"""
Monte Carlo Tests
Tests for trajectory and cohort simulation.
"""

import math

import pytest

from stage_survival.core.exceptions import DegeneracyError
from stage_survival.schemas import State
from stage_survival.services.exact_service import exact_service
from stage_survival.services.model_service import model_service
from stage_survival.services.montecarlo_service import montecarlo_service, trajectory_rng


def _breaches(summary, matrix) -> int:
    """
    Comparisons outside three standard errors of the exact values.

    Comparisons expecting fewer than 10 events either way are skipped; the
    normal approximation does not hold there.
    """
    shares = exact_service.stage_distribution(matrix).as_tuple()
    survival = exact_service.five_year_survival(matrix)
    breaches = 0
    for stage in range(3):
        p = shares[stage]
        if summary.n * min(p, 1 - p) < 10:
            continue
        if abs(summary.stage_counts[stage] / summary.n - p) > 3 * math.sqrt(p * (1 - p) / summary.n):
            breaches += 1
    for stage in range(3):
        count = summary.stage_counts[stage]
        s = survival[stage]
        if count * min(s, 1 - s) < 10:
            continue
        if abs(summary.five_year_survivors[stage] / count - s) > 3 * math.sqrt(s * (1 - s) / count):
            breaches += 1
    return breaches


class TestSimulateTrajectory:
    """Tests for MonteCarloService.simulate_trajectory."""

    def test_same_seed_same_trajectory(self, default_matrix):
        """A trajectory is a pure function of its stream."""
        first = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(7, 3), index=3)
        second = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(7, 3), index=3)
        assert first == second

    def test_structure(self, default_matrix):
        """Starts in U1, is diagnosed before dying and ends in M."""
        for index in range(200):
            trajectory = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(11, index))
            states = trajectory.states
            assert states[0] is State.U1
            assert states[-1] is State.M
            assert State.M not in states[:-1]
            assert states[trajectory.diagnosis_time] is State.detected(trajectory.diagnosis_stage)
            assert all(s.is_undetected for s in states[:trajectory.diagnosis_time])
            assert all(s.is_detected for s in states[trajectory.diagnosis_time:-1])
            assert trajectory.death_time == len(states) - 1
            assert 1 <= trajectory.diagnosis_time < trajectory.death_time

    def test_stages_never_go_backwards(self, default_matrix):
        """Stage along a trajectory is non-decreasing."""
        for index in range(200):
            trajectory = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(5, index))
            stages = [s.stage for s in trajectory.states[:-1]]
            assert stages == sorted(stages)

    def test_forced_stage1_detection(self, default_params):
        """kappa1 = 1 diagnoses every tumor at stage 1 after one year."""
        matrix = model_service.build_transition_matrix(default_params.replace(kappa1=1.0, lambda1=0.0))
        for index in range(20):
            trajectory = montecarlo_service.simulate_trajectory(matrix, trajectory_rng(1, index))
            assert trajectory.diagnosis_stage == 1
            assert trajectory.diagnosis_time == 1
            assert trajectory.death_time is None

    def test_cap_is_flagged_not_truncated(self, default_matrix):
        """Walks longer than max_steps still reach M."""
        trajectory = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(3, 0), max_steps=1)
        assert trajectory.cap_exceeded
        assert trajectory.states[-1] is State.M

    def test_degenerate_matrix_rejected(self, default_params):
        """A tumor that can never be diagnosed cannot be simulated."""
        matrix = model_service.build_transition_matrix(default_params.replace(kappa3=0.0))
        with pytest.raises(DegeneracyError):
            montecarlo_service.simulate_trajectory(matrix, trajectory_rng(0, 0))


class TestSimulateCohort:
    """Tests for MonteCarloService.simulate_cohort."""

    def test_deterministic(self, default_matrix):
        """Same matrix, size and seed give identical summaries."""
        first, _ = montecarlo_service.simulate_cohort(default_matrix, 2000, 42)
        second, _ = montecarlo_service.simulate_cohort(default_matrix, 2000, 42)
        assert first == second

    def test_independent_of_workers(self, default_matrix):
        """Splitting across processes does not change the result."""
        serial, serial_runs = montecarlo_service.simulate_cohort(
            default_matrix, 1000, 9, workers=1, keep_trajectories=True
        )
        parallel, parallel_runs = montecarlo_service.simulate_cohort(
            default_matrix, 1000, 9, workers=3, keep_trajectories=True
        )
        assert serial == parallel
        assert serial_runs == parallel_runs

    def test_kept_trajectories_match_single_runs(self, default_matrix):
        """Trajectory i of a cohort is the one simulated from stream (seed, i)."""
        _, runs = montecarlo_service.simulate_cohort(
            default_matrix, 10, 21, keep_trajectories=True, keep_states=True
        )
        assert [run.id for run in runs] == list(range(10))
        single = montecarlo_service.simulate_trajectory(default_matrix, trajectory_rng(21, 4), index=4)
        assert runs[4] == single

    def test_states_dropped_unless_requested(self, default_matrix):
        _, runs = montecarlo_service.simulate_cohort(default_matrix, 5, 1, keep_trajectories=True)
        assert all(run.states is None for run in runs)

    def test_single_tumor(self, default_matrix):
        """n = 1 counts exactly one trajectory."""
        summary, _ = montecarlo_service.simulate_cohort(default_matrix, 1, 2025)
        assert sum(summary.stage_counts) == 1
        assert set(summary.stage_shares.values()) <= {0.0, 1.0}
        assert sum(v is None for v in summary.survival_by_stage.values()) == 2

    def test_invalid_size(self, default_matrix):
        with pytest.raises(ValueError):
            montecarlo_service.simulate_cohort(default_matrix, 0, 1)

    def test_matches_published_rates(self, default_matrix):
        """Shares within 2 points of 38/33/29%, survival within 4 points of 95/72/17%.

        The exact regional rate is 70.4%, so 2 points would sit inside the noise.
        """
        summary, _ = montecarlo_service.simulate_cohort(default_matrix, 10_000, 2025)
        shares = list(summary.stage_shares.values())
        survival = list(summary.survival_by_stage.values())
        assert shares == pytest.approx([0.38, 0.33, 0.29], abs=0.02)
        assert survival == pytest.approx([0.95, 0.72, 0.17], abs=0.04)

    def test_agrees_with_exact_across_seeds(self, default_matrix):
        """Over 20 seeds at most two of the 120 comparisons leave three standard errors."""
        breaches = 0
        for seed in range(20):
            summary, _ = montecarlo_service.simulate_cohort(default_matrix, 10_000, seed)
            breaches += _breaches(summary, default_matrix)
        assert breaches <= 2

    def test_perfect_treatment_survivors(self, default_params):
        """With gamma = 1 every stage 1 and 2 tumor survives."""
        matrix = model_service.build_transition_matrix(default_params.replace(gamma=1.0))
        summary, _ = montecarlo_service.simulate_cohort(matrix, 500, 8)
        survival = summary.survival_by_stage
        assert survival["localized"] == 1.0
        assert survival["regional"] == 1.0

    def test_summary_serializes_horizon_alias(self, default_matrix):
        summary, _ = montecarlo_service.simulate_cohort(default_matrix, 10, 3, horizon=5)
        assert summary.model_dump(by_alias=True)["five_year_horizon"] == 5

    def test_agrees_with_exact_for_sampled_matrices(self, param_samples):
        """Agreement is not special to the default rates."""
        usable = [
            params for params in param_samples
            if exact_service.mean_time_to_death(model_service.build_transition_matrix(params))[State.U1] < 60
        ]
        assert len(usable) >= 10
        breaches = 0
        for seed, params in enumerate(usable[:10]):
            matrix = model_service.build_transition_matrix(params)
            summary, _ = montecarlo_service.simulate_cohort(matrix, 10_000, seed)
            breaches += _breaches(summary, matrix)
        assert breaches <= 2
