"""
Test Configuration Module
Provides test fixtures and configuration for pytest.
"""

from typing import List

import numpy as np
import pytest
from click.testing import CliRunner

from stage_survival.schemas import RateParams, SurvivalTarget, TransitionMatrix
from stage_survival.services.model_service import DEFAULT_PARAMS, model_service


@pytest.fixture
def runner() -> CliRunner:
    """Click test runner for invoking commands in-process."""
    return CliRunner()


@pytest.fixture
def default_params() -> RateParams:
    return DEFAULT_PARAMS


@pytest.fixture
def default_matrix(default_params) -> TransitionMatrix:
    return model_service.build_transition_matrix(default_params)


@pytest.fixture
def colon_target() -> SurvivalTarget:
    return SurvivalTarget(**COLON_TARGET)


@pytest.fixture(scope="session")
def param_samples() -> List[RateParams]:
    """
    Deterministic sample of valid parameters covering the whole range.

    lambda and kappa of a stage split a shared budget below 1, so every
    draw satisfies the row constraints.
    """
    rng = np.random.default_rng(20250101)
    samples = []
    for _ in range(1000):
        exit1, share1, exit2, share2 = rng.uniform(0.01, 0.99, size=4)
        kappa3, mu, gamma = rng.uniform(0.01, 0.99, size=3)
        samples.append(RateParams(
            lambda1=exit1 * share1,
            kappa1=exit1 * (1.0 - share1),
            lambda2=exit2 * share2,
            kappa2=exit2 * (1.0 - share2),
            kappa3=kappa3,
            mu=mu,
            gamma=gamma,
        ))
    return samples


def iterate_to_absorption(matrix: TransitionMatrix, start: int = 0, steps: int = 8192) -> np.ndarray:
    """Distribution after many steps with the detected states made absorbing."""
    P = matrix.values.copy()
    for state in (3, 4, 5):
        P[state] = 0.0
        P[state, state] = 1.0
    return np.linalg.matrix_power(P, steps)[start]


# Sample test data
PUBLISHED_ROWS = {
    "U1": {"U1": 0.76, "U2": 0.15, "D1": 0.09},
    "U2": {"U2": 0.66, "U3": 0.16, "D2": 0.18},
    "U3": {"U3": 0.20, "D3": 0.80},
    "D1": {"D1": 0.85, "D2": 0.15},
    "D2": {"D2": 0.84, "D3": 0.16},
    "D3": {"D3": 0.70, "M": 0.30},
    "M": {"M": 1.00},
}

DEFAULT_SHARES = (0.375, 0.33088, 0.29412)

DEFAULT_SURVIVAL = (0.9481, 0.7041, 0.16807)

DEFAULT_POOLED = 0.6380

COLON_TARGET = {
    "site": "Colon and Rectum",
    "survival": (0.914, 0.740, 0.158),
    "stage_shares": (0.38, 0.38, 0.24),
}
