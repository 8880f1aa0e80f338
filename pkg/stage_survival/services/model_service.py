"""
Model Service Module
Parameter validation and construction of the one-year transition matrix.
"""

from typing import Any, Mapping
import logging

import numpy as np
from pydantic import ValidationError

from stage_survival.core.exceptions import ParameterValidationError
from stage_survival.schemas import RateParams, State, TransitionMatrix, N_STATES

logger = logging.getLogger(__name__)

# Rates read off the published one-year transition table
DEFAULT_PARAMS = RateParams(
    lambda1=0.15,
    lambda2=0.16,
    kappa1=0.09,
    kappa2=0.18,
    kappa3=0.80,
    mu=0.30,
    gamma=0.0,
)


class ModelService:
    """
    Service class for the progression model definition.
    """

    @staticmethod
    def validate_params(data: Mapping[str, Any]) -> RateParams:
        """
        Build RateParams from a mapping, reporting the offending field.

        Args:
            data: Mapping with keys lambda1, lambda2, kappa1, kappa2, kappa3, mu, gamma

        Returns:
            RateParams: Validated parameters

        Raises:
            ParameterValidationError: If a rate is missing, out of range or a row would go negative
        """
        try:
            return RateParams.model_validate(dict(data))
        except ValidationError as exc:
            logger.debug(f"Rejected parameters {dict(data)}: {exc}")
            error = exc.errors()[0]
            original = (error.get("ctx") or {}).get("error")
            if isinstance(original, ParameterValidationError):
                raise original from exc
            field = ".".join(str(loc) for loc in error["loc"]) or "params"
            raise ParameterValidationError(field, error["msg"]) from exc

    @staticmethod
    def build_transition_matrix(params: RateParams) -> TransitionMatrix:
        """
        Fill the 7x7 one-year matrix, using the rates directly as probabilities.

        Args:
            params: Validated rate parameters

        Returns:
            TransitionMatrix: Row-stochastic matrix in State order
        """
        p = params
        lam1_treated = p.lambda1 * (1.0 - p.gamma)
        lam2_treated = p.lambda2 * (1.0 - p.gamma)

        P = np.zeros((N_STATES, N_STATES))
        U1, U2, U3, D1, D2, D3, M = State

        P[U1, U2] = p.lambda1
        P[U1, D1] = p.kappa1
        P[U1, U1] = max(1.0 - p.lambda1 - p.kappa1, 0.0)

        P[U2, U3] = p.lambda2
        P[U2, D2] = p.kappa2
        P[U2, U2] = max(1.0 - p.lambda2 - p.kappa2, 0.0)

        P[U3, D3] = p.kappa3
        P[U3, U3] = 1.0 - p.kappa3

        P[D1, D2] = lam1_treated
        P[D1, D1] = 1.0 - lam1_treated

        P[D2, D3] = lam2_treated
        P[D2, D2] = 1.0 - lam2_treated

        P[D3, M] = p.mu
        P[D3, D3] = 1.0 - p.mu

        P[M, M] = 1.0

        return TransitionMatrix(P, params=params)

    @staticmethod
    def check_matrix(matrix: TransitionMatrix, atol: float = 1e-12) -> None:
        """
        Verify row-stochasticity, the absorbing M row and the allowed zero pattern.

        Raises:
            ValueError: Naming the first violated invariant
        """
        P = matrix.values
        if np.any(P < 0.0) or np.any(P > 1.0):
            raise ValueError("entries must lie in [0, 1]")
        sums = P.sum(axis=1)
        bad = np.flatnonzero(np.abs(sums - 1.0) > atol)
        if bad.size:
            raise ValueError(f"row {State(int(bad[0])).name} sums to {sums[bad[0]]!r}")
        outside = P[~ALLOWED_TRANSITIONS]
        if np.any(outside != 0.0):
            raise ValueError("nonzero probability on a transition the model does not allow")


# Transitions that may carry probability, in State order
ALLOWED_TRANSITIONS = np.zeros((N_STATES, N_STATES), dtype=bool)
for _src, _dsts in {
    State.U1: (State.U1, State.U2, State.D1),
    State.U2: (State.U2, State.U3, State.D2),
    State.U3: (State.U3, State.D3),
    State.D1: (State.D1, State.D2),
    State.D2: (State.D2, State.D3),
    State.D3: (State.D3, State.M),
    State.M: (State.M,),
}.items():
    ALLOWED_TRANSITIONS[_src, list(_dsts)] = True
ALLOWED_TRANSITIONS.setflags(write=False)


# Create a singleton instance
model_service = ModelService()
