"""
Exact Service Module
Deterministic stage-at-diagnosis split, survival curves and absorption
quantities of the progression chain.
"""

from typing import List, Sequence, Tuple
import logging
import math

import numpy as np
from scipy.linalg import solve

from stage_survival.core.exceptions import DegeneracyError, NumericalFailure
from stage_survival.schemas import (
    EraComparison,
    EraSnapshot,
    RateParams,
    StageDistribution,
    State,
    SurvivalCurve,
    SweepRow,
    TransitionMatrix,
)
from stage_survival.services.model_service import model_service

logger = logging.getLogger(__name__)

FIVE_YEARS = 5
SWEEPABLE_RATES = ("kappa1", "kappa2", "kappa3")


class ExactService:
    """
    Closed-form and matrix-product computations on a transition matrix.
    """

    @staticmethod
    def stage_distribution(matrix: TransitionMatrix) -> StageDistribution:
        """
        First-passage split of a U1 tumor over D1, D2 and D3.

        Only states the tumor can actually reach need a positive exit; a
        reachable undetected state with no exit traps mass undiagnosed.

        Raises:
            DegeneracyError: If a reachable undetected state cannot be left
        """
        lam1 = matrix[State.U1, State.U2]
        kap1 = matrix[State.U1, State.D1]
        lam2 = matrix[State.U2, State.U3]
        kap2 = matrix[State.U2, State.D2]
        kap3 = matrix[State.U3, State.D3]

        if lam1 + kap1 <= 0.0:
            raise DegeneracyError(State.U1.name)
        p1 = kap1 / (kap1 + lam1)
        reach2 = lam1 / (kap1 + lam1)

        if reach2 > 0.0:
            if lam2 + kap2 <= 0.0:
                raise DegeneracyError(State.U2.name)
            p2 = reach2 * kap2 / (kap2 + lam2)
            if reach2 * lam2 > 0.0 and kap3 <= 0.0:
                raise DegeneracyError(State.U3.name)
        else:
            p2 = 0.0

        p3 = max(1.0 - p1 - p2, 0.0)
        return StageDistribution(p_localized=p1, p_regional=p2, p_distant=p3)

    @staticmethod
    def survival_curve(matrix: TransitionMatrix, stage: int, horizon: int) -> SurvivalCurve:
        """
        s(t) = 1 - P^t[D_stage, M] for t = 0..horizon.

        Diagnosis is at t=0; a tumor dead within five years is in M at t=5.
        """
        if horizon < 0:
            raise ValueError("horizon must be nonnegative")
        if stage not in (1, 2, 3):
            raise ValueError("stage must be 1, 2 or 3")

        P = matrix.values
        v = np.zeros(P.shape[0])
        v[State.detected(stage)] = 1.0
        values = [1.0]
        for _ in range(horizon):
            v = v @ P
            values.append(min(max(1.0 - v[State.M], 0.0), 1.0))
        return SurvivalCurve(stage=stage, values=values)

    @staticmethod
    def survival_curves(matrix: TransitionMatrix, horizon: int) -> List[SurvivalCurve]:
        return [ExactService.survival_curve(matrix, stage, horizon) for stage in (1, 2, 3)]

    @staticmethod
    def five_year_survival(matrix: TransitionMatrix) -> Tuple[float, float, float]:
        """Stage-conditional survival at five years, stages 1-3."""
        s1, s2, s3 = (
            ExactService.survival_curve(matrix, stage, FIVE_YEARS).at(FIVE_YEARS)
            for stage in (1, 2, 3)
        )
        return (s1, s2, s3)

    @staticmethod
    def pooled_survival(matrix: TransitionMatrix, horizon: int = FIVE_YEARS) -> float:
        """
        Survival at the horizon over all diagnosed tumors, weighted by stage share.

        Raises:
            DegeneracyError: Propagated from stage_distribution
        """
        shares = ExactService.stage_distribution(matrix)
        return sum(
            shares.share(stage) * ExactService.survival_curve(matrix, stage, horizon).at(horizon)
            for stage in (1, 2, 3)
        )

    @staticmethod
    def absorption_probabilities(matrix: TransitionMatrix) -> np.ndarray:
        """
        Probability of ever reaching M from each state.

        States with no path to M get 0; the rest solve (I - Q) h = P[:, M]
        restricted to the transient states that can reach M.
        """
        P = matrix.values
        n = P.shape[0]
        target = int(State.M)

        reaches = np.zeros(n, dtype=bool)
        reaches[target] = True
        frontier = [target]
        while frontier:
            dst = frontier.pop()
            for src in np.flatnonzero(P[:, dst] > 0.0):
                if not reaches[src]:
                    reaches[src] = True
                    frontier.append(int(src))

        origin = np.flatnonzero(reaches)
        origin = origin[origin != target]
        h = np.zeros(n)
        h[target] = 1.0
        if origin.size:
            A = np.eye(origin.size) - P[np.ix_(origin, origin)]
            b = P[origin, target]
            try:
                h[origin] = solve(A, b)
            except np.linalg.LinAlgError as exc:
                raise NumericalFailure(f"absorption system is singular: {exc}") from exc
        return np.clip(h, 0.0, 1.0)

    @staticmethod
    def lifetime_mortality(matrix: TransitionMatrix) -> float:
        """Probability that a U1 tumor eventually causes death."""
        return float(ExactService.absorption_probabilities(matrix)[State.U1])

    @staticmethod
    def mean_time_to_death(matrix: TransitionMatrix) -> np.ndarray:
        """
        Expected years until M from each state; inf where death is not certain.
        """
        P = matrix.values
        n = P.shape[0]
        target = int(State.M)
        certain = np.isclose(ExactService.absorption_probabilities(matrix), 1.0, rtol=0.0, atol=1e-12)

        times = np.full(n, np.inf)
        times[target] = 0.0
        origin = np.flatnonzero(certain)
        origin = origin[origin != target]
        if origin.size:
            A = np.eye(origin.size) - P[np.ix_(origin, origin)]
            try:
                times[origin] = solve(A, np.ones(origin.size))
            except np.linalg.LinAlgError as exc:
                raise NumericalFailure(f"first-passage system is singular: {exc}") from exc
        return times

    @staticmethod
    def mean_sojourn_times(matrix: TransitionMatrix) -> np.ndarray:
        """Expected consecutive years spent in each state per visit."""
        stay = np.diag(matrix.values)
        with np.errstate(divide="ignore"):
            return np.where(stay < 1.0, 1.0 / (1.0 - stay), np.inf)

    @staticmethod
    def screening_sweep(
        params: RateParams,
        values: Sequence[float],
        rate: str = "kappa1",
    ) -> List[SweepRow]:
        """
        Recompute headline statistics for each setting of one detection rate.

        Args:
            params: Baseline parameters
            values: Detection rates to try, in output order
            rate: Which detection rate to vary (kappa1, kappa2 or kappa3)

        Returns:
            List[SweepRow]: One row per value

        Raises:
            ParameterValidationError: If a value breaks the parameter constraints
        """
        if rate not in SWEEPABLE_RATES:
            raise ValueError(f"rate must be one of {', '.join(SWEEPABLE_RATES)}")

        rows = []
        for value in values:
            swept = model_service.validate_params({**params.model_dump(), rate: value})
            matrix = model_service.build_transition_matrix(swept)
            shares = ExactService.stage_distribution(matrix)
            s1, s2, s3 = ExactService.five_year_survival(matrix)
            rows.append(SweepRow(
                rate=rate,
                value=value,
                p_localized=shares.p_localized,
                p_regional=shares.p_regional,
                p_distant=shares.p_distant,
                s1=s1,
                s2=s2,
                s3=s3,
                pooled_survival=shares.p_localized * s1 + shares.p_regional * s2 + shares.p_distant * s3,
                lifetime_mortality=ExactService.lifetime_mortality(matrix),
            ))
        logger.info(f"Screening sweep over {rate}: {len(rows)} rows")
        return rows

    @staticmethod
    def snapshot(params: RateParams, horizon: int = FIVE_YEARS) -> EraSnapshot:
        matrix = model_service.build_transition_matrix(params)
        survival = tuple(
            ExactService.survival_curve(matrix, stage, horizon).at(horizon) for stage in (1, 2, 3)
        )
        onset_to_death = float(ExactService.mean_time_to_death(matrix)[State.U1])
        return EraSnapshot(
            params=params,
            stage_distribution=ExactService.stage_distribution(matrix),
            survival=survival,
            pooled_survival=ExactService.pooled_survival(matrix, horizon),
            lifetime_mortality=ExactService.lifetime_mortality(matrix),
            mean_years_onset_to_death=onset_to_death if math.isfinite(onset_to_death) else None,
        )

    @staticmethod
    def compare_eras(before: RateParams, after: RateParams, horizon: int = FIVE_YEARS) -> EraComparison:
        """
        Contrast survival with mortality between two parameter sets.

        More or earlier detection can raise pooled survival while lifetime
        mortality and time from onset to death stay where they were.
        """
        return EraComparison(
            horizon=horizon,
            before=ExactService.snapshot(before, horizon),
            after=ExactService.snapshot(after, horizon),
        )


# Create a singleton instance
exact_service = ExactService()
