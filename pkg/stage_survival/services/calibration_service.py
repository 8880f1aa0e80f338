"""
Calibration Service Module
Fits rate parameters to observed stage-specific survival and stage shares.
"""

from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np
from scipy.optimize import minimize
from scipy.special import expit, logit

from stage_survival.core.config import settings
from stage_survival.core.exceptions import DegeneracyError, MissingStageSharesError, ParameterValidationError
from stage_survival.schemas import FitResult, IdentifiabilityRow, RateParams, SurvivalTarget
from stage_survival.services.exact_service import exact_service
from stage_survival.services.model_service import DEFAULT_PARAMS, model_service

logger = logging.getLogger(__name__)

MATCHED_QUANTITIES = ("s1", "s2", "s3", "p1", "p2")

# Transformed coordinates are clipped here so expit never reaches exactly 0 or 1
_Z_LIMIT = 30.0
_EPS = 1e-9


def _unpack(z: np.ndarray, gamma_fixed: Optional[float]) -> RateParams:
    """
    Map unconstrained coordinates to valid parameters.

    Layout: [total exit 1, progression share 1, total exit 2, progression
    share 2, kappa3, mu, (gamma)]. Each stage's lambda and kappa split a
    shared budget below 1, so the joint row constraints always hold.
    """
    u = expit(np.clip(z, -_Z_LIMIT, _Z_LIMIT))
    exit1, share1, exit2, share2, kappa3, mu = u[:6]
    gamma = gamma_fixed if gamma_fixed is not None else u[6]
    return RateParams(
        lambda1=float(exit1 * share1),
        kappa1=float(exit1 * (1.0 - share1)),
        lambda2=float(exit2 * share2),
        kappa2=float(exit2 * (1.0 - share2)),
        kappa3=float(kappa3),
        mu=float(mu),
        gamma=float(gamma),
    )


def _pack(params: RateParams, gamma_fixed: Optional[float]) -> np.ndarray:
    """Inverse of _unpack, with boundary values pulled just inside (0, 1)."""
    exit1 = params.lambda1 + params.kappa1
    exit2 = params.lambda2 + params.kappa2
    u = [
        exit1,
        params.lambda1 / exit1 if exit1 > 0 else 0.5,
        exit2,
        params.lambda2 / exit2 if exit2 > 0 else 0.5,
        params.kappa3,
        params.mu,
    ]
    if gamma_fixed is None:
        u.append(params.gamma)
    return logit(np.clip(np.asarray(u, dtype=float), _EPS, 1.0 - _EPS))


def _objective(z: np.ndarray, target: SurvivalTarget, weights: np.ndarray,
               gamma_fixed: Optional[float], survival_only: bool) -> float:
    return CalibrationService.loss(_unpack(z, gamma_fixed), target, weights, survival_only)


def _run_restart(args) -> Tuple[float, int, np.ndarray, int, bool]:
    """
    Worker: one Nelder-Mead run from a given start in transformed space.
    """
    index, z0, target, weights, gamma_fixed, survival_only, max_iter, xatol, fatol = args
    res = minimize(
        _objective,
        z0,
        args=(target, weights, gamma_fixed, survival_only),
        method="Nelder-Mead",
        options={"maxiter": max_iter, "xatol": xatol, "fatol": fatol, "adaptive": True},
    )
    logger.debug(f"Restart {index}: loss={res.fun:.3e} nit={res.nit} success={res.success}")
    return float(res.fun), index, np.asarray(res.x), int(res.nit), bool(res.success)


class CalibrationService:
    """
    Service class for fitting the model to survival tables.
    """

    @staticmethod
    def matched_quantities(params: RateParams, survival_only: bool = False) -> np.ndarray:
        """
        Model values of s1, s2, s3 and (unless survival_only) p1, p2.

        p3 is implied by p1 and p2 and never matched.

        Raises:
            DegeneracyError: If the stage split is undefined for params
        """
        matrix = model_service.build_transition_matrix(params)
        survival = exact_service.five_year_survival(matrix)
        if survival_only:
            return np.array(survival)
        shares = exact_service.stage_distribution(matrix)
        return np.array([*survival, shares.p_localized, shares.p_regional])

    @staticmethod
    def observed_quantities(target: SurvivalTarget, survival_only: bool = False) -> np.ndarray:
        """
        Raises:
            MissingStageSharesError: If shares are needed but the target has none
        """
        if survival_only:
            return np.array(target.survival)
        if target.stage_shares is None:
            raise MissingStageSharesError(target.site)
        return np.array([*target.survival, target.stage_shares[0], target.stage_shares[1]])

    @staticmethod
    def loss(
        params: RateParams,
        target: SurvivalTarget,
        weights: Optional[Sequence[float]] = None,
        survival_only: bool = False,
    ) -> float:
        """
        Weighted sum of squared deviations over the matched quantities.

        Degenerate parameter points score a large finite penalty so the
        simplex can move through them.

        Args:
            params: Candidate parameters
            target: Observed survival (and shares)
            weights: One weight per matched quantity, default all 1
            survival_only: Match s1..s3 only

        Returns:
            float: Loss, zero iff every matched quantity agrees
        """
        observed = CalibrationService.observed_quantities(target, survival_only)
        w = np.ones(observed.size) if weights is None else np.asarray(weights, dtype=float)[:observed.size]
        try:
            model = CalibrationService.matched_quantities(params, survival_only)
        except DegeneracyError:
            return settings.degeneracy_penalty
        return float(np.sum(w * (model - observed) ** 2))

    @staticmethod
    def max_abs_deviation(params: RateParams, target: SurvivalTarget, survival_only: bool = False) -> float:
        """Worst matched-quantity deviation, in percentage points."""
        observed = CalibrationService.observed_quantities(target, survival_only)
        model = CalibrationService.matched_quantities(params, survival_only)
        return float(100.0 * np.max(np.abs(model - observed)))

    @staticmethod
    def fit(
        target: SurvivalTarget,
        gamma_fixed: Optional[float] = None,
        seed: Optional[int] = None,
        restarts: Optional[int] = None,
        max_iter: Optional[int] = None,
        weights: Optional[Sequence[float]] = None,
        survival_only: bool = False,
        workers: int = 1,
    ) -> FitResult:
        """
        Multi-start Nelder-Mead fit over logit-transformed parameters.

        The first restart starts from the default parameters, the rest from
        points drawn with the seeded generator. The best run wins; ties go
        to the lowest restart index.

        Args:
            target: Observed survival table row
            gamma_fixed: Hold gamma at this value (6 free parameters)
            seed: Seed for the restart points
            restarts: Number of simplex runs
            max_iter: Iteration cap per run
            weights: Loss weights for s1, s2, s3, p1, p2
            survival_only: Ignore stage shares
            workers: Worker processes for restarts

        Returns:
            FitResult: Best parameters found; converged is False if the best run hit the cap
        """
        seed = settings.default_seed if seed is None else seed
        restarts = settings.fit_restarts if restarts is None else restarts
        max_iter = settings.fit_max_iter if max_iter is None else max_iter
        if restarts < 1:
            raise ValueError("budget must allow at least one restart")
        if gamma_fixed is not None and not 0.0 <= gamma_fixed <= 1.0:
            raise ParameterValidationError("gamma", f"fixed value {gamma_fixed} outside [0, 1]")
        # Fail fast on missing shares
        CalibrationService.observed_quantities(target, survival_only)

        w = np.ones(len(MATCHED_QUANTITIES)) if weights is None else np.asarray(weights, dtype=float)
        if w.size != len(MATCHED_QUANTITIES) or np.any(w < 0):
            raise ValueError("weights must be 5 nonnegative numbers (s1, s2, s3, p1, p2)")

        rng = np.random.default_rng(seed)
        start = DEFAULT_PARAMS if gamma_fixed is None else DEFAULT_PARAMS.replace(gamma=gamma_fixed)
        z_default = _pack(start, gamma_fixed)
        starts = [z_default] + [rng.uniform(-3.0, 3.0, size=z_default.size) for _ in range(restarts - 1)]

        tasks = [
            (i, z0, target, w, gamma_fixed, survival_only, max_iter, settings.fit_xatol, settings.fit_fatol)
            for i, z0 in enumerate(starts)
        ]
        if workers > 1 and len(tasks) > 1:
            with Pool(processes=min(workers, len(tasks))) as pool:
                runs = pool.map(_run_restart, tasks)
        else:
            runs = [_run_restart(task) for task in tasks]

        best_loss, best_index, best_z, best_nit, best_success = min(runs, key=lambda run: (run[0], run[1]))
        params = _unpack(best_z, gamma_fixed)
        fitted = CalibrationService.matched_quantities(params, survival_only)
        max_dev = CalibrationService.max_abs_deviation(params, target, survival_only)

        if not best_success:
            logger.warning(f"Best restart for {target.site} hit the iteration cap (loss={best_loss:.3e})")
        logger.info(
            f"Fitted {target.site} (gamma_fixed={gamma_fixed}): loss={best_loss:.3e}, "
            f"max deviation {max_dev:.3f}pp, best restart {best_index}"
        )

        return FitResult(
            site=target.site,
            params=params,
            loss=best_loss,
            max_abs_dev=max_dev,
            iterations=best_nit,
            converged=best_success,
            gamma_fixed=gamma_fixed,
            survival_only=survival_only,
            restarts=restarts,
            seed=seed,
            fitted=dict(zip(MATCHED_QUANTITIES, (float(x) for x in fitted))),
        )

    @staticmethod
    def identifiability_report(
        target: SurvivalTarget,
        gamma_grid: Sequence[float],
        seed: Optional[int] = None,
        restarts: Optional[int] = None,
        max_iter: Optional[int] = None,
        survival_only: bool = False,
        workers: int = 1,
    ) -> List[IdentifiabilityRow]:
        """
        Fit once per gamma value; near-equal losses across the grid mean the
        survival table cannot tell treatment effects apart.
        """
        rows = []
        for gamma in gamma_grid:
            result = CalibrationService.fit(
                target,
                gamma_fixed=gamma,
                seed=seed,
                restarts=restarts,
                max_iter=max_iter,
                survival_only=survival_only,
                workers=workers,
            )
            rows.append(IdentifiabilityRow(
                gamma=gamma,
                loss=result.loss,
                max_abs_dev=result.max_abs_dev,
                converged=result.converged,
                params=result.params,
            ))
        return rows


# Create a singleton instance
calibration_service = CalibrationService()
