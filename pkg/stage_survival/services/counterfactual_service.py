"""
Counterfactual Service Module
Mixture correction for non-progressive tumors and model-based "alive today"
probabilities under a hypothetical earlier diagnosis.
"""

from fractions import Fraction
import logging

from stage_survival.core.exceptions import InconsistentMixtureError, UndefinedMixtureError
from stage_survival.schemas import CounterfactualResult, MixtureScenario, RateParams
from stage_survival.services.exact_service import exact_service
from stage_survival.services.model_service import model_service

logger = logging.getLogger(__name__)


class CounterfactualService:
    """
    Service class for counterfactual survival questions.
    """

    @staticmethod
    def progressive_survival(scenario: MixtureScenario) -> float:
        """
        Survival among tumors that would have progressed untreated.

        All non-progressive tumors survive, so the progressive ones account
        for what is left: (s - f) / (1 - f). Rates are taken as the shortest
        decimals that print them, so 0.91 and 0.50 give exactly 0.82.

        Raises:
            UndefinedMixtureError: If every early-caught tumor is non-progressive
            InconsistentMixtureError: If overall survival is below the non-progressive fraction
        """
        s = scenario.overall_survival
        f = scenario.nonprogressive_fraction
        if f >= 1.0:
            raise UndefinedMixtureError("non-progressive fraction of 1 leaves no progressive tumors")
        if s < f:
            raise InconsistentMixtureError(
                f"overall survival {s} is below the non-progressive fraction {f}; "
                "survivors must include every non-progressive tumor"
            )
        s_dec, f_dec = Fraction(repr(s)), Fraction(repr(f))
        return float((s_dec - f_dec) / (1 - f_dec))

    @staticmethod
    def counterfactual_alive(
        params: RateParams,
        gamma_cf: float,
        back_years: int,
        alive_horizon: int,
    ) -> float:
        """
        Probability of being alive `alive_horizon` years after a late
        diagnosis, had the tumor instead been diagnosed at stage 1
        `back_years` earlier and treated with effectiveness gamma_cf.

        Raises:
            ParameterValidationError: If gamma_cf is outside [0, 1]
        """
        if back_years < 0 or alive_horizon < 0:
            raise ValueError("back_years and alive_horizon must be nonnegative")
        cf_params = model_service.validate_params({**params.model_dump(), "gamma": gamma_cf})
        matrix = model_service.build_transition_matrix(cf_params)
        total = back_years + alive_horizon
        return exact_service.survival_curve(matrix, 1, total).at(total)

    @staticmethod
    def counterfactual_gain(
        params: RateParams,
        gamma_cf: float,
        back_years: int,
        alive_horizon: int,
    ) -> float:
        """
        Alive probability under gamma_cf minus the same under the factual gamma.

        Zero when treatment is as (in)effective in the counterfactual as in fact.
        """
        factual = CounterfactualService.counterfactual_alive(params, params.gamma, back_years, alive_horizon)
        counterfactual = CounterfactualService.counterfactual_alive(params, gamma_cf, back_years, alive_horizon)
        return counterfactual - factual

    @staticmethod
    def alive_report(
        params: RateParams,
        gamma_cf: float,
        back_years: int,
        alive_horizon: int,
    ) -> CounterfactualResult:
        probability = CounterfactualService.counterfactual_alive(params, gamma_cf, back_years, alive_horizon)
        gain = CounterfactualService.counterfactual_gain(params, gamma_cf, back_years, alive_horizon)
        logger.info(f"Counterfactual alive probability {probability:.4f} (gain {gain:+.4f})")
        return CounterfactualResult(
            probability=probability,
            assumptions={
                "kind": "early_detection",
                "gamma_cf": gamma_cf,
                "factual_gamma": params.gamma,
                "back_years": back_years,
                "alive_horizon": alive_horizon,
                "survival_horizon_years": back_years + alive_horizon,
                "diagnosis_stage": 1,
                "gain_over_factual": gain,
                "params": params.model_dump(),
            },
        )

    @staticmethod
    def mixture_report(scenario: MixtureScenario) -> CounterfactualResult:
        return CounterfactualResult(
            probability=CounterfactualService.progressive_survival(scenario),
            assumptions={
                "kind": "mixture",
                "overall_survival": scenario.overall_survival,
                "nonprogressive_fraction": scenario.nonprogressive_fraction,
            },
        )


# Create a singleton instance
counterfactual_service = CounterfactualService()
