"""
Services module initialization.
"""

from stage_survival.services.model_service import model_service, ModelService, DEFAULT_PARAMS
from stage_survival.services.exact_service import exact_service, ExactService
from stage_survival.services.montecarlo_service import montecarlo_service, MonteCarloService
from stage_survival.services.calibration_service import calibration_service, CalibrationService
from stage_survival.services.counterfactual_service import counterfactual_service, CounterfactualService

__all__ = [
    "model_service",
    "ModelService",
    "DEFAULT_PARAMS",
    "exact_service",
    "ExactService",
    "montecarlo_service",
    "MonteCarloService",
    "calibration_service",
    "CalibrationService",
    "counterfactual_service",
    "CounterfactualService",
]
