"""
Core module initialization.
"""

from stage_survival.core.config import settings, get_settings
from stage_survival.core.exceptions import (
    StageSurvivalError,
    ParameterValidationError,
    DegeneracyError,
    InconsistentMixtureError,
    UndefinedMixtureError,
    TargetParseError,
    MissingStageSharesError,
    SiteNotFoundError,
    ReportWriteError,
    NumericalFailure,
)

__all__ = [
    "settings",
    "get_settings",
    "StageSurvivalError",
    "ParameterValidationError",
    "DegeneracyError",
    "InconsistentMixtureError",
    "UndefinedMixtureError",
    "TargetParseError",
    "MissingStageSharesError",
    "SiteNotFoundError",
    "ReportWriteError",
    "NumericalFailure",
]
