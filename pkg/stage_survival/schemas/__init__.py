"""
Schemas module initialization.
"""

from stage_survival.schemas.schemas import (
    ROW_TOLERANCE,
    STAGE_NAMES,
    STATE_NAMES,
    N_STATES,
    State,
    RateParams,
    TransitionMatrix,
    StageDistribution,
    SurvivalCurve,
    SweepRow,
    EraSnapshot,
    EraComparison,
    Trajectory,
    CohortSummary,
    SurvivalTarget,
    SurvivalTable,
    FitResult,
    IdentifiabilityRow,
    MixtureScenario,
    CounterfactualResult,
)

__all__ = [
    "ROW_TOLERANCE",
    "STAGE_NAMES",
    "STATE_NAMES",
    "N_STATES",
    "State",
    "RateParams",
    "TransitionMatrix",
    "StageDistribution",
    "SurvivalCurve",
    "SweepRow",
    "EraSnapshot",
    "EraComparison",
    "Trajectory",
    "CohortSummary",
    "SurvivalTarget",
    "SurvivalTable",
    "FitResult",
    "IdentifiabilityRow",
    "MixtureScenario",
    "CounterfactualResult",
]
