"""
Schemas Module
Value types for the tumor progression model and its result artifacts.
"""

from dataclasses import dataclass, field
from enum import IntEnum
from typing import Dict, List, Optional, Tuple
import math

import numpy as np
import pandas as pd
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from stage_survival.core.exceptions import ParameterValidationError, SiteNotFoundError


# Slack allowed on the joint row constraints before a row counts as negative
ROW_TOLERANCE = 1e-12

STAGE_NAMES = ("localized", "regional", "distant")


# ==================== State Space ====================

class State(IntEnum):
    """
    Model states in the fixed order of the one-year transition table.
    """
    U1 = 0
    U2 = 1
    U3 = 2
    D1 = 3
    D2 = 4
    D3 = 5
    M = 6

    @property
    def is_undetected(self) -> bool:
        return self <= State.U3

    @property
    def is_detected(self) -> bool:
        return State.D1 <= self <= State.D3

    @property
    def stage(self) -> Optional[int]:
        """Stage 1-3 for U/D states, None for M."""
        if self is State.M:
            return None
        return int(self) % 3 + 1

    @classmethod
    def detected(cls, stage: int) -> "State":
        return cls(State.D1 + stage - 1)


STATE_NAMES = tuple(s.name for s in State)
N_STATES = len(State)


# ==================== Model Parameters ====================

class RateParams(BaseModel):
    """
    The seven one-year rates of the progression model.
    """
    model_config = ConfigDict(frozen=True, extra="forbid")

    lambda1: float = Field(..., ge=0.0, le=1.0, description="Stage 1 -> 2 progression")
    lambda2: float = Field(..., ge=0.0, le=1.0, description="Stage 2 -> 3 progression")
    kappa1: float = Field(..., ge=0.0, le=1.0, description="Detection at stage 1")
    kappa2: float = Field(..., ge=0.0, le=1.0, description="Detection at stage 2")
    kappa3: float = Field(..., ge=0.0, le=1.0, description="Detection at stage 3")
    mu: float = Field(..., ge=0.0, le=1.0, description="Mortality from D3")
    gamma: float = Field(0.0, ge=0.0, le=1.0, description="Treatment effectiveness")

    @field_validator("*")
    @classmethod
    def validate_finite(cls, v: float) -> float:
        if not math.isfinite(v):
            raise ValueError("must be a finite number")
        return v

    @model_validator(mode="after")
    def validate_rows(self) -> "RateParams":
        """
        Undetected rows leave by progression or detection; their stay
        probability must stay nonnegative.
        """
        for stage in (1, 2):
            lam = getattr(self, f"lambda{stage}")
            kap = getattr(self, f"kappa{stage}")
            if lam + kap > 1.0 + ROW_TOLERANCE:
                raise ParameterValidationError(
                    f"lambda{stage}+kappa{stage}",
                    f"lambda{stage} + kappa{stage} = {lam + kap:.6g} exceeds 1",
                )
        return self

    def replace(self, **changes: float) -> "RateParams":
        """Copy with some rates changed, re-validated."""
        return RateParams.model_validate({**self.model_dump(), **changes})


# ==================== Transition Matrix ====================

@dataclass(frozen=True)
class TransitionMatrix:
    """
    7x7 row-stochastic one-year transition probabilities.

    The wrapped array is copied and marked read-only.
    """
    values: np.ndarray
    params: Optional[RateParams] = field(default=None, compare=False)

    def __post_init__(self) -> None:
        array = np.array(self.values, dtype=float, copy=True)
        if array.shape != (N_STATES, N_STATES):
            raise ValueError(f"transition matrix must be {N_STATES}x{N_STATES}, got {array.shape}")
        array.setflags(write=False)
        object.__setattr__(self, "values", array)

    def __getitem__(self, key: Tuple[State, State]) -> float:
        src, dst = key
        return float(self.values[int(src), int(dst)])

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, TransitionMatrix):
            return NotImplemented
        return bool(np.array_equal(self.values, other.values))

    def __hash__(self) -> int:
        return hash(self.values.tobytes())

    def row(self, state: State) -> np.ndarray:
        return self.values[int(state)]

    def stay(self, state: State) -> float:
        return self[state, state]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.values, index=list(STATE_NAMES), columns=list(STATE_NAMES))


# ==================== Exact Results ====================

class StageDistribution(BaseModel):
    """
    Probabilities that the first diagnosis happens at each stage.
    """
    model_config = ConfigDict(frozen=True)

    p_localized: float = Field(..., ge=0.0, le=1.0)
    p_regional: float = Field(..., ge=0.0, le=1.0)
    p_distant: float = Field(..., ge=0.0, le=1.0)

    def as_tuple(self) -> Tuple[float, float, float]:
        return (self.p_localized, self.p_regional, self.p_distant)

    def share(self, stage: int) -> float:
        return self.as_tuple()[stage - 1]


class SurvivalCurve(BaseModel):
    """
    s(t) for t = 0..horizon years after diagnosis at one stage.
    """
    model_config = ConfigDict(frozen=True)

    stage: int = Field(..., ge=1, le=3)
    values: List[float]

    @property
    def horizon(self) -> int:
        return len(self.values) - 1

    def at(self, t: int) -> float:
        return self.values[t]


class SweepRow(BaseModel):
    """
    One detection-rate setting in a screening sweep.
    """
    rate: str = "kappa1"
    value: float
    p_localized: float
    p_regional: float
    p_distant: float
    s1: float
    s2: float
    s3: float
    pooled_survival: float
    lifetime_mortality: float


class EraSnapshot(BaseModel):
    """
    Headline statistics for one parameter set.
    """
    params: RateParams
    stage_distribution: StageDistribution
    survival: Tuple[float, float, float]
    pooled_survival: float
    lifetime_mortality: float
    mean_years_onset_to_death: Optional[float] = Field(
        None, description="None when death is not certain (some tumors never reach M)"
    )


class EraComparison(BaseModel):
    """
    Two parameter sets side by side, with after-minus-before deltas.
    """
    horizon: int
    before: EraSnapshot
    after: EraSnapshot

    @computed_field
    @property
    def pooled_survival_change(self) -> float:
        return self.after.pooled_survival - self.before.pooled_survival

    @computed_field
    @property
    def lifetime_mortality_change(self) -> float:
        return self.after.lifetime_mortality - self.before.lifetime_mortality

    @computed_field
    @property
    def mean_years_onset_to_death_change(self) -> Optional[float]:
        if self.after.mean_years_onset_to_death is None or self.before.mean_years_onset_to_death is None:
            return None
        return self.after.mean_years_onset_to_death - self.before.mean_years_onset_to_death


# ==================== Monte Carlo ====================

class Trajectory(BaseModel):
    """
    One simulated tumor, from U1 to absorption in M.

    death_time stays None when the tumor settles in a detected state that
    cannot reach M (for example with gamma = 1).
    """
    id: int = 0
    states: Optional[List[State]] = None
    diagnosis_stage: int = Field(..., ge=1, le=3)
    diagnosis_time: int = Field(..., ge=1)
    death_time: Optional[int] = Field(None, ge=2, description="None when the tumor can no longer reach M")
    cap_exceeded: bool = False

    @model_validator(mode="after")
    def validate_order(self) -> "Trajectory":
        if self.death_time is not None and self.diagnosis_time >= self.death_time:
            raise ValueError("diagnosis_time must precede death_time")
        return self


class CohortSummary(BaseModel):
    """
    Stage-at-diagnosis counts and stage-conditional survivors of a cohort.
    """
    model_config = ConfigDict(populate_by_name=True, extra="ignore")

    n: int = Field(..., ge=1)
    seed: int
    horizon: int = Field(5, ge=0, alias="five_year_horizon")
    stage_counts: Tuple[int, int, int]
    five_year_survivors: Tuple[int, int, int]
    cap_exceeded: int = 0

    @model_validator(mode="after")
    def validate_counts(self) -> "CohortSummary":
        if sum(self.stage_counts) != self.n:
            raise ValueError("stage_counts must sum to n")
        for count, survivors in zip(self.stage_counts, self.five_year_survivors):
            if not 0 <= survivors <= count:
                raise ValueError("survivors must lie between 0 and the stage count")
        return self

    @computed_field
    @property
    def stage_shares(self) -> Dict[str, float]:
        return {name: count / self.n for name, count in zip(STAGE_NAMES, self.stage_counts)}

    @computed_field
    @property
    def survival_by_stage(self) -> Dict[str, Optional[float]]:
        return {
            name: (survivors / count if count else None)
            for name, count, survivors in zip(STAGE_NAMES, self.stage_counts, self.five_year_survivors)
        }


# ==================== Calibration ====================

class SurvivalTarget(BaseModel):
    """
    Observed 5-year survival by stage for one site, with optional stage shares.
    """
    model_config = ConfigDict(frozen=True)

    site: str = Field(..., min_length=1)
    survival: Tuple[float, float, float]
    stage_shares: Optional[Tuple[float, float, float]] = None

    @field_validator("survival")
    @classmethod
    def validate_survival(cls, v: Tuple[float, float, float]) -> Tuple[float, float, float]:
        if any(not 0.0 <= s <= 1.0 for s in v):
            raise ValueError("survival rates must lie in [0, 1]")
        return v

    @field_validator("stage_shares")
    @classmethod
    def validate_shares(cls, v: Optional[Tuple[float, float, float]]) -> Optional[Tuple[float, float, float]]:
        if v is None:
            return v
        if any(p < 0.0 for p in v):
            raise ValueError("stage shares must be nonnegative")
        if abs(sum(v) - 1.0) > 1e-9:
            raise ValueError(f"stage shares must sum to 1, got {sum(v):.6g}")
        return v

    @property
    def has_shares(self) -> bool:
        return self.stage_shares is not None

    @property
    def early_to_late_ratio(self) -> Optional[float]:
        """Localized over distant survival; None when distant survival is 0."""
        if self.survival[2] == 0.0:
            return None
        return self.survival[0] / self.survival[2]


class SurvivalTable(BaseModel):
    """
    Survival targets keyed by site.
    """
    rows: List[SurvivalTarget] = Field(default_factory=list)

    @field_validator("rows")
    @classmethod
    def validate_unique_sites(cls, v: List[SurvivalTarget]) -> List[SurvivalTarget]:
        seen = set()
        for row in v:
            if row.site in seen:
                raise ValueError(f"duplicate site '{row.site}'")
            seen.add(row.site)
        return v

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(self.rows)

    @property
    def sites(self) -> List[str]:
        return [row.site for row in self.rows]

    def get(self, site: str) -> SurvivalTarget:
        for row in self.rows:
            if row.site == site:
                return row
        raise SiteNotFoundError(site)


class FitResult(BaseModel):
    """
    Best parameters found for a survival target.
    """
    site: str
    params: RateParams
    loss: float = Field(..., ge=0.0)
    max_abs_dev: float = Field(..., ge=0.0, description="Percentage points")
    iterations: int
    converged: bool
    gamma_fixed: Optional[float] = None
    survival_only: bool = False
    restarts: int
    seed: int
    fitted: Dict[str, float] = Field(default_factory=dict)


class IdentifiabilityRow(BaseModel):
    """
    Best fit with gamma held at one grid value.
    """
    gamma: float
    loss: float
    max_abs_dev: float
    converged: bool
    params: RateParams


# ==================== Counterfactuals ====================

class MixtureScenario(BaseModel):
    """
    Early-diagnosed tumors as a mix of progressive and non-progressive ones.
    """
    model_config = ConfigDict(frozen=True)

    overall_survival: float = Field(..., ge=0.0, le=1.0)
    nonprogressive_fraction: float = Field(..., ge=0.0, le=1.0)


class CounterfactualResult(BaseModel):
    """
    A counterfactual probability together with the assumptions behind it.
    """
    probability: float = Field(..., ge=0.0, le=1.0)
    assumptions: Dict[str, object] = Field(default_factory=dict)
