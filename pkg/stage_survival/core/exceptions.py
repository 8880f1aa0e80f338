"""
Exceptions Module
Domain errors and the exit codes the command line maps them to.
"""

from typing import Optional


EXIT_INPUT_ERROR = 2
EXIT_NUMERICAL_FAILURE = 3


class StageSurvivalError(Exception):
    """
    Base class for all errors raised by the package.
    """
    exit_code: int = EXIT_INPUT_ERROR


class ParameterValidationError(StageSurvivalError, ValueError):
    """
    Rate parameters out of range, or a transition row would go negative.

    Attributes:
        field: Offending parameter name or constraint (e.g. 'lambda1+kappa1')
    """

    def __init__(self, field: str, message: str):
        self.field = field
        super().__init__(f"{field}: {message}")


class DegeneracyError(StageSurvivalError):
    """
    A state that must be left has zero exit probability.

    Attributes:
        state: Name of the trapped state
    """

    def __init__(self, state: str, message: Optional[str] = None):
        self.state = state
        super().__init__(message or f"state {state} has no exit; tumors there are never diagnosed")


class InconsistentMixtureError(StageSurvivalError, ValueError):
    """Overall survival below the non-progressive fraction."""


class UndefinedMixtureError(StageSurvivalError, ValueError):
    """Non-progressive fraction of 1 leaves no progressive tumors."""


class TargetParseError(StageSurvivalError, ValueError):
    """
    A survival table file could not be parsed.

    Attributes:
        row: 1-based data row (None for header problems)
        column: Column name (None for row-level problems)
    """

    def __init__(self, message: str, row: Optional[int] = None, column: Optional[str] = None):
        self.row = row
        self.column = column
        location = []
        if row is not None:
            location.append(f"row {row}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class MissingStageSharesError(StageSurvivalError, ValueError):
    """Target has no stage shares and share matching was requested."""

    def __init__(self, site: str):
        self.site = site
        super().__init__(f"stage shares missing for site '{site}'; fit on survival only instead")


class SiteNotFoundError(StageSurvivalError, LookupError):
    """Requested site is absent from the survival table."""

    def __init__(self, site: str):
        self.site = site
        super().__init__(f"site not found: {site}")


class ReportWriteError(StageSurvivalError, OSError):
    """Report destination could not be written."""


class NumericalFailure(StageSurvivalError):
    """Internal numerical failure (singular system, non-finite result)."""
    exit_code = EXIT_NUMERICAL_FAILURE
