"""
Input Files Module
Reads survival tables (percentages, one row per site) and parameter files.
"""

from pathlib import Path
from typing import Any, Dict, Optional, Union
import logging

import pandas as pd
from pydantic import TypeAdapter, ValidationError

from stage_survival.core.exceptions import ParameterValidationError, TargetParseError
from stage_survival.schemas import RateParams, SurvivalTable, SurvivalTarget
from stage_survival.services.model_service import model_service

logger = logging.getLogger(__name__)

SURVIVAL_COLUMNS = ("s_localized", "s_regional", "s_distant")
SHARE_COLUMNS = ("p_localized", "p_regional", "p_distant")
TARGET_COLUMNS = ("site",) + SURVIVAL_COLUMNS + SHARE_COLUMNS

# Printed shares are rounded; totals within this many percentage points of 100 are renormalized
SHARE_SUM_TOLERANCE = 2.0

_JSON_OBJECT = TypeAdapter(Dict[str, Any])


def _percent(raw: str, row: int, column: str) -> float:
    try:
        value = float(raw)
    except ValueError:
        raise TargetParseError(f"'{raw}' is not a number", row=row, column=column) from None
    if not 0.0 <= value <= 100.0:
        raise TargetParseError(f"{value} is not a percentage in [0, 100]", row=row, column=column)
    return value


def _shares(record: dict, row: int) -> Optional[tuple]:
    cells = [record[column].strip() for column in SHARE_COLUMNS]
    if not any(cells):
        return None
    for column, cell in zip(SHARE_COLUMNS, cells):
        if not cell:
            raise TargetParseError("stage shares must be all present or all blank", row=row, column=column)
    shares = [_percent(cell, row, column) for column, cell in zip(SHARE_COLUMNS, cells)]
    total = sum(shares)
    if abs(total - 100.0) > SHARE_SUM_TOLERANCE:
        raise TargetParseError(f"stage shares sum to {total:g}%, not 100%", row=row)
    return tuple(share / total for share in shares)


def load_targets(path: Union[str, Path]) -> SurvivalTable:
    """
    Read a survival table CSV.

    Columns: site, s_localized, s_regional, s_distant, p_localized,
    p_regional, p_distant, all rates in percent. Share cells may be left
    blank for sites without a published stage distribution.

    Args:
        path: CSV file

    Returns:
        SurvivalTable: Rows with rates converted to fractions and shares renormalized to sum to 1

    Raises:
        TargetParseError: With the row/column of the first problem
    """
    try:
        frame = pd.read_csv(path, dtype=str, keep_default_na=False, skipinitialspace=True)
    except pd.errors.EmptyDataError:
        raise TargetParseError(f"{path} is empty; expected a header row") from None
    except (OSError, pd.errors.ParserError) as exc:
        raise TargetParseError(f"cannot read {path}: {exc}") from exc

    frame.columns = [str(c).strip() for c in frame.columns]
    for column in TARGET_COLUMNS:
        if column not in frame.columns:
            raise TargetParseError("missing column", column=column)

    rows = []
    seen = set()
    for row, record in enumerate(frame.to_dict(orient="records"), start=1):
        site = record["site"].strip()
        if not site:
            raise TargetParseError("site name is blank", row=row, column="site")
        if site in seen:
            raise TargetParseError(f"duplicate site '{site}'", row=row, column="site")
        seen.add(site)
        survival = tuple(
            _percent(record[column].strip(), row, column) / 100.0 for column in SURVIVAL_COLUMNS
        )
        try:
            rows.append(SurvivalTarget(site=site, survival=survival, stage_shares=_shares(record, row)))
        except ValidationError as exc:
            raise TargetParseError(exc.errors()[0]["msg"], row=row) from exc

    logger.info(f"Loaded {len(rows)} survival targets from {path}")
    return SurvivalTable(rows=rows)


def load_params(path: Union[str, Path]) -> RateParams:
    """
    Read a parameter JSON file.

    Accepts a flat object of the seven rates, or a fit result whose
    `params` member holds them.

    Raises:
        ParameterValidationError: If the file is unreadable or a rate is invalid
    """
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ParameterValidationError("params", f"cannot read {path}: {exc}") from exc
    try:
        data = _JSON_OBJECT.validate_json(text)
    except ValidationError as exc:
        raise ParameterValidationError(
            "params", f"{path} must hold a JSON object: {exc.errors()[0]['msg']}"
        ) from exc
    if isinstance(data.get("params"), dict):
        data = data["params"]
    return model_service.validate_params(data)
