"""
Report Writer Module
Bit-stable CSV and JSON output for every result artifact.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Type, TypeVar, Union
import io
import json
import logging
import math
import sys

import numpy as np
import pandas as pd
from pydantic import BaseModel, TypeAdapter

from stage_survival.core.config import settings
from stage_survival.core.exceptions import ReportWriteError
from stage_survival.schemas import STATE_NAMES, SurvivalCurve, TransitionMatrix

logger = logging.getLogger(__name__)

FORMATS = ("csv", "json")

ModelT = TypeVar("ModelT", bound=BaseModel)


def _round(value: float, digits: int) -> Optional[float]:
    if not math.isfinite(value):
        return None
    return float(f"{value:.{digits}g}")


def to_plain(results: Any, digits: Optional[int] = None) -> Any:
    """
    Convert results to JSON-ready Python values with floats cut to `digits`
    significant digits and non-finite floats as None.
    """
    digits = settings.significant_digits if digits is None else digits
    if isinstance(results, BaseModel):
        return to_plain(results.model_dump(mode="python", by_alias=True), digits)
    if isinstance(results, pd.DataFrame):
        return to_plain(results.to_dict(orient="records"), digits)
    if isinstance(results, np.ndarray):
        return to_plain(results.tolist(), digits)
    if isinstance(results, dict):
        return {str(key): to_plain(value, digits) for key, value in results.items()}
    if isinstance(results, (list, tuple)):
        return [to_plain(value, digits) for value in results]
    if isinstance(results, (bool, np.bool_)):
        return bool(results)
    if isinstance(results, (int, np.integer)):
        return int(results)
    if isinstance(results, (float, np.floating)):
        return _round(float(results), digits)
    return results


def to_frame(results: Any) -> pd.DataFrame:
    """Tabular view: one row per record, nested members flattened with dots."""
    if isinstance(results, pd.DataFrame):
        return results
    if isinstance(results, (BaseModel, dict)):
        results = [results]
    records = [to_plain(item) for item in results]
    return pd.json_normalize(records, sep=".")


def render(results: Any, fmt: str = "json") -> str:
    """
    Serialize results as CSV or JSON text.

    JSON keys are sorted; CSV keeps record order and field order.
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {', '.join(FORMATS)}")
    digits = settings.significant_digits
    if fmt == "json":
        return json.dumps(to_plain(results, digits), sort_keys=True, indent=2) + "\n"
    buffer = io.StringIO()
    to_frame(results).to_csv(buffer, index=False, float_format=f"%.{digits}g", lineterminator="\n")
    return buffer.getvalue()


def write_report(results: Any, path: Union[str, Path, None] = None, fmt: str = "json") -> str:
    """
    Write results to a file, or to stdout when path is None or '-'.

    Args:
        results: Pydantic model, list of models, dict or DataFrame
        path: Destination file
        fmt: 'csv' or 'json'

    Returns:
        str: The text written

    Raises:
        ReportWriteError: If the destination cannot be written
    """
    text = render(results, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        return text
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise ReportWriteError(f"cannot write report to {path}: {exc}") from exc
    logger.info(f"Wrote {fmt} report to {path}")
    return text


def read_json_report(path: Union[str, Path]) -> Any:
    return json.loads(Path(path).read_text())


def read_csv_report(path: Union[str, Path]) -> List[dict]:
    """Records of a CSV report; blank cells come back as None."""
    frame = pd.read_csv(path)
    return frame.astype(object).where(frame.notna(), None).to_dict(orient="records")


def _nest(record: Dict[str, Any]) -> Dict[str, Any]:
    nested: Dict[str, Any] = {}
    for key, value in record.items():
        *parents, leaf = key.split(".")
        target = nested
        for parent in parents:
            target = target.setdefault(parent, {})
        target[leaf] = value
    return nested


def load_report(
    path: Union[str, Path],
    model: Type[ModelT],
    fmt: str = "json",
) -> Union[ModelT, List[ModelT]]:
    """
    Read a report written by write_report back into result models.

    A JSON object gives one model; a JSON array or a CSV file gives a list.
    Dotted CSV columns are nested again, so flat and nested models both
    load from CSV as long as no member is a list.

    Raises:
        pydantic.ValidationError: If the report does not describe `model`
    """
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {', '.join(FORMATS)}")
    if fmt == "csv":
        return TypeAdapter(List[model]).validate_python([_nest(r) for r in read_csv_report(path)])
    data = read_json_report(path)
    if isinstance(data, list):
        return TypeAdapter(List[model]).validate_python(data)
    return model.model_validate(data)


def matrix_frame(matrix: TransitionMatrix) -> pd.DataFrame:
    """Matrix as a table: header of state names, one row per source state."""
    return pd.DataFrame(matrix.values, columns=list(STATE_NAMES))


def curves_frame(curves: Sequence[SurvivalCurve]) -> pd.DataFrame:
    """Columns t, s1, s2, s3 for curves sharing one horizon."""
    frame = pd.DataFrame({"t": range(curves[0].horizon + 1)})
    for curve in curves:
        frame[f"s{curve.stage}"] = curve.values
    return frame
