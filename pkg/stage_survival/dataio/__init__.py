"""
Data input/output module initialization.
"""

from stage_survival.dataio.targets import load_targets, load_params
from stage_survival.dataio.reports import (
    FORMATS,
    render,
    write_report,
    read_json_report,
    read_csv_report,
    load_report,
    matrix_frame,
    curves_frame,
    to_plain,
)

__all__ = [
    "load_targets",
    "load_params",
    "FORMATS",
    "render",
    "write_report",
    "read_json_report",
    "read_csv_report",
    "load_report",
    "matrix_frame",
    "curves_frame",
    "to_plain",
]
