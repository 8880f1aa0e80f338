"""
Model Commands Module
The `matrix` command.
"""

from pathlib import Path
from typing import Optional

import click

from stage_survival.cli.options import emit, format_option, out_option, params_option, resolve_params
from stage_survival.dataio import matrix_frame
from stage_survival.schemas import STATE_NAMES
from stage_survival.services.model_service import model_service


@click.command("matrix")
@params_option
@format_option("table", extra=("table",))
@out_option
def matrix_command(params_path: Optional[Path], fmt: str, out: Optional[Path]):
    """
    Print the one-year transition matrix.

    The table format shows two decimals like the published table; csv and
    json carry 15 significant digits.
    """
    params = resolve_params(params_path)
    matrix = model_service.build_transition_matrix(params)
    model_service.check_matrix(matrix)

    if fmt == "table":
        if out is not None:
            emit(matrix_frame(matrix), out, "csv")
            return
        frame = matrix.to_frame()
        click.echo(frame.to_string(float_format=lambda x: f"{x:.2f}"))
        return

    if fmt == "json":
        emit({"states": list(STATE_NAMES), "matrix": matrix.values, "params": params}, out, "json")
    else:
        emit(matrix_frame(matrix), out, "csv")
