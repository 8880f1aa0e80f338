"""
Exact Commands Module
The `exact`, `sweep` and `compare` commands.
"""

from pathlib import Path
from typing import List, Optional

import click

from stage_survival.cli.options import (
    emit,
    format_option,
    out_option,
    params_option,
    parse_float_list,
    resolve_params,
)
from stage_survival.dataio import curves_frame, load_params
from stage_survival.schemas import STATE_NAMES
from stage_survival.services.exact_service import FIVE_YEARS, exact_service
from stage_survival.services.model_service import model_service


@click.command("exact")
@params_option
@click.option("--horizon", type=click.IntRange(min=0), default=FIVE_YEARS, show_default=True,
              help="Years after diagnosis.")
@format_option("json")
@out_option
def exact_command(params_path: Optional[Path], horizon: int, fmt: str, out: Optional[Path]):
    """
    Exact stage shares, survival curves and pooled survival.

    json: summary including the curves; csv: the curves only (t, s1, s2, s3).
    """
    params = resolve_params(params_path)
    matrix = model_service.build_transition_matrix(params)
    curves = exact_service.survival_curves(matrix, horizon)

    if fmt == "csv":
        emit(curves_frame(curves), out, "csv")
        return

    shares = exact_service.stage_distribution(matrix)
    emit({
        "params": params,
        "horizon": horizon,
        "stage_distribution": shares,
        "survival_at_horizon": {f"s{c.stage}": c.at(horizon) for c in curves},
        "pooled_survival": exact_service.pooled_survival(matrix, horizon),
        "lifetime_mortality": exact_service.lifetime_mortality(matrix),
        "mean_years_to_death": dict(zip(STATE_NAMES, exact_service.mean_time_to_death(matrix))),
        "mean_sojourn_years": dict(zip(STATE_NAMES, exact_service.mean_sojourn_times(matrix))),
        "curves": curves_frame(curves),
    }, out, "json")


@click.command("sweep")
@params_option
@click.option("--kappa1", "kappa1_values", callback=parse_float_list, default=None,
              help="Comma-separated stage-1 detection rates.")
@click.option("--kappa2", "kappa2_values", callback=parse_float_list, default=None,
              help="Comma-separated stage-2 detection rates.")
@click.option("--kappa3", "kappa3_values", callback=parse_float_list, default=None,
              help="Comma-separated stage-3 detection rates.")
@format_option("csv")
@out_option
def sweep_command(
    params_path: Optional[Path],
    kappa1_values: Optional[List[float]],
    kappa2_values: Optional[List[float]],
    kappa3_values: Optional[List[float]],
    fmt: str,
    out: Optional[Path],
):
    """
    Screening sweep: vary one detection rate, report shares, survival and mortality.
    """
    given = {
        rate: values
        for rate, values in (("kappa1", kappa1_values), ("kappa2", kappa2_values), ("kappa3", kappa3_values))
        if values is not None
    }
    if len(given) != 1:
        raise click.UsageError("give exactly one of --kappa1, --kappa2, --kappa3")
    (rate, values), = given.items()

    params = resolve_params(params_path)
    emit(exact_service.screening_sweep(params, values, rate=rate), out, fmt)


@click.command("compare")
@click.option("--before", "before_path", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Parameter file for the earlier period.")
@click.option("--after", "after_path", type=click.Path(dir_okay=False, path_type=Path), required=True,
              help="Parameter file for the later period.")
@click.option("--horizon", type=click.IntRange(min=0), default=FIVE_YEARS, show_default=True)
@out_option
def compare_command(before_path: Path, after_path: Path, horizon: int, out: Optional[Path]):
    """
    Compare survival against mortality between two parameter sets.
    """
    comparison = exact_service.compare_eras(load_params(before_path), load_params(after_path), horizon)
    emit(comparison, out, "json")
