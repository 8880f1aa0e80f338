"""
Calibration Commands Module
The `targets`, `fit` and `identify` commands.
"""

from pathlib import Path
from typing import List, Optional

import click

from stage_survival.cli.options import (
    emit,
    format_option,
    out_option,
    parse_float_list,
    resolve_target,
    seed_option,
    target_option,
)
from stage_survival.core.config import settings
from stage_survival.dataio import load_targets
from stage_survival.schemas import STAGE_NAMES
from stage_survival.services.calibration_service import calibration_service

site_option = click.option("--site", required=True, help="Site name as written in the table.")
restarts_option = click.option("--restarts", type=click.IntRange(min=1), default=None,
                               help="Simplex runs (default from settings).")
max_iter_option = click.option("--max-iter", type=click.IntRange(min=1), default=None,
                               help="Iteration cap per run.")
survival_only_option = click.option("--survival-only", is_flag=True,
                                    help="Match the three survival rates only.")
workers_option = click.option("--workers", type=click.IntRange(min=1), default=1, show_default=True,
                              help="Worker processes for restarts.")


@click.command("targets")
@target_option
@format_option("csv")
@out_option
def targets_command(target_path: Optional[Path], fmt: str, out: Optional[Path]):
    """
    List survival targets with shares and the localized/distant ratio.
    """
    table = load_targets(target_path or settings.default_targets_path)
    records = []
    for row in table:
        record = {"site": row.site}
        record.update({f"s_{name}": value for name, value in zip(STAGE_NAMES, row.survival)})
        shares = row.stage_shares or (None, None, None)
        record.update({f"p_{name}": value for name, value in zip(STAGE_NAMES, shares)})
        record["early_to_late_ratio"] = row.early_to_late_ratio
        records.append(record)
    emit(records, out, fmt)


@click.command("fit")
@target_option
@site_option
@click.option("--gamma", type=float, default=None, help="Hold treatment effectiveness fixed.")
@seed_option
@restarts_option
@max_iter_option
@click.option("--weights", callback=parse_float_list, default=None,
              help="Loss weights for s1,s2,s3,p1,p2.")
@survival_only_option
@workers_option
@out_option
def fit_command(
    target_path: Optional[Path],
    site: str,
    gamma: Optional[float],
    seed: Optional[int],
    restarts: Optional[int],
    max_iter: Optional[int],
    weights: Optional[List[float]],
    survival_only: bool,
    workers: int,
    out: Optional[Path],
):
    """
    Fit rates to one site's survival (and stage shares) and print the FitResult.
    """
    target = resolve_target(target_path, site)
    result = calibration_service.fit(
        target,
        gamma_fixed=gamma,
        seed=seed,
        restarts=restarts,
        max_iter=max_iter,
        weights=weights,
        survival_only=survival_only,
        workers=workers,
    )
    emit(result, out, "json")


@click.command("identify")
@target_option
@site_option
@click.option("--gamma-grid", callback=parse_float_list, default="0,0.25,0.5", show_default=True,
              help="Comma-separated fixed gamma values.")
@seed_option
@restarts_option
@max_iter_option
@survival_only_option
@workers_option
@format_option("csv")
@out_option
def identify_command(
    target_path: Optional[Path],
    site: str,
    gamma_grid: List[float],
    seed: Optional[int],
    restarts: Optional[int],
    max_iter: Optional[int],
    survival_only: bool,
    workers: int,
    fmt: str,
    out: Optional[Path],
):
    """
    Refit with gamma held at each grid value and report the losses side by side.
    """
    target = resolve_target(target_path, site)
    rows = calibration_service.identifiability_report(
        target,
        gamma_grid,
        seed=seed,
        restarts=restarts,
        max_iter=max_iter,
        survival_only=survival_only,
        workers=workers,
    )
    emit(rows, out, fmt)
