"""
Counterfactual Commands Module
The `counterfactual` command.
"""

from pathlib import Path
from typing import Optional, Tuple

import click

from stage_survival.cli.options import emit, out_option, params_option, resolve_params
from stage_survival.schemas import MixtureScenario
from stage_survival.services.counterfactual_service import counterfactual_service


@click.command("counterfactual")
@params_option
@click.option("--gamma-cf", type=float, default=None, help="Treatment effectiveness in the counterfactual.")
@click.option("--back", "back_years", type=int, default=10, show_default=True,
              help="Years earlier the tumor would have been found.")
@click.option("--horizon", "alive_horizon", type=int, default=5, show_default=True,
              help="Years after the actual diagnosis.")
@click.option("--mixture", type=(float, float), default=None, metavar="S F",
              help="Overall survival S and non-progressive fraction F.")
@out_option
def counterfactual_command(
    params_path: Optional[Path],
    gamma_cf: Optional[float],
    back_years: int,
    alive_horizon: int,
    mixture: Optional[Tuple[float, float]],
    out: Optional[Path],
):
    """
    Survival of progressive tumors (--mixture) or the alive probability had
    the tumor been caught at stage 1 (--gamma-cf).
    """
    if (mixture is None) == (gamma_cf is None):
        raise click.UsageError("give exactly one of --mixture or --gamma-cf")

    if mixture is not None:
        scenario = MixtureScenario(overall_survival=mixture[0], nonprogressive_fraction=mixture[1])
        emit(counterfactual_service.mixture_report(scenario), out, "json")
        return

    params = resolve_params(params_path)
    emit(counterfactual_service.alive_report(params, gamma_cf, back_years, alive_horizon), out, "json")
