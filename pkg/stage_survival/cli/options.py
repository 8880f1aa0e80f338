"""
CLI Options Module
Shared options and loaders used by several commands.
"""

from pathlib import Path
from typing import List, Optional, Tuple

import click

from stage_survival.core.config import settings
from stage_survival.dataio import FORMATS, load_params, load_targets, write_report
from stage_survival.schemas import RateParams, SurvivalTarget


def parse_float_list(ctx: click.Context, param: click.Parameter, value: Optional[str]) -> Optional[List[float]]:
    """
    Parse '0.09,0.18,0.45' (spaces allowed) into floats.
    """
    if value is None:
        return None
    items = [item.strip() for item in value.split(",") if item.strip()]
    try:
        return [float(item) for item in items]
    except ValueError:
        raise click.BadParameter(f"expected comma-separated numbers, got '{value}'") from None


params_option = click.option(
    "--params",
    "params_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Rate parameter JSON file (default: bundled parameters).",
)

target_option = click.option(
    "--target",
    "target_path",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Survival table CSV (default: bundled SEER table).",
)

seed_option = click.option("--seed", type=int, default=None, help="Random seed (default from settings).")

out_option = click.option(
    "--out",
    type=click.Path(dir_okay=False, path_type=Path),
    default=None,
    help="Write output to FILE instead of stdout.",
)


def format_option(default: str, extra: Tuple[str, ...] = ()):
    return click.option(
        "--format",
        "fmt",
        type=click.Choice(list(extra) + list(FORMATS)),
        default=default,
        show_default=True,
        help="Output format.",
    )


def resolve_params(params_path: Optional[Path]) -> RateParams:
    """
    Load parameters from the given file or the bundled default.
    """
    return load_params(params_path or settings.default_params_path)


def resolve_target(target_path: Optional[Path], site: str) -> SurvivalTarget:
    """
    Load one site's row from the given table or the bundled one.

    Raises:
        SiteNotFoundError: If the table has no such site
    """
    table = load_targets(target_path or settings.default_targets_path)
    return table.get(site)


def emit(results, out: Optional[Path], fmt: str = "json") -> None:
    write_report(results, out, fmt)
