"""
Monte Carlo Commands Module
The `simulate` command.
"""

from pathlib import Path
from typing import Optional

import click

from stage_survival.cli.options import emit, out_option, params_option, resolve_params, seed_option
from stage_survival.core.config import settings
from stage_survival.services.model_service import model_service
from stage_survival.services.montecarlo_service import montecarlo_service


@click.command("simulate")
@params_option
@click.option("--n", "n", type=click.IntRange(min=1), default=None, help="Cohort size (default 10,000).")
@seed_option
@click.option("--horizon", type=click.IntRange(min=0), default=5, show_default=True,
              help="Survival horizon in years after diagnosis.")
@click.option("--max-steps", type=click.IntRange(min=1), default=None, help="Nominal steps per trajectory.")
@click.option("--workers", type=click.IntRange(min=1), default=None, help="Worker processes.")
@click.option("--dump", type=click.Path(dir_okay=False, path_type=Path), default=None,
              help="Write per-trajectory events to this CSV.")
@click.option("--full-states", is_flag=True, help="Include full state sequences in the dump.")
@out_option
def simulate_command(
    params_path: Optional[Path],
    n: Optional[int],
    seed: Optional[int],
    horizon: int,
    max_steps: Optional[int],
    workers: Optional[int],
    dump: Optional[Path],
    full_states: bool,
    out: Optional[Path],
):
    """
    Simulate a cohort of tumors from U1 and print the summary JSON.
    """
    params = resolve_params(params_path)
    matrix = model_service.build_transition_matrix(params)
    n = settings.mc_cohort_size if n is None else n
    seed = settings.default_seed if seed is None else seed

    summary, trajectories = montecarlo_service.simulate_cohort(
        matrix,
        n,
        seed,
        horizon=horizon,
        max_steps=max_steps,
        workers=workers,
        keep_trajectories=dump is not None,
        keep_states=full_states,
    )

    if dump is not None:
        records = []
        for trajectory in trajectories:
            record = {
                "id": trajectory.id,
                "diagnosis_stage": trajectory.diagnosis_stage,
                "diagnosis_time": trajectory.diagnosis_time,
                "death_time": trajectory.death_time,
            }
            if full_states:
                record["states"] = " ".join(state.name for state in trajectory.states)
            records.append(record)
        emit(records, dump, "csv")

    emit(summary, out, "json")
