"""
Monte Carlo Service Module
Reproducible cohort simulation of tumors starting in U1.
"""

from bisect import bisect_right
from multiprocessing import Pool
from typing import List, Optional, Sequence, Tuple
import logging

import numpy as np

from stage_survival.core.config import settings
from stage_survival.schemas import CohortSummary, State, Trajectory, TransitionMatrix
from stage_survival.services.exact_service import exact_service

logger = logging.getLogger(__name__)

# Uniforms drawn per refill of a trajectory's random block
_BLOCK = 64


def trajectory_rng(master_seed: int, index: int) -> np.random.Generator:
    """
    Independent stream for trajectory `index`, a pure function of (master_seed, index).
    """
    return np.random.default_rng([master_seed, index])


def _cumulative_rows(matrix: TransitionMatrix) -> List[List[float]]:
    # Normalized so each row ends at exactly 1.0 after its last nonzero entry
    cum = np.cumsum(matrix.values, axis=1)
    cum = cum / cum[:, -1:]
    return cum.tolist()


def _terminal_states(matrix: TransitionMatrix) -> List[bool]:
    """
    States where a walk ends: M, and detected states with no path to M.

    Raises:
        DegeneracyError: If some undetected state traps tumors undiagnosed
    """
    exact_service.stage_distribution(matrix)
    never_die = exact_service.absorption_probabilities(matrix) == 0.0
    return [
        state is State.M or (state.is_detected and bool(never_die[state]))
        for state in State
    ]


def _walk(
    cum: List[List[float]],
    terminal: List[bool],
    rng: np.random.Generator,
    max_steps: int,
) -> Tuple[List[int], bool]:
    """
    Step from U1 until a terminal state. Returns the state sequence and
    whether max_steps was exceeded.
    """
    state = int(State.U1)
    states = [state]
    draws = rng.random(_BLOCK).tolist()
    k = 0
    while not terminal[state]:
        if k == len(draws):
            draws = rng.random(_BLOCK).tolist()
            k = 0
        state = bisect_right(cum[state], draws[k])
        k += 1
        states.append(state)
    over_cap = states[-1] == State.M and len(states) - 1 > max_steps
    return states, over_cap


def _events(states: Sequence[int]) -> Tuple[int, int, Optional[int]]:
    """(diagnosis_stage, diagnosis_time, death_time) from a completed walk."""
    first_detected = int(State.D1)
    diagnosis_time = next(t for t, s in enumerate(states) if s >= first_detected)
    diagnosis_stage = states[diagnosis_time] - first_detected + 1
    death_time = len(states) - 1 if states[-1] == State.M else None
    return diagnosis_stage, diagnosis_time, death_time


def _simulate_chunk(args) -> Tuple[List[int], List[int], int, List[Trajectory]]:
    """
    Worker: simulate trajectories [start, stop) and reduce them to counts.
    """
    values, terminal, start, stop, master_seed, max_steps, horizon, keep, keep_states = args
    cum = _cumulative_rows(TransitionMatrix(values))
    counts = [0, 0, 0]
    survivors = [0, 0, 0]
    exceeded = 0
    kept = []
    for index in range(start, stop):
        states, over_cap = _walk(cum, terminal, trajectory_rng(master_seed, index), max_steps)
        stage, diagnosis_time, death_time = _events(states)
        counts[stage - 1] += 1
        if death_time is None or death_time - diagnosis_time > horizon:
            survivors[stage - 1] += 1
        exceeded += over_cap
        if keep:
            kept.append(Trajectory(
                id=index,
                states=[State(s) for s in states] if keep_states else None,
                diagnosis_stage=stage,
                diagnosis_time=diagnosis_time,
                death_time=death_time,
                cap_exceeded=over_cap,
            ))
    return counts, survivors, exceeded, kept


class MonteCarloService:
    """
    Service class for simulating tumor trajectories and cohorts.
    """

    @staticmethod
    def simulate_trajectory(
        matrix: TransitionMatrix,
        rng: np.random.Generator,
        max_steps: Optional[int] = None,
        index: int = 0,
    ) -> Trajectory:
        """
        Simulate one tumor from U1 until absorption in M.

        The walk continues past max_steps if needed; the trajectory is then
        flagged with cap_exceeded.

        Args:
            matrix: Transition matrix with all exit hazards positive
            rng: Random stream for this trajectory
            max_steps: Nominal step cap (default from settings)
            index: Identifier recorded on the trajectory

        Returns:
            Trajectory: Full state sequence with event times
        """
        max_steps = settings.mc_max_steps if max_steps is None else max_steps
        states, over_cap = _walk(_cumulative_rows(matrix), _terminal_states(matrix), rng, max_steps)
        if over_cap:
            logger.warning(f"Trajectory {index} needed {len(states) - 1} steps, beyond the cap of {max_steps}")
        stage, diagnosis_time, death_time = _events(states)
        return Trajectory(
            id=index,
            states=[State(s) for s in states],
            diagnosis_stage=stage,
            diagnosis_time=diagnosis_time,
            death_time=death_time,
            cap_exceeded=over_cap,
        )

    @staticmethod
    def simulate_cohort(
        matrix: TransitionMatrix,
        n: int,
        master_seed: int,
        horizon: int = 5,
        max_steps: Optional[int] = None,
        workers: Optional[int] = None,
        keep_trajectories: bool = False,
        keep_states: bool = False,
    ) -> Tuple[CohortSummary, List[Trajectory]]:
        """
        Simulate n independent tumors and summarize diagnosis stage and survival.

        Trajectory i always uses the stream derived from (master_seed, i), so
        the summary does not depend on how the cohort is split across workers.

        Args:
            matrix: Transition matrix
            n: Cohort size
            master_seed: Seed all trajectory streams derive from
            horizon: Years after diagnosis a survivor must outlive
            max_steps: Nominal step cap per trajectory
            workers: Worker processes (1 runs in-process)
            keep_trajectories: Return per-trajectory event records
            keep_states: Also keep full state sequences on returned trajectories

        Returns:
            Tuple[CohortSummary, List[Trajectory]]: Summary and, if requested, trajectories ordered by id
        """
        if n < 1:
            raise ValueError("cohort size must be at least 1")
        max_steps = settings.mc_max_steps if max_steps is None else max_steps
        workers = max(1, settings.mc_workers if workers is None else workers)
        terminal = _terminal_states(matrix)

        bounds = np.linspace(0, n, min(workers, n) + 1).astype(int)
        tasks = [
            (matrix.values, terminal, int(lo), int(hi), master_seed, max_steps, horizon, keep_trajectories, keep_states)
            for lo, hi in zip(bounds[:-1], bounds[1:])
        ]
        if len(tasks) == 1:
            results = [_simulate_chunk(tasks[0])]
        else:
            with Pool(processes=len(tasks)) as pool:
                results = pool.map(_simulate_chunk, tasks)

        counts = [0, 0, 0]
        survivors = [0, 0, 0]
        exceeded = 0
        trajectories: List[Trajectory] = []
        for chunk_counts, chunk_survivors, chunk_exceeded, kept in results:
            counts = [a + b for a, b in zip(counts, chunk_counts)]
            survivors = [a + b for a, b in zip(survivors, chunk_survivors)]
            exceeded += chunk_exceeded
            trajectories.extend(kept)

        if exceeded:
            logger.warning(f"{exceeded} of {n} trajectories ran past the {max_steps}-step cap")

        summary = CohortSummary(
            n=n,
            seed=master_seed,
            horizon=horizon,
            stage_counts=tuple(counts),
            five_year_survivors=tuple(survivors),
            cap_exceeded=exceeded,
        )
        logger.info(f"Simulated cohort of {n} tumors (seed={master_seed}, workers={len(tasks)})")
        return summary, trajectories


# Create a singleton instance
montecarlo_service = MonteCarloService()
