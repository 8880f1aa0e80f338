"""
Commands module initialization.
"""

from stage_survival.cli.commands.model import matrix_command
from stage_survival.cli.commands.exact import exact_command, sweep_command, compare_command
from stage_survival.cli.commands.montecarlo import simulate_command
from stage_survival.cli.commands.calibrate import targets_command, fit_command, identify_command
from stage_survival.cli.commands.counterfactual import counterfactual_command

__all__ = [
    "matrix_command",
    "exact_command",
    "sweep_command",
    "compare_command",
    "simulate_command",
    "targets_command",
    "fit_command",
    "identify_command",
    "counterfactual_command",
]
