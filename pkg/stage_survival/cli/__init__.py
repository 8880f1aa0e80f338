"""
CLI module initialization.
"""

from stage_survival.cli.commands import (
    matrix_command,
    exact_command,
    sweep_command,
    compare_command,
    simulate_command,
    targets_command,
    fit_command,
    identify_command,
    counterfactual_command,
)

COMMANDS = (
    matrix_command,
    simulate_command,
    exact_command,
    fit_command,
    sweep_command,
    counterfactual_command,
    targets_command,
    compare_command,
    identify_command,
)

__all__ = ["COMMANDS"]
