"""
Stage Survival
Markov model of tumor progression, detection and death, for reading
stage-specific survival statistics.
"""

from stage_survival.main import cli

__all__ = ["cli"]
