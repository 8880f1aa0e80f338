"""
Main Application Module
Command-line entry point with command registration and error handling.
"""

import logging
import sys

import click
import numpy as np
from pydantic import ValidationError

from stage_survival.cli import COMMANDS
from stage_survival.core.config import settings
from stage_survival.core.exceptions import (
    EXIT_INPUT_ERROR,
    EXIT_NUMERICAL_FAILURE,
    StageSurvivalError,
)

logger = logging.getLogger(__name__)

EXIT_UNEXPECTED = 1


class StageSurvivalGroup(click.Group):
    """
    Command group that turns errors raised by commands into exit codes.
    """

    def invoke(self, ctx: click.Context):
        try:
            return super().invoke(ctx)
        except (click.exceptions.ClickException, click.exceptions.Exit, click.exceptions.Abort):
            raise
        except StageSurvivalError as exc:
            self._fail(ctx, exc, exc.exit_code)
        except (np.linalg.LinAlgError, FloatingPointError) as exc:
            # LinAlgError is a ValueError, so it goes first
            self._fail(ctx, exc, EXIT_NUMERICAL_FAILURE)
        except ValidationError as exc:
            errors = "; ".join(
                f"{'.'.join(str(loc) for loc in error['loc'])}: {error['msg']}" for error in exc.errors()
            )
            self._fail(ctx, errors, EXIT_INPUT_ERROR)
        except ValueError as exc:
            self._fail(ctx, exc, EXIT_INPUT_ERROR)
        except Exception as exc:
            logger.error(f"Unhandled exception: {exc}", exc_info=True)
            self._fail(ctx, f"unexpected failure: {exc}", EXIT_UNEXPECTED)

    @staticmethod
    def _fail(ctx: click.Context, message, code: int) -> None:
        click.echo(f"error: {message}", err=True)
        ctx.exit(code)


@click.group(cls=StageSurvivalGroup)
@click.option("--verbose", "-v", is_flag=True, help="Log debug detail to stderr.")
@click.version_option(version=settings.app_version, prog_name=settings.app_name)
def cli(verbose: bool):
    """
    Stage-specific cancer survival from a Markov model of tumor progression.
    """
    # Configure logging
    logging.basicConfig(
        level=logging.DEBUG if verbose or settings.debug else logging.WARNING,
        format="%(asctime)s - %(name)s - %(levelname)s - %(message)s",
        stream=sys.stderr,
    )
    if verbose:
        logging.getLogger("stage_survival").setLevel(logging.DEBUG)


# Register commands
for command in COMMANDS:
    cli.add_command(command)
