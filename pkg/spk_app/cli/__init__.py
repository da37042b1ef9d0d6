"""
Command Line Package

Defines the `spk` click group. Subcommands live in `spk_app.cli.commands`
and register themselves on the group when that module is imported.
"""

from typing import Optional

import click

from spk_app.config import Config
from spk_app.logger.logger import setup_logging


@click.group(name="spk")
@click.option("--log-level", default=None, metavar="LEVEL",
              help="Diagnostics level on stderr (default: SPK_LOG_LEVEL or WARNING).")
@click.pass_context
def cli(ctx: click.Context, log_level: Optional[str]) -> None:
    """Stirling permutations, second-order Eulerian polynomials and their identities."""
    config_class = ctx.obj if ctx.obj is not None else Config
    setup_logging(log_level or config_class.LOG_LEVEL)


def main() -> None:
    """Console script entry point."""
    cli()


from spk_app.cli import commands  # noqa: E402,F401
