"""
CLI Entry Point for AdaBoost experiments.

Usage:
    python -m src.experiments.run_experiments run --config configs/four_point.cfg
    python -m src.experiments.run_experiments compare --config configs/four_point.cfg --out reports/
    python -m src.experiments.run_experiments hoeffding --config hoeffding.cfg --seed 7
    python -m src.experiments.run_experiments povm-demo --config povm.cfg --quiet
    python -m src.experiments.run_experiments validate-config --config configs/four_point.cfg
"""
import json
import logging
import os
import sys
from typing import Optional, Sequence

import click

# Add project root to path for imports
sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.dirname(os.path.abspath(__file__)))))

# Load environment variables BEFORE importing config
from dotenv import load_dotenv
load_dotenv()

from src.app.errors import BoostingError, error_payload
from src.services.config_service import config_service
from src.services.experiment_service import experiment_service

logger = logging.getLogger(__name__)


EXPERIMENT_OPTIONS = [
    click.option('--config', 'config_path', required=True, type=click.Path(dir_okay=False),
                 help='Flat key = value experiment config'),
    click.option('--seed', type=int, default=None, help='Overrides the config seed'),
    click.option('--out', 'out_dir', type=click.Path(file_okay=False), default=None,
                 help='Output directory (overrides the config output key)'),
    click.option('--quiet', is_flag=True, help='Only log warnings and errors'),
]


def experiment_options(fn):
    """Flags shared by every subcommand."""
    for option in reversed(EXPERIMENT_OPTIONS):
        fn = option(fn)
    return fn


def _configure_logging(quiet: bool) -> None:
    logging.basicConfig(
        level=logging.WARNING if quiet else logging.INFO,
        format='%(asctime)s %(levelname)s %(name)s: %(message)s',
    )


def _fail(ctx: click.Context, exc: BoostingError) -> None:
    click.echo(json.dumps(error_payload(exc), sort_keys=True), err=True)
    ctx.exit(exc.exit_code)


def _run_mode(ctx: click.Context, mode: Optional[str], config_path, seed, out_dir, quiet) -> None:
    _configure_logging(quiet)
    try:
        config = config_service.load_config(config_path, seed, out_dir)
        click.echo(f'seed={config.seed}', err=True)
        result, paths = experiment_service.run_and_export(config, mode)
    except BoostingError as exc:
        _fail(ctx, exc)
        return

    if not quiet:
        click.echo(f'✓ {result.mode}: {len(result.rows)} rows -> {paths["report"]}')
    if result.error is not None:
        click.echo(json.dumps(error_payload(result.error), sort_keys=True), err=True)
        ctx.exit(result.exit_code)


@click.group()
def cli():
    """Probabilistic and quantum AdaBoost experiments."""
    pass


@cli.command('run')
@experiment_options
@click.pass_context
def run(ctx, config_path, seed, out_dir, quiet):
    """Run the mode named in the config file."""
    _run_mode(ctx, None, config_path, seed, out_dir, quiet)


@cli.command('compare')
@experiment_options
@click.pass_context
def compare(ctx, config_path, seed, out_dir, quiet):
    """Classical vs. quantum training at matched precision."""
    _run_mode(ctx, 'compare', config_path, seed, out_dir, quiet)


@cli.command('hoeffding')
@experiment_options
@click.pass_context
def hoeffding(ctx, config_path, seed, out_dir, quiet):
    """Observed violation rates against the Hoeffding bound."""
    _run_mode(ctx, 'hoeffding', config_path, seed, out_dir, quiet)


@cli.command('povm-demo')
@experiment_options
@click.pass_context
def povm_demo(ctx, config_path, seed, out_dir, quiet):
    """Boost noisy POVM classifiers on random qubit states."""
    _run_mode(ctx, 'povm-demo', config_path, seed, out_dir, quiet)


@cli.command('validate-config')
@experiment_options
@click.pass_context
def validate_config(ctx, config_path, seed, out_dir, quiet):
    """Load and range-check a config without running anything."""
    _configure_logging(quiet)
    try:
        config = config_service.load_config(config_path, seed, out_dir)
    except BoostingError as exc:
        _fail(ctx, exc)
        return
    click.echo(f'seed={config.seed}', err=True)


def cli_main(argv: Optional[Sequence[str]] = None) -> int:
    """
    Run the CLI and return its exit code instead of exiting.

    Returns:
        int: 0 on success, 2 on config or usage errors, 3 on resource caps
    """
    try:
        rv = cli.main(args=list(argv) if argv is not None else None, prog_name='run_experiments',
                      standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return e.exit_code
    except click.exceptions.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == '__main__':
    sys.exit(cli_main())
