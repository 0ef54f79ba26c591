import logging
import sys
from pathlib import Path

import click

from src.common.errors import ConfigError, FitboError
from src.harness import config
from src.harness.experiment import ExperimentConfig, RuntimeConfig, sweep_pairs
from src.harness.results_io import write_runtime_report
from src.harness.runner import ExperimentRunner
from src.harness.runtime_bench import RuntimeBenchmark

logger = logging.getLogger(__name__)


def _int_list(ctx, param, value):
    if value is None:
        return None
    try:
        return tuple(int(v) for v in value.split(',') if v.strip())
    except ValueError:
        raise click.BadParameter(f"expected comma-separated integers, got '{value}'")


def _reps(reps, full_scale: bool, full_default: int) -> int:
    if reps is not None:
        return reps
    return full_default if full_scale else config.DESK_REPS


@click.group()
def cli():
    """Bayesian optimisation experiments with the FITBO acquisition and its baselines."""


@cli.command('run')
@click.option('--benchmark', required=True, help='branin, eggholder, hartmann6 or ackley')
@click.option('--acq', 'acquisitions', multiple=True, default=config.DEFAULT_ACQ, show_default=True,
              help='fitbo, fitbo_mm, ei, pi, ucb or random; repeat for several')
@click.option('--iters', default=config.DEFAULT_ITERS, show_default=True, type=int)
@click.option('--reps', default=None, type=int, help='Repetitions (default 20, or 40 with --paper-scale)')
@click.option('--samples', 'samples', default=config.DEFAULT_SAMPLES, show_default=True, type=int,
              help='Hyperparameter samples M per iteration')
@click.option('--seed', default=config.DEFAULT_SEED, show_default=True, type=int)
@click.option('--out', default=config.OUTPUT_DIR, show_default=True, help='Output directory (FITBO_OUTPUT_DIR)')
@click.option('--init', 'init_count', default=None, type=int, help='Initial random observations')
@click.option('--dim', default=None, type=int, help='Dimension, for ackley')
@click.option('--budget', 'acq_budget', default=config.DEFAULT_ACQ_BUDGET, show_default=True, type=int,
              help='Acquisition optimiser evaluations per iteration')
@click.option('--workers', default=config.DEFAULT_WORKERS, show_default=True, type=int)
@click.option('--pin-noise', is_flag=True, help='Fix the noise level at the known observation noise')
@click.option('--paper-scale', '--full-scale', 'full_scale', is_flag=True, help='Use the full repetition count')
def run(benchmark, acquisitions, iters, reps, samples, seed, out, init_count, dim, acq_budget, workers,
        pin_noise, full_scale):
    """Run repeated BO experiments and write traces plus median IR / L2 curves."""
    try:
        experiment = ExperimentConfig(
            benchmark=benchmark, acquisitions=tuple(acquisitions), iters=iters,
            reps=_reps(reps, full_scale, config.FULL_REPS), samples=samples, seed=seed,
            acq_budget=acq_budget, out=out, pin_noise=pin_noise, init_count=init_count, dim=dim,
            workers=workers)
        runner = ExperimentRunner(experiment)
    except ConfigError as e:
        raise click.UsageError(str(e))

    try:
        summary = runner.run()
    except (FitboError, OSError) as e:
        logger.error(f"Experiment aborted: {e}")
        sys.exit(config.EXIT_FAILURE)
    click.echo(f"{summary.completed} repetitions completed, {summary.failed} failed; "
               f"{len(summary.files)} files in {Path(out)}")
    if summary.completed == 0:
        sys.exit(config.EXIT_FAILURE)


@cli.command('bench-runtime')
@click.option('--acq-list', default=','.join(config.RUNTIME_ACQ), show_default=True)
@click.option('--m-list', callback=_int_list, default=','.join(map(str, config.RUNTIME_M_LIST)), show_default=True)
@click.option('--d-list', callback=_int_list, default=','.join(map(str, config.RUNTIME_D_LIST)), show_default=True)
@click.option('--fixed-m', default=config.RUNTIME_FIXED_M, show_default=True, type=int,
              help='M used for the dimension sweep')
@click.option('--fixed-d', default=config.RUNTIME_FIXED_D, show_default=True, type=int,
              help='d used for the M sweep')
@click.option('--reps', default=None, type=int, help='Initialisations (default 20, or 100 with --paper-scale)')
@click.option('--seed', default=config.DEFAULT_SEED, show_default=True, type=int)
@click.option('--out', default=config.OUTPUT_DIR, show_default=True)
@click.option('--paper-scale', '--full-scale', 'full_scale', is_flag=True, help='Use the full initialisation count')
def bench_runtime(acq_list, m_list, d_list, fixed_m, fixed_d, reps, seed, out, full_scale):
    """Time batch acquisition evaluation across sample counts and dimensions."""
    try:
        runtime = RuntimeConfig(
            acquisitions=tuple(a.strip() for a in acq_list.split(',') if a.strip()),
            sweeps=sweep_pairs(m_list, d_list, fixed_m, fixed_d),
            reps=_reps(reps, full_scale, config.FULL_RUNTIME_REPS), seed=seed, out=out)
        benchmark = RuntimeBenchmark(runtime)
    except ConfigError as e:
        raise click.UsageError(str(e))

    try:
        report = benchmark.measure()
        path = write_runtime_report(Path(out) / 'runtime_report.csv', report)
    except (FitboError, OSError) as e:
        logger.error(f"Runtime benchmark aborted: {e}")
        sys.exit(config.EXIT_FAILURE)
    click.echo(report.to_string(index=False))
    click.echo(f"Wrote {path}")


if __name__ == '__main__':
    cli()
