import json

import numpy as np
import pandas as pd
import pytest
from click.testing import CliRunner

import src.harness.runner as runner_module
from src.bo_loop import BOTrace, IterationRecord
from src.common.errors import ConfigError
from src.harness import config, results_io
from src.harness.cli import _reps, cli
from src.harness.experiment import ExperimentConfig, RuntimeConfig, sweep_pairs
from src.harness.runner import (
    ExperimentRunner, RepetitionOutcome, aggregate_traces, repetition_seeds,
)
from src.harness.runtime_bench import RuntimeBenchmark, summarise_timings


def small_config(tmp_path, **overrides):
    settings = dict(benchmark='branin', acquisitions=('fitbo_mm', 'random'), iters=2, reps=2,
                    samples=5, burn_in=5, thin=1, acq_budget=60, out=str(tmp_path), workers=1)
    settings.update(overrides)
    return ExperimentConfig(**settings)


def make_trace(seed, irs):
    trace = BOTrace('branin', 'ei', seed, [[0.1, 0.2]], [3.0])
    trace.records = [IterationRecord(i + 1, [0.5, 0.5], 1.0, [0.4, 0.4], ir, 2.0 * ir, 0.3, 10,
                                     sampling_seconds=0.01, acquisition_seconds=0.02)
                     for i, ir in enumerate(irs)]
    return trace


def test_config_validation():
    assert small_config('out').validate().initial_points == 3
    assert small_config('out', benchmark='hartmann6').initial_points == 9
    assert small_config('out', init_count=4).initial_points == 4
    for bad in (dict(benchmark='nope'), dict(acquisitions=('pes',)), dict(acquisitions=()),
                dict(reps=0), dict(iters=0), dict(samples=0), dict(init_count=0),
                dict(benchmark='branin', dim=3)):
        with pytest.raises(ConfigError):
            small_config('out', **bad).validate()


def test_runtime_sweep_pairs():
    pairs = sweep_pairs((100, 400), (2, 4), fixed_m=400, fixed_d=2)
    assert pairs == ((100, 2), (400, 2), (400, 4))
    assert (900, 2) in RuntimeConfig().sweeps and (400, 10) in RuntimeConfig().sweeps
    with pytest.raises(ConfigError):
        RuntimeConfig(sweeps=((0, 2),)).validate()
    with pytest.raises(ConfigError):
        RuntimeConfig(acquisitions=('random',)).validate()


def test_repetition_seeds_are_stable_and_distinct():
    seeds = repetition_seeds(7, 5)
    assert seeds == repetition_seeds(7, 5)
    assert len(set(seeds)) == 5
    assert repetition_seeds(7, 3) == seeds[:3]


def test_trace_file_round_trip(tmp_path):
    trace = make_trace(3, [0.5, 0.25])
    path = results_io.write_trace(tmp_path / 'trace.jsonl', trace)
    header = json.loads(path.read_text().splitlines()[0])
    assert header['schema_version'] == 1 and header['kind'] == 'bo_trace'
    back = results_io.read_trace(path)
    assert [r.deterministic() for r in back.records] == [r.deterministic() for r in trace.records]
    assert back.header() == trace.header()
    assert 'sampling_seconds' not in path.read_text()
    again = results_io.write_trace(tmp_path / 'again.jsonl', back)
    assert again.read_bytes() == path.read_bytes()


def test_timings_are_kept_apart(tmp_path):
    trace = make_trace(3, [0.5])
    path = results_io.write_timings(tmp_path / 'timings.jsonl', trace)
    df = results_io.read_timings(path)
    assert df.loc[0, 'acquisition_seconds'] == pytest.approx(0.02)


def test_readers_reject_foreign_files(tmp_path):
    path = tmp_path / 'other.jsonl'
    path.write_text(json.dumps({'schema_version': 99, 'kind': 'bo_trace'}) + "\n")
    with pytest.raises(ConfigError):
        results_io.read_trace(path)
    csv = tmp_path / 'other.csv'
    csv.write_text("iteration,median_IR\n1,0.5\n")
    with pytest.raises(ConfigError):
        results_io.read_aggregate(csv)


def test_aggregate_medians_and_round_trip(tmp_path):
    traces = [make_trace(s, irs) for s, irs in enumerate([[1.0, 0.4], [3.0, 0.2], [2.0, 0.6]])]
    df = aggregate_traces(traces)
    assert list(df.columns) == results_io.AGGREGATE_COLUMNS
    assert df['median_IR'].tolist() == pytest.approx([2.0, 0.4])
    assert df['iqr_IR'].tolist() == pytest.approx([1.0, 0.2])
    assert df['median_L2'].tolist() == pytest.approx([4.0, 0.8])
    path = results_io.write_aggregate(tmp_path / 'agg.csv', df)
    assert path.read_text().startswith('# schema_version=1\n')
    back = results_io.read_aggregate(path)
    pd.testing.assert_frame_equal(back, df, check_dtype=False)
    assert results_io.write_aggregate(tmp_path / 'agg2.csv', back).read_bytes() == path.read_bytes()


def test_runtime_report_summary_and_round_trip(tmp_path):
    raw = pd.DataFrame({'kind': ['ei', 'ei', 'pi'], 'M': [10, 10, 10], 'd': [2, 2, 2],
                        'seconds': [0.1, 0.3, 0.2]})
    report = summarise_timings(raw)
    assert report.loc[0, 'mean_seconds'] == pytest.approx(0.2)
    assert report.loc[1, 'std_seconds'] == 0.0
    assert report['reps'].tolist() == [2, 1]
    path = results_io.write_runtime_report(tmp_path / 'runtime.csv', report)
    back = results_io.read_runtime_report(path)
    assert back['kind'].tolist() == ['ei', 'pi']


def test_runner_writes_traces_and_aggregates(tmp_path):
    summary = ExperimentRunner(small_config(tmp_path)).run()
    assert summary.completed == 4 and summary.failed == 0
    for strategy in ('fitbo_mm', 'random'):
        agg = results_io.read_aggregate(tmp_path / f'aggregate_branin_{strategy}.csv')
        assert agg['iteration'].tolist() == [1, 2]
        assert np.all(agg['median_IR'] >= 0.0)
        trace = results_io.read_trace(tmp_path / f'trace_branin_{strategy}_rep001.jsonl')
        assert len(trace) == 2
    # strategies share repetition seeds, so the initial designs match
    bo = results_io.read_trace(tmp_path / 'trace_branin_fitbo_mm_rep000.jsonl')
    rs = results_io.read_trace(tmp_path / 'trace_branin_random_rep000.jsonl')
    assert bo.initial_X == rs.initial_X


def test_runner_output_is_byte_identical_for_equal_seeds(tmp_path):
    first, second = tmp_path / 'a', tmp_path / 'b'
    ExperimentRunner(small_config(first, acquisitions=('ei',), reps=1)).run()
    ExperimentRunner(small_config(second, acquisitions=('ei',), reps=1)).run()
    for name in ('aggregate_branin_ei.csv', 'trace_branin_ei_rep000.jsonl'):
        assert (first / name).read_bytes() == (second / name).read_bytes()


def test_runner_records_failed_repetitions(tmp_path, monkeypatch):
    def failing(task):
        return RepetitionOutcome(task, None, 'FittingError: no finite start')

    monkeypatch.setattr(runner_module, 'run_repetition', failing)
    summary = ExperimentRunner(small_config(tmp_path, acquisitions=('ei',))).run()
    assert summary.completed == 0 and summary.failed == 2
    rows = (tmp_path / 'failures_branin.jsonl').read_text().splitlines()
    assert len(rows) == 3
    assert json.loads(rows[1])['error'].startswith('FittingError')


def test_runtime_benchmark_report_shape():
    config = RuntimeConfig(acquisitions=('fitbo_mm', 'pi'), sweeps=((6, 2), (6, 3)), reps=2,
                           burn_in=5, thin=1, test_points=10)
    report = RuntimeBenchmark(config).measure()
    assert list(report.columns) == ['kind', 'M', 'd', 'mean_seconds', 'std_seconds', 'reps']
    assert len(report) == 4
    assert np.all(report['mean_seconds'] > 0.0)
    assert np.all(report['reps'] == 2)


def test_cli_run_smoke(tmp_path):
    result = CliRunner().invoke(cli, ['run', '--benchmark', 'branin', '--acq', 'ei', '--acq', 'random',
                                      '--iters', '1', '--reps', '1', '--samples', '4', '--budget', '40',
                                      '--workers', '1', '--out', str(tmp_path)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / 'aggregate_branin_ei.csv').exists()
    assert (tmp_path / 'timings_branin_random_rep000.jsonl').exists()


def test_cli_usage_errors_exit_with_code_two(tmp_path):
    result = CliRunner().invoke(cli, ['run', '--benchmark', 'nope', '--out', str(tmp_path)])
    assert result.exit_code == 2
    result = CliRunner().invoke(cli, ['run', '--benchmark', 'branin', '--acq', 'pes', '--out', str(tmp_path)])
    assert result.exit_code == 2
    result = CliRunner().invoke(cli, ['bench-runtime', '--m-list', 'a,b', '--out', str(tmp_path)])
    assert result.exit_code == 2


def test_cli_exits_with_three_when_every_repetition_fails(tmp_path, monkeypatch):
    monkeypatch.setattr(runner_module, 'run_repetition',
                        lambda task: RepetitionOutcome(task, None, 'boom'))
    result = CliRunner().invoke(cli, ['run', '--benchmark', 'branin', '--acq', 'ei', '--reps', '1',
                                      '--workers', '1', '--out', str(tmp_path)])
    assert result.exit_code == 3


def test_cli_bench_runtime_smoke(tmp_path):
    result = CliRunner().invoke(cli, ['bench-runtime', '--acq-list', 'fitbo_mm,ucb', '--m-list', '4',
                                      '--d-list', '2', '--fixed-m', '4', '--reps', '1', '--out', str(tmp_path)])
    assert result.exit_code == 0, result.output
    report = results_io.read_runtime_report(tmp_path / 'runtime_report.csv')
    assert sorted(report['kind']) == ['fitbo_mm', 'ucb']


def test_paper_scale_flag_is_accepted_and_restores_full_counts(tmp_path):
    assert _reps(None, True, config.FULL_REPS) == config.FULL_REPS
    assert _reps(None, False, config.FULL_REPS) == config.DESK_REPS
    assert _reps(3, True, config.FULL_REPS) == 3
    result = CliRunner().invoke(cli, ['run', '--benchmark', 'branin', '--acq', 'random', '--iters', '1',
                                      '--reps', '1', '--workers', '1', '--paper-scale', '--out', str(tmp_path)])
    assert result.exit_code == 0, result.output
    result = CliRunner().invoke(cli, ['bench-runtime', '--acq-list', 'pi', '--m-list', '4', '--d-list', '2',
                                      '--fixed-m', '4', '--reps', '1', '--paper-scale', '--out', str(tmp_path)])
    assert result.exit_code == 0, result.output


def runtime_report(sweeps, acquisitions, reps=10):
    runtime_config = RuntimeConfig(acquisitions=acquisitions, sweeps=sweeps, reps=reps, burn_in=20, thin=1)
    return RuntimeBenchmark(runtime_config).measure().set_index(['kind', 'M', 'd'])['mean_seconds']


@pytest.mark.slow
def test_moment_matched_batch_time_scales_roughly_linearly_in_samples():
    seconds = runtime_report(((100, 2), (900, 2)), ('fitbo_mm',))
    ratio = seconds[('fitbo_mm', 900, 2)] / seconds[('fitbo_mm', 100, 2)]
    assert 5.0 <= ratio <= 13.0


@pytest.mark.slow
def test_moment_matched_batch_time_is_flat_in_dimension():
    seconds = runtime_report(tuple((400, d) for d in (2, 4, 6, 8, 10)), ('fitbo_mm',))
    assert seconds.max() / seconds.min() <= 1.5


@pytest.mark.slow
def test_fitbo_batch_time_relative_to_baselines():
    seconds = runtime_report(((400, 2),), ('fitbo', 'fitbo_mm', 'pi', 'ucb'))
    mm = seconds[('fitbo_mm', 400, 2)]
    assert mm <= 1.25 * seconds[('pi', 400, 2)]
    assert mm <= 1.25 * seconds[('ucb', 400, 2)]
    assert seconds[('fitbo', 400, 2)] <= 10.0 * mm


@pytest.mark.slow
def test_branin_desk_scale_regret_beats_random_search(tmp_path):
    experiment = ExperimentConfig(benchmark='branin', acquisitions=('fitbo', 'fitbo_mm', 'random'),
                                  iters=80, reps=40, samples=200, out=str(tmp_path))
    summary = ExperimentRunner(experiment).run()
    assert summary.failed == 0

    def median_ir(strategy):
        aggregate = results_io.read_aggregate(results_io.aggregate_path(str(tmp_path), 'branin', strategy))
        return aggregate.set_index('iteration')['median_IR']

    random_ir = median_ir('random')
    for strategy in ('fitbo', 'fitbo_mm'):
        ir = median_ir(strategy)
        assert ir[80] <= 0.1 * ir[5]
        assert ir[80] < random_ir[80]
