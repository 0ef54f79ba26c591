import logging
from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional

import numpy as np
import pandas as pd

from src.benchmarks import make_problem
from src.bo_loop import RANDOM_SEARCH, BOSettings, BOTrace, run_bo, run_random_search
from src.common.errors import FitboError, ObjectiveEvaluationError
from src.harness import results_io
from src.harness.experiment import ExperimentConfig, Strategy


@dataclass(frozen=True)
class RepetitionTask:
    benchmark: str
    dim: Optional[int]
    noise_std: float
    strategy: Strategy
    rep: int
    seed: int
    iters: int
    init_count: int
    settings: BOSettings

    @property
    def strategy_name(self) -> str:
        return self.strategy if isinstance(self.strategy, str) else self.strategy.name.value


@dataclass
class RepetitionOutcome:
    task: RepetitionTask
    trace: Optional[BOTrace] = None
    error: Optional[str] = None


@dataclass
class RunSummary:
    completed: int = 0
    failed: int = 0
    files: List[Path] = field(default_factory=list)


def repetition_seeds(seed: int, reps: int) -> List[int]:
    """Independent per-repetition seeds; strategies share them so runs are paired."""
    return [int(child.generate_state(1)[0]) for child in np.random.SeedSequence(seed).spawn(reps)]


def run_repetition(task: RepetitionTask) -> RepetitionOutcome:
    problem = make_problem(task.benchmark, task.dim, task.noise_std)
    try:
        if task.strategy == RANDOM_SEARCH:
            trace = run_random_search(problem, task.iters, task.init_count, task.seed)
        else:
            trace = run_bo(problem, task.strategy, task.iters, task.init_count, task.seed, task.settings)
    except ObjectiveEvaluationError as e:
        return RepetitionOutcome(task, e.trace, str(e))
    except (FitboError, np.linalg.LinAlgError, FloatingPointError) as e:
        return RepetitionOutcome(task, None, f"{type(e).__name__}: {e}")
    return RepetitionOutcome(task, trace)


def aggregate_traces(traces: List[BOTrace]) -> pd.DataFrame:
    """Per-iteration median and interquartile range of IR and L2 across repetitions."""
    rows = [{'iteration': r.iteration, 'ir': r.ir, 'l2': r.l2} for trace in traces for r in trace.records]
    df = pd.DataFrame(rows, columns=['iteration', 'ir', 'l2']).astype({'ir': float, 'l2': float})
    grouped = df.groupby('iteration')
    aggregate = pd.DataFrame({
        'median_IR': grouped['ir'].median(),
        'iqr_IR': grouped['ir'].quantile(0.75) - grouped['ir'].quantile(0.25),
        'median_L2': grouped['l2'].median(),
        'iqr_L2': grouped['l2'].quantile(0.75) - grouped['l2'].quantile(0.25),
    })
    return aggregate.reset_index()


class ExperimentRunner:
    """Runs every (strategy, repetition) pair of an ExperimentConfig and writes the results.

    Repetitions go to a process pool; all files are written from this process.
    """

    def __init__(self, config: ExperimentConfig):
        logging.basicConfig(level=logging.INFO)
        self.logger = logging.getLogger(__name__)
        self.config = config.validate()

    def tasks(self) -> List[RepetitionTask]:
        c = self.config
        seeds = repetition_seeds(c.seed, c.reps)
        settings = c.bo_settings()
        return [RepetitionTask(c.benchmark, c.dim, c.noise_std, strategy, rep, seeds[rep], c.iters,
                               c.initial_points, settings)
                for strategy in c.strategies() for rep in range(c.reps)]

    def _execute(self, tasks: List[RepetitionTask]) -> List[RepetitionOutcome]:
        if self.config.workers == 1 or len(tasks) == 1:
            return [run_repetition(task) for task in tasks]
        outcomes: List[Optional[RepetitionOutcome]] = [None] * len(tasks)
        with ProcessPoolExecutor(max_workers=self.config.workers) as executor:
            futures = {executor.submit(run_repetition, task): i for i, task in enumerate(tasks)}
            for future in as_completed(futures):
                i = futures[future]
                outcomes[i] = future.result()
                self.logger.info(f"Finished {tasks[i].strategy_name} repetition {tasks[i].rep}")
        return outcomes

    def run(self) -> RunSummary:
        c = self.config
        tasks = self.tasks()
        self.logger.info(f"Running {len(tasks)} repetitions on {c.benchmark} with {c.workers} workers")
        outcomes = self._execute(tasks)

        summary = RunSummary()
        failures: List[Dict] = []
        by_strategy: Dict[str, List[BOTrace]] = {}
        for outcome in outcomes:
            task = outcome.task
            if outcome.trace is not None:
                summary.files.append(results_io.write_trace(
                    results_io.trace_path(c.out, outcome.trace, task.rep), outcome.trace))
                summary.files.append(results_io.write_timings(
                    results_io.timings_path(c.out, outcome.trace, task.rep), outcome.trace))
            if outcome.error is None:
                summary.completed += 1
                by_strategy.setdefault(task.strategy_name, []).append(outcome.trace)
                continue
            summary.failed += 1
            self.logger.warning(f"{task.strategy_name} repetition {task.rep} failed: {outcome.error}")
            failures.append({'strategy': task.strategy_name, 'rep': task.rep, 'seed': task.seed,
                             'error': outcome.error,
                             'completed_iterations': 0 if outcome.trace is None else len(outcome.trace)})

        for strategy, traces in by_strategy.items():
            path = results_io.aggregate_path(c.out, c.benchmark, strategy)
            summary.files.append(results_io.write_aggregate(path, aggregate_traces(traces)))
            self.logger.info(f"Wrote {path}")
        if failures:
            summary.files.append(results_io.write_failures(Path(c.out) / f"failures_{c.benchmark}.jsonl", failures))
        return summary
