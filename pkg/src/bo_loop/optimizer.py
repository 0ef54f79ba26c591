import logging
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from src.acquisition import AcquisitionKind, acquisition_values
from src.bo_loop.acq_optimizer import DEFAULT_BUDGET, AcquisitionOptimizer, recommend
from src.bo_loop.metrics import immediate_regret, l2_distance
from src.bo_loop.problem import Problem
from src.bo_loop.trace import BOTrace, IterationRecord
from src.common.errors import ArgumentError, ObjectiveEvaluationError
from src.gp_core import Dataset
from src.hyper_posterior import HyperSampleSet, PriorSpec, sample_posterior

RANDOM_SEARCH = 'random'


@dataclass(frozen=True)
class BOSettings:
    n_samples: int = 200
    burn_in: int = 100
    thin: int = 2
    acq_budget: int = DEFAULT_BUDGET
    recommend_budget: int = DEFAULT_BUDGET
    pin_noise: bool = False
    standardize: bool = True
    prior: Optional[PriorSpec] = None


def _check_run_args(iters: int, init_count: int) -> None:
    if iters < 1 or init_count < 1:
        raise ArgumentError(f"Need iters >= 1 and init_count >= 1, got {iters}, {init_count}")


def _observe(problem: Problem, x: np.ndarray, rng: np.random.Generator) -> float:
    try:
        value = float(problem.objective(x))
    except Exception as e:
        raise ObjectiveEvaluationError(f"Objective {problem.name} failed at {x.tolist()}: {e}") from e
    if not np.isfinite(value):
        raise ObjectiveEvaluationError(f"Objective {problem.name} returned {value} at {x.tolist()}")
    return value + problem.noise_std * rng.standard_normal()


def _initial_design(problem: Problem, init_count: int, rng: np.random.Generator,
                    trace: BOTrace) -> Tuple[List[np.ndarray], List[float]]:
    X = [rng.uniform(size=problem.dim) for _ in range(init_count)]
    y = []
    for x in X:
        y.append(_observe(problem, x, rng))
        trace.initial_X.append(x.tolist())
        trace.initial_y.append(y[-1])
    return X, y


class BayesianOptimizer:
    """Sequential loop: maximise the acquisition, query, resample, recommend.

    Hyperparameters and eta are resampled once after every evaluation; that
    sample set serves both the recommendation and the next acquisition.
    """

    def __init__(self, problem: Problem, kind: AcquisitionKind, settings: Optional[BOSettings] = None):
        logging.basicConfig(level=logging.INFO)
        self.logger = logging.getLogger(__name__)
        self.problem = problem
        self.kind = kind
        self.settings = settings or BOSettings()
        self.acq_optimizer = AcquisitionOptimizer(self.settings.acq_budget)

    def _model_data(self, X: List[np.ndarray], y: List[float]) -> Tuple[Dataset, Optional[float]]:
        y = np.asarray(y, dtype=float)
        centre, scale = 0.0, 1.0
        if self.settings.standardize:
            centre = float(np.mean(y))
            if y.size > 1 and np.std(y) > 0.0:
                scale = float(np.std(y))
        noise_std = None
        if self.settings.pin_noise and self.problem.noise_std > 0.0:
            noise_std = self.problem.noise_std / scale
        return Dataset(np.array(X), (y - centre) / scale), noise_std

    def fit(self, X: List[np.ndarray], y: List[float], rng: np.random.Generator) -> HyperSampleSet:
        ds, noise_std = self._model_data(X, y)
        s = self.settings
        return sample_posterior(ds, s.prior, s.n_samples, s.burn_in, s.thin, rng, noise_std)

    def run(self, iters: int, init_count: int, seed: int) -> BOTrace:
        _check_run_args(iters, init_count)
        rng = np.random.default_rng(seed)
        trace = BOTrace(self.problem.name, self.kind.name.value, seed)
        try:
            X, y = _initial_design(self.problem, init_count, rng, trace)
            hs = self.fit(X, y, rng)
            for iteration in range(1, iters + 1):
                start = time.perf_counter()
                result = self.acq_optimizer.maximize(
                    lambda Xs: acquisition_values(Xs, hs, self.kind), self.problem.dim, rng)
                acquisition_seconds = time.perf_counter() - start

                y_new = _observe(self.problem, result.x, rng)
                X.append(result.x)
                y.append(y_new)

                start = time.perf_counter()
                hs = self.fit(X, y, rng)
                sampling_seconds = time.perf_counter() - start

                start = time.perf_counter()
                x_hat = recommend(hs, self.problem.dim, self.settings.recommend_budget, rng)
                recommendation_seconds = time.perf_counter() - start

                record = IterationRecord(
                    iteration=iteration, x=result.x.tolist(), y=y_new, recommendation=x_hat.tolist(),
                    ir=immediate_regret(x_hat, self.problem), l2=l2_distance(x_hat, self.problem.truth),
                    acquisition_value=result.value, acquisition_evaluations=result.evaluations,
                    sampling_seconds=sampling_seconds, acquisition_seconds=acquisition_seconds,
                    recommendation_seconds=recommendation_seconds)
                trace.records.append(record)
                self.logger.info(
                    f"{self.problem.name}/{self.kind.name.value} seed {seed} iteration {iteration}: "
                    f"y={y_new:.5g}, IR={record.ir}, L2={record.l2}")
        except ObjectiveEvaluationError as e:
            self.logger.error(f"Aborting after {len(trace)} iterations: {e}")
            e.trace = trace
            raise
        return trace


def run_bo(problem: Problem, kind: AcquisitionKind, iters: int, init_count: int, seed: int,
           settings: Optional[BOSettings] = None) -> BOTrace:
    return BayesianOptimizer(problem, kind, settings).run(iters, init_count, seed)


def run_random_search(problem: Problem, iters: int, init_count: int, seed: int) -> BOTrace:
    """Uniform random queries; the recommendation is the best observation so far."""
    _check_run_args(iters, init_count)
    rng = np.random.default_rng(seed)
    trace = BOTrace(problem.name, RANDOM_SEARCH, seed)
    try:
        X, y = _initial_design(problem, init_count, rng, trace)
        for iteration in range(1, iters + 1):
            x = rng.uniform(size=problem.dim)
            y_new = _observe(problem, x, rng)
            X.append(x)
            y.append(y_new)
            x_hat = X[int(np.argmin(y))]
            trace.records.append(IterationRecord(
                iteration=iteration, x=x.tolist(), y=y_new, recommendation=x_hat.tolist(),
                ir=immediate_regret(x_hat, problem), l2=l2_distance(x_hat, problem.truth)))
    except ObjectiveEvaluationError as e:
        e.trace = trace
        raise
    return trace
