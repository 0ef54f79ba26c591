import logging
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.stats import qmc

from src.common.errors import ArgumentError
from src.hyper_posterior import HyperSampleSet

DEFAULT_BUDGET = 2000
DEFAULT_STARTS = 5

BatchFunction = Callable[[np.ndarray], np.ndarray]


@dataclass(frozen=True)
class SearchResult:
    x: np.ndarray
    value: float
    evaluations: int


class AcquisitionOptimizer:
    """Multi-start maximiser on the unit hypercube.

    Half the budget scores a scrambled Sobol candidate set; the rest runs a
    compass (coordinate-wise pattern) search from the best `n_starts`
    candidates, polling +/- step along every axis and halving the step after
    a failed poll. All polls of one round go to `alpha` as a single batch.
    """

    def __init__(self, budget: int = DEFAULT_BUDGET, n_starts: int = DEFAULT_STARTS,
                 initial_step: float = 0.1, min_step: float = 1e-6):
        if budget < 1:
            raise ArgumentError(f"Optimiser budget must be >= 1, got {budget}")
        self.budget = budget
        self.n_starts = n_starts
        self.initial_step = initial_step
        self.min_step = min_step
        logging.basicConfig(level=logging.INFO)
        self.logger = logging.getLogger(__name__)

    def _candidates(self, dim: int, count: int, rng: np.random.Generator) -> np.ndarray:
        sobol = qmc.Sobol(d=dim, scramble=True, seed=int(rng.integers(2 ** 32)))
        return sobol.random_base2(int(np.ceil(np.log2(count))))[:count]

    def maximize(self, alpha: BatchFunction, dim: int, rng: np.random.Generator) -> SearchResult:
        n_candidates = max(1, self.budget // 2)
        candidates = self._candidates(dim, n_candidates, rng)
        values = np.asarray(alpha(candidates), dtype=float)
        evaluations = n_candidates

        order = np.argsort(-values, kind='stable')[:self.n_starts]
        xs = candidates[order].copy()
        fx = values[order].copy()
        steps = np.full(len(order), self.initial_step)

        directions = np.vstack([np.eye(dim), -np.eye(dim)])
        while True:
            active = np.flatnonzero(steps >= self.min_step)
            affordable = (self.budget - evaluations) // (2 * dim)
            active = active[:affordable]
            if active.size == 0:
                break
            polls = np.clip(xs[active, None, :] + steps[active, None, None] * directions[None, :, :], 0.0, 1.0)
            poll_values = np.asarray(alpha(polls.reshape(-1, dim)), dtype=float).reshape(active.size, 2 * dim)
            evaluations += polls.shape[0] * polls.shape[1]
            best = np.argmax(poll_values, axis=1)
            for k, start in enumerate(active):
                if poll_values[k, best[k]] > fx[start]:
                    xs[start] = polls[k, best[k]]
                    fx[start] = poll_values[k, best[k]]
                else:
                    steps[start] *= 0.5

        i = int(np.argmax(fx))
        self.logger.debug(f"Search used {evaluations} of {self.budget} evaluations, best value {fx[i]:.6g}")
        return SearchResult(xs[i].copy(), float(fx[i]), evaluations)


def maximize_acquisition(alpha: BatchFunction, dim: int, budget: int,
                         rng: np.random.Generator) -> np.ndarray:
    return AcquisitionOptimizer(budget).maximize(alpha, dim, rng).x


def recommend(hs: HyperSampleSet, dim: int, budget: int, rng: np.random.Generator) -> np.ndarray:
    """Minimiser of the sample-averaged posterior mean of f."""
    return AcquisitionOptimizer(budget).maximize(lambda X: -hs.marginal_mean(X), dim, rng).x
