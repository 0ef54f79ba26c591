from typing import Optional

import numpy as np

from src.bo_loop.problem import Problem, Truth


def immediate_regret(x_hat: np.ndarray, problem: Problem) -> Optional[float]:
    """|f* - f(x_hat)| on the noise-free objective; None when no truth is known."""
    if problem.truth is None:
        return None
    return float(abs(problem.truth.minimum - problem.objective(np.asarray(x_hat, dtype=float))))


def l2_distance(x_hat: np.ndarray, truth: Optional[Truth]) -> Optional[float]:
    """Distance to the nearest known global minimiser; None when no truth is known."""
    if truth is None:
        return None
    diff = truth.minimisers - np.asarray(x_hat, dtype=float)[None, :]
    return float(np.min(np.linalg.norm(diff, axis=1)))
