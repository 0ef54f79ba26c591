from typing import Optional

import numpy as np

from src.benchmarks.functions import evaluate, get_benchmark
from src.bo_loop.problem import Problem, Truth

DEFAULT_NOISE_STD = float(np.sqrt(1e-3))


def make_problem(name: str, dim: Optional[int] = None, noise_std: float = DEFAULT_NOISE_STD) -> Problem:
    """Wrap a named benchmark as a BO problem with its certified truth attached."""
    spec = get_benchmark(name, dim)
    return Problem(name=spec.name, objective=lambda x: evaluate(spec, x), dim=spec.dim,
                   noise_std=noise_std, truth=Truth(spec.minimisers, spec.minimum))
