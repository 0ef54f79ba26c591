"""Synthetic objectives rescaled to the unit hypercube.

Each benchmark keeps its native formula and box; `evaluate` maps unit-cube
inputs onto the box first. Stored truths are certified by `truth_oracle`.
"""
from dataclasses import dataclass
from typing import Callable, Dict, Optional

import numpy as np

from src.common.errors import ArgumentError


def branin_native(X: np.ndarray) -> np.ndarray:
    x1, x2 = X[:, 0], X[:, 1]
    a, b, c = 1.0, 5.1 / (4.0 * np.pi ** 2), 5.0 / np.pi
    r, s, t = 6.0, 10.0, 1.0 / (8.0 * np.pi)
    return a * (x2 - b * x1 ** 2 + c * x1 - r) ** 2 + s * (1.0 - t) * np.cos(x1) + s


def eggholder_native(X: np.ndarray) -> np.ndarray:
    x1, x2 = X[:, 0], X[:, 1]
    term1 = -(x2 + 47.0) * np.sin(np.sqrt(np.abs(x2 + x1 / 2.0 + 47.0)))
    term2 = -x1 * np.sin(np.sqrt(np.abs(x1 - (x2 + 47.0))))
    return term1 + term2


HARTMANN6_A = np.array([[10.0, 3.0, 17.0, 3.5, 1.7, 8.0],
                        [0.05, 10.0, 17.0, 0.1, 8.0, 14.0],
                        [3.0, 3.5, 1.7, 10.0, 17.0, 8.0],
                        [17.0, 8.0, 0.05, 10.0, 0.1, 14.0]])
HARTMANN6_C = np.array([1.0, 1.2, 3.0, 3.2])
HARTMANN6_P = 1e-4 * np.array([[1312, 1696, 5569, 124, 8283, 5886],
                               [2329, 4135, 8307, 3736, 1004, 9991],
                               [2348, 1451, 3522, 2883, 3047, 6650],
                               [4047, 8828, 8732, 5743, 1091, 381]])


def hartmann6_native(X: np.ndarray) -> np.ndarray:
    inner = np.sum(HARTMANN6_A[None, :, :] * (X[:, None, :] - HARTMANN6_P[None, :, :]) ** 2, axis=2)
    return -np.sum(HARTMANN6_C[None, :] * np.exp(-inner), axis=1)


def ackley_native(X: np.ndarray) -> np.ndarray:
    d = X.shape[1]
    term1 = -20.0 * np.exp(-0.2 * np.sqrt(np.sum(X ** 2, axis=1) / d))
    term2 = -np.exp(np.sum(np.cos(2.0 * np.pi * X), axis=1) / d)
    return term1 + term2 + 20.0 + np.e


@dataclass(frozen=True)
class BenchmarkSpec:
    """A native-domain objective with its affine map from [0, 1]^d.

    `minimisers` are stored in unit-cube coordinates.
    """
    name: str
    dim: int
    lower: np.ndarray
    upper: np.ndarray
    native: Callable[[np.ndarray], np.ndarray]
    minimisers: np.ndarray
    minimum: float

    def to_native(self, X: np.ndarray) -> np.ndarray:
        return self.lower + np.asarray(X, dtype=float) * (self.upper - self.lower)

    def to_unit(self, X: np.ndarray) -> np.ndarray:
        return (np.asarray(X, dtype=float) - self.lower) / (self.upper - self.lower)


def _spec(name, lower, upper, native, minimisers_native, minimum) -> BenchmarkSpec:
    lower = np.asarray(lower, dtype=float)
    upper = np.asarray(upper, dtype=float)
    minimisers = (np.atleast_2d(minimisers_native) - lower) / (upper - lower)
    return BenchmarkSpec(name, lower.size, lower, upper, native, minimisers, minimum)


def ackley(dim: int) -> BenchmarkSpec:
    return _spec('ackley', [-32.768] * dim, [32.768] * dim, ackley_native, [np.zeros(dim)], 0.0)


BENCHMARKS: Dict[str, BenchmarkSpec] = {
    'branin': _spec('branin', [-5.0, 0.0], [10.0, 15.0], branin_native,
                    [[-np.pi, 12.275], [np.pi, 2.275], [3.0 * np.pi, 2.475]], 0.397887),
    'eggholder': _spec('eggholder', [-512.0, -512.0], [512.0, 512.0], eggholder_native,
                       [[512.0, 404.2319]], -959.6407),
    'hartmann6': _spec('hartmann6', [0.0] * 6, [1.0] * 6, hartmann6_native,
                       [[0.20169, 0.150011, 0.476874, 0.275332, 0.311652, 0.6573]], -3.32237),
}


def get_benchmark(name: str, dim: Optional[int] = None) -> BenchmarkSpec:
    if name == 'ackley':
        return ackley(dim or 2)
    if name not in BENCHMARKS:
        raise ArgumentError(f"Unknown benchmark '{name}' (choose from {', '.join(sorted(BENCHMARKS))}, ackley)")
    spec = BENCHMARKS[name]
    if dim is not None and dim != spec.dim:
        raise ArgumentError(f"Benchmark '{name}' is {spec.dim}-dimensional, not {dim}")
    return spec


def evaluate_batch(spec: BenchmarkSpec, X: np.ndarray) -> np.ndarray:
    X = np.atleast_2d(np.asarray(X, dtype=float))
    if X.shape[1] != spec.dim:
        raise ArgumentError(f"{spec.name} expects {spec.dim} inputs, got {X.shape[1]}")
    if not np.all(np.isfinite(X)) or np.any(X < 0.0) or np.any(X > 1.0):
        raise ArgumentError(f"{spec.name} inputs must lie in the unit hypercube")
    return spec.native(spec.to_native(X))


def evaluate(spec: BenchmarkSpec, x: np.ndarray) -> float:
    x = np.asarray(x, dtype=float)
    if x.ndim != 1:
        raise ArgumentError(f"evaluate takes a single point, got shape {x.shape}")
    return float(evaluate_batch(spec, x[None, :])[0])
