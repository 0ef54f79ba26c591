import logging
from dataclasses import dataclass

import numpy as np
from scipy.optimize import minimize, minimize_scalar
from scipy.stats import qmc

from src.benchmarks.functions import BenchmarkSpec, evaluate_batch
from src.common.errors import ArgumentError

logger = logging.getLogger(__name__)

PROBE_CHUNK = 65_536


@dataclass(frozen=True)
class OracleResult:
    minimisers: np.ndarray
    values: np.ndarray
    minimum: float


def _polish(spec: BenchmarkSpec, x0: np.ndarray) -> np.ndarray:
    result = minimize(lambda x: float(evaluate_batch(spec, np.clip(x, 0.0, 1.0))[0]), x0,
                      method='L-BFGS-B', bounds=[(0.0, 1.0)] * spec.dim,
                      options={'ftol': 1e-15, 'gtol': 1e-10, 'maxiter': 500})
    return np.clip(result.x, 0.0, 1.0)


def _grid_local_minima(spec: BenchmarkSpec, resolution: int) -> np.ndarray:
    axis = np.linspace(0.0, 1.0, resolution)
    g1, g2 = np.meshgrid(axis, axis, indexing='ij')
    grid = np.column_stack([g1.ravel(), g2.ravel()])
    values = evaluate_batch(spec, grid).reshape(resolution, resolution)
    padded = np.pad(values, 1, constant_values=np.inf)
    is_min = np.ones_like(values, dtype=bool)
    for di in (-1, 0, 1):
        for dj in (-1, 0, 1):
            if di == 0 and dj == 0:
                continue
            shifted = padded[1 + di:1 + di + resolution, 1 + dj:1 + dj + resolution]
            is_min &= values <= shifted
    idx = np.flatnonzero(is_min.ravel())
    return grid[idx[np.argsort(values.ravel()[idx])]]


def _coordinate_descent(spec: BenchmarkSpec, x: np.ndarray, sweeps: int = 50) -> np.ndarray:
    x = x.copy()
    best = float(evaluate_batch(spec, x[None, :])[0])
    width = 0.1
    for _ in range(sweeps):
        previous = best
        for i in range(spec.dim):
            lo, hi = max(0.0, x[i] - width), min(1.0, x[i] + width)

            def along(t, i=i):
                probe = x.copy()
                probe[i] = t
                return float(evaluate_batch(spec, probe[None, :])[0])

            res = minimize_scalar(along, bounds=(lo, hi), method='bounded', options={'xatol': 1e-10})
            if res.fun < best:
                x[i], best = res.x, float(res.fun)
        if previous - best < 1e-12:
            width *= 0.5
            if width < 1e-6:
                break
    return x


def truth_oracle(spec: BenchmarkSpec, resolution: int = 200, n_probes: int = 2 ** 20,
                 max_basins: int = 20, basin_tol: float = 1e-4, seed: int = 0) -> OracleResult:
    """Independent brute-force estimate of the global minimisers and minimum.

    Two-dimensional problems: dense grid, local minima of the grid, local
    refinement of the best `max_basins`, distinct basins within `basin_tol`
    of the best value. Higher dimensions: best of `n_probes` Sobol points
    refined by coordinate descent.
    """
    if spec.dim == 2:
        if resolution < 100:
            raise ArgumentError(f"Grid oracle needs resolution >= 100, got {resolution}")
        starts = _grid_local_minima(spec, resolution)[:max_basins]
        refined = []
        for x0 in starts:
            x = _polish(spec, x0)
            if all(np.linalg.norm(x - r) > 1e-3 for r in refined):
                refined.append(x)
    else:
        sobol = qmc.Sobol(d=spec.dim, scramble=True, seed=seed)
        probes = sobol.random_base2(int(np.ceil(np.log2(n_probes))))
        values = np.concatenate([evaluate_batch(spec, probes[i:i + PROBE_CHUNK])
                                 for i in range(0, probes.shape[0], PROBE_CHUNK)])
        best = probes[np.argmin(values)]
        refined = [_polish(spec, _coordinate_descent(spec, best))]

    points = np.array(refined)
    values = evaluate_batch(spec, points)
    minimum = float(np.min(values))
    keep = values <= minimum + basin_tol * max(1.0, abs(minimum))
    order = np.argsort(values[keep])
    logger.info(f"Oracle for {spec.name}: minimum {minimum:.6f} over {int(np.sum(keep))} basin(s)")
    return OracleResult(points[keep][order], values[keep][order], minimum)
