import logging
from dataclasses import dataclass
from typing import Tuple

import numpy as np
from scipy.linalg import LinAlgError, cho_solve, cholesky, solve_triangular

from src.common.errors import ArgumentError, ConditioningError
from src.gp_core.kernels import KernelHypers, kernel_matrix

logger = logging.getLogger(__name__)

# relative to trace(K)/n
JITTER_LEVELS = tuple(10.0 ** e for e in range(-10, -3))
DUPLICATE_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Dataset:
    """Observed inputs on the unit hypercube and their noisy outputs."""
    X: np.ndarray
    y: np.ndarray

    def __post_init__(self):
        X = np.atleast_2d(np.array(self.X, dtype=float))
        y = np.atleast_1d(np.array(self.y, dtype=float)).ravel()
        if X.shape[0] != y.size:
            raise ArgumentError(f"X has {X.shape[0]} rows but y has {y.size} entries")
        if y.size < 1:
            raise ArgumentError("Dataset needs at least one observation")
        if not np.all(np.isfinite(X)) or np.any(X < 0.0) or np.any(X > 1.0):
            raise ArgumentError("Inputs must lie in the unit hypercube")
        if not np.all(np.isfinite(y)):
            raise ArgumentError("Observations must be finite")
        X.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, 'X', X)
        object.__setattr__(self, 'y', y)
        if self.has_duplicates:
            logger.warning(f"Dataset of {self.n} rows contains near-duplicate inputs")

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    @property
    def y_min(self) -> float:
        return float(np.min(self.y))

    @property
    def has_duplicates(self) -> bool:
        if self.n < 2:
            return False
        diff = self.X[:, None, :] - self.X[None, :, :]
        dist = np.max(np.abs(diff), axis=2)
        np.fill_diagonal(dist, np.inf)
        return bool(np.any(dist <= DUPLICATE_TOLERANCE))

    def augment(self, x: np.ndarray, y: float) -> 'Dataset':
        return Dataset(np.vstack([self.X, np.atleast_2d(x)]), np.append(self.y, y))

    def shifted(self, c: float) -> 'Dataset':
        return Dataset(self.X, self.y + c)


@dataclass(frozen=True)
class CholFactor:
    """Lower Cholesky factor of K + jitter*I."""
    L: np.ndarray
    jitter: float

    @property
    def n(self) -> int:
        return self.L.shape[0]

    def solve(self, b: np.ndarray) -> np.ndarray:
        return cho_solve((self.L, True), b, check_finite=False)

    def half_solve(self, b: np.ndarray) -> np.ndarray:
        return solve_triangular(self.L, b, lower=True, check_finite=False)

    @property
    def log_det(self) -> float:
        return float(2.0 * np.sum(np.log(np.diag(self.L))))


def cholesky_jitter(K: np.ndarray) -> CholFactor:
    """Factor K + jitter*I, escalating jitter x10 from 1e-10 to 1e-4 of trace(K)/n."""
    K = np.asarray(K, dtype=float)
    if K.ndim != 2 or K.shape[0] != K.shape[1]:
        raise ArgumentError(f"Expected a square matrix, got shape {K.shape}")
    if not np.allclose(K, K.T, rtol=1e-10, atol=1e-12 * max(1.0, np.max(np.abs(K)))):
        raise ArgumentError("Matrix is not symmetric")
    n = K.shape[0]
    scale = np.trace(K) / n
    if not np.isfinite(scale) or scale <= 0.0:
        raise ConditioningError("Matrix has non-positive or non-finite trace", 0.0)
    eye = np.eye(n)
    jitter = JITTER_LEVELS[0] * scale
    for level, relative in enumerate(JITTER_LEVELS):
        jitter = relative * scale
        try:
            L = cholesky(K + jitter * eye, lower=True, check_finite=False)
        except LinAlgError:
            continue
        if np.all(np.diag(L) > 0.0) and np.all(np.isfinite(L)):
            if level > 0:
                logger.debug(f"Cholesky needed escalated jitter {jitter:.3e} for n={n}")
            return CholFactor(L, jitter)
    raise ConditioningError(f"Cholesky failed for {n}x{n} matrix", jitter)


@dataclass(frozen=True)
class GPosterior:
    """Fitted zero-mean GP on g with jitter-only noise.

    Holds K(X,X)^-1 g and L^-1 so predictive queries are read-only.
    """
    X: np.ndarray
    g: np.ndarray
    hypers: KernelHypers
    chol: CholFactor
    alpha: np.ndarray
    L_inv: np.ndarray

    @classmethod
    def fit(cls, X: np.ndarray, g: np.ndarray, hypers: KernelHypers,
            chol: CholFactor = None) -> 'GPosterior':
        X = np.atleast_2d(np.array(X, dtype=float))
        g = np.array(g, dtype=float).ravel()
        if chol is None:
            chol = cholesky_jitter(kernel_matrix(X, X, hypers))
        alpha = chol.solve(g)
        L_inv = chol.half_solve(np.eye(chol.n))
        for arr in (X, g, alpha, L_inv):
            arr.setflags(write=False)
        return cls(X, g, hypers, chol, alpha, L_inv)

    def predict(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        Xs = np.atleast_2d(np.asarray(Xs, dtype=float))
        Ks = kernel_matrix(Xs, self.X, self.hypers)
        mean = Ks @ self.alpha
        V = Ks @ self.L_inv.T
        var = self.hypers.signal_variance - np.sum(V ** 2, axis=1)
        return mean, np.maximum(var, 0.0)


def posterior_g(X: np.ndarray, g: np.ndarray, h: KernelHypers, chol: CholFactor,
                x: np.ndarray) -> Tuple[float, float]:
    """Posterior mean and variance of g at a single input x."""
    x = np.asarray(x, dtype=float).ravel()
    if x.size != h.dim:
        raise ArgumentError(f"Query has dimension {x.size}, model has {h.dim}")
    mean, var = GPosterior.fit(X, g, h, chol).predict(x[None, :])
    return float(mean[0]), float(var[0])
