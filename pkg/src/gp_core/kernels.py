from dataclasses import dataclass

import numpy as np

from src.common.errors import ArgumentError


@dataclass(frozen=True)
class KernelHypers:
    """Squared-exponential hyperparameters stored in log space.

    `log_lengthscales` has one entry per input dimension (ARD). The output scale is
    the signal std dev of the latent g-process and `log_noise` the observation noise
    std dev of y.
    """
    log_lengthscales: np.ndarray
    log_outputscale: float
    log_noise: float

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.log_lengthscales, dtype=float))
        object.__setattr__(self, 'log_lengthscales', ls)
        object.__setattr__(self, 'log_outputscale', float(self.log_outputscale))
        object.__setattr__(self, 'log_noise', float(self.log_noise))
        if ls.ndim != 1 or ls.size == 0:
            raise ArgumentError("log_lengthscales must be a non-empty vector")
        values = np.concatenate([ls, [self.log_outputscale, self.log_noise]])
        if not np.all(np.isfinite(values)):
            raise ArgumentError(f"Kernel hyperparameters must be finite, got {values}")
        if not np.all(np.isfinite(np.exp(values))) or np.any(np.exp(values) <= 0.0):
            raise ArgumentError(f"Kernel hyperparameters overflow or underflow: {values}")

    @property
    def dim(self) -> int:
        return self.log_lengthscales.size

    @property
    def lengthscales(self) -> np.ndarray:
        return np.exp(self.log_lengthscales)

    @property
    def outputscale(self) -> float:
        return float(np.exp(self.log_outputscale))

    @property
    def signal_variance(self) -> float:
        return float(np.exp(2.0 * self.log_outputscale))

    @property
    def noise_std(self) -> float:
        return float(np.exp(self.log_noise))

    @property
    def noise_variance(self) -> float:
        return float(np.exp(2.0 * self.log_noise))

    @classmethod
    def from_natural(cls, lengthscales, outputscale: float, noise_std: float) -> 'KernelHypers':
        return cls(np.log(np.atleast_1d(np.asarray(lengthscales, dtype=float))),
                   np.log(outputscale), np.log(noise_std))


def kernel_matrix(X1: np.ndarray, X2: np.ndarray, h: KernelHypers) -> np.ndarray:
    X1 = np.atleast_2d(np.asarray(X1, dtype=float))
    X2 = np.atleast_2d(np.asarray(X2, dtype=float))
    if X1.shape[1] != h.dim or X2.shape[1] != h.dim:
        raise ArgumentError(
            f"Input dimension mismatch: {X1.shape[1]} and {X2.shape[1]} vs {h.dim} lengthscales")
    A = X1 / h.lengthscales
    B = X2 / h.lengthscales
    sq = (np.sum(A ** 2, axis=1)[:, None] + np.sum(B ** 2, axis=1)[None, :]
          - 2.0 * A @ B.T)
    np.maximum(sq, 0.0, out=sq)
    if X1.shape == X2.shape and np.array_equal(X1, X2):
        np.fill_diagonal(sq, 0.0)
    return h.signal_variance * np.exp(-0.5 * sq)


def kernel_se(x: np.ndarray, x2: np.ndarray, h: KernelHypers) -> float:
    x = np.asarray(x, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    if x.size != x2.size or x.size != h.dim:
        raise ArgumentError(f"Dimension mismatch: {x.size}, {x2.size}, kernel has {h.dim}")
    # direct differences keep the scalar case exactly symmetric
    r2 = np.sum(((x - x2) / h.lengthscales) ** 2)
    return float(h.signal_variance * np.exp(-0.5 * r2))
