from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from src.common.errors import ArgumentError, DomainError
from src.gp_core import CholFactor, Dataset, GPosterior, KernelHypers


def transform_targets(y: np.ndarray, eta: float) -> np.ndarray:
    """g_i = sqrt(2(y_i - eta)), positive branch."""
    y = np.asarray(y, dtype=float).ravel()
    if not np.isfinite(eta) or eta >= np.min(y):
        raise DomainError(f"eta={eta!r} must be finite and strictly below min(y)={np.min(y)!r}")
    return np.sqrt(2.0 * (y - eta))


@dataclass(frozen=True)
class WarpedPosterior:
    """Parabolic model f = eta + g^2/2 for one hyperparameter sample.

    Noisy targets are warped directly and the g-process carries jitter-only
    noise; observation noise re-enters only in `predict_y`. The positive
    square-root branch is a gauge choice: flipping the sign of every g leaves
    the f and y predictives unchanged.
    """
    dataset: Dataset
    hypers: KernelHypers
    eta: float
    gp: GPosterior

    @classmethod
    def fit(cls, dataset: Dataset, hypers: KernelHypers, eta: float,
            chol: Optional[CholFactor] = None) -> 'WarpedPosterior':
        g = transform_targets(dataset.y, eta)
        return cls.from_targets(dataset, hypers, eta, g, chol)

    @classmethod
    def from_targets(cls, dataset: Dataset, hypers: KernelHypers, eta: float,
                     g: np.ndarray, chol: Optional[CholFactor] = None) -> 'WarpedPosterior':
        if hypers.dim != dataset.dim:
            raise ArgumentError(f"Kernel has {hypers.dim} lengthscales, data has {dataset.dim} inputs")
        return cls(dataset, hypers, float(eta), GPosterior.fit(dataset.X, g, hypers, chol))

    @property
    def g(self) -> np.ndarray:
        return self.gp.g

    @property
    def chol(self) -> CholFactor:
        return self.gp.chol

    def predict_f_batch(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        m_g, v_g = self.gp.predict(Xs)
        # linearised around the posterior mode g0 = m_g
        return self.eta + 0.5 * m_g ** 2, m_g ** 2 * v_g

    def predict_y_batch(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        mean, var = self.predict_f_batch(Xs)
        return mean, var + self.hypers.noise_variance


def predict_f(wp: WarpedPosterior, x: np.ndarray) -> Tuple[float, float]:
    mean, var = wp.predict_f_batch(np.asarray(x, dtype=float).reshape(1, -1))
    return float(mean[0]), float(var[0])


def predict_y(wp: WarpedPosterior, x: np.ndarray) -> Tuple[float, float]:
    mean, var = wp.predict_y_batch(np.asarray(x, dtype=float).reshape(1, -1))
    return float(mean[0]), float(var[0])
