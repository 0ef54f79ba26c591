from dataclasses import dataclass
from enum import Enum
from typing import List, Optional, Sequence

import numpy as np
from scipy.stats import norm

from src.common.errors import AcquisitionError, ArgumentError
from src.entropy import gmm_entropy_mm_batch, gmm_entropy_quadrature_batch
from src.entropy.estimators import DEFAULT_REL_TOL, LOG_2PI_E
from src.hyper_posterior import HyperSampleSet


class AcquisitionName(str, Enum):
    FITBO = 'fitbo'
    FITBO_MM = 'fitbo_mm'
    EI = 'ei'
    PI = 'pi'
    UCB = 'ucb'


FITBO_KINDS = (AcquisitionName.FITBO, AcquisitionName.FITBO_MM)


@dataclass(frozen=True)
class AcquisitionKind:
    """Acquisition tag plus its parameters.

    `xi` is the incumbent margin of PI/EI. UCB uses `beta` when given, otherwise
    the schedule beta_n = 2 log(d n^2 pi^2 / (6 delta)).
    """
    name: AcquisitionName
    xi: float = 0.0
    delta: float = 0.1
    beta: Optional[float] = None
    rel_tol: float = DEFAULT_REL_TOL

    def __post_init__(self):
        object.__setattr__(self, 'name', AcquisitionName(self.name))
        values = [self.xi, self.delta, self.rel_tol] + ([self.beta] if self.beta is not None else [])
        if not np.all(np.isfinite(values)):
            raise ArgumentError(f"Acquisition parameters must be finite: {self}")
        if not 0.0 < self.delta < 1.0:
            raise ArgumentError(f"delta must lie in (0, 1), got {self.delta}")
        if self.beta is not None and self.beta <= 0.0:
            raise ArgumentError(f"beta must be positive, got {self.beta}")
        if self.rel_tol <= 0.0:
            raise ArgumentError(f"rel_tol must be positive, got {self.rel_tol}")

    @classmethod
    def parse(cls, name: str) -> 'AcquisitionKind':
        try:
            return cls(AcquisitionName(name.lower().replace('-', '_')))
        except ValueError:
            choices = ', '.join(a.value for a in AcquisitionName)
            raise ArgumentError(f"Unknown acquisition '{name}' (choose from {choices})") from None

    def beta_n(self, dim: int, n: int) -> float:
        if self.beta is not None:
            return self.beta
        return float(2.0 * np.log(dim * n ** 2 * np.pi ** 2 / (6.0 * self.delta)))


@dataclass(frozen=True)
class AcquisitionValue:
    value: float
    entropy_first: Optional[float] = None
    entropy_second: Optional[float] = None


def _check_components(var: np.ndarray) -> None:
    bad = ~(var > 0.0)
    if np.any(bad):
        index = int(np.argmax(np.any(bad, axis=0)))
        raise AcquisitionError("Predictive component has non-positive variance", index)


def _fitbo_terms(mean: np.ndarray, var: np.ndarray, kind: AcquisitionKind):
    """E1 and E2 for every column of the (M, N) predictive arrays."""
    second = 0.5 * np.mean(LOG_2PI_E + np.log(var), axis=0)
    if kind.name == AcquisitionName.FITBO_MM:
        first = gmm_entropy_mm_batch(mean.T, var.T)
    else:
        first = gmm_entropy_quadrature_batch(mean.T, var.T, kind.rel_tol)
    return first, second


def expected_improvement(mean: np.ndarray, var: np.ndarray, incumbent: float, xi: float = 0.0) -> np.ndarray:
    """E[max(incumbent - xi - Y, 0)] for Y ~ N(mean, var), elementwise."""
    improvement = incumbent - xi - np.asarray(mean, dtype=float)
    std = np.sqrt(np.maximum(var, 0.0))
    safe = np.where(std > 0.0, std, 1.0)
    z = improvement / safe
    ei = improvement * norm.cdf(z) + std * norm.pdf(z)
    return np.where(std > 0.0, ei, np.maximum(improvement, 0.0))


def probability_of_improvement(mean: np.ndarray, var: np.ndarray, incumbent: float, xi: float = 0.0) -> np.ndarray:
    improvement = incumbent - xi - np.asarray(mean, dtype=float)
    std = np.sqrt(np.maximum(var, 0.0))
    safe = np.where(std > 0.0, std, 1.0)
    return np.where(std > 0.0, norm.cdf(improvement / safe), np.heaviside(improvement, 0.5))


def upper_confidence_bound(mean: np.ndarray, var: np.ndarray, beta: float) -> np.ndarray:
    """Minimisation utility -(mean - sqrt(beta) * std)."""
    return -(np.asarray(mean, dtype=float) - np.sqrt(beta) * np.sqrt(np.maximum(var, 0.0)))


def _score(Xs: np.ndarray, hs: HyperSampleSet, kind: AcquisitionKind):
    """(values, E1, E2) over the rows of Xs; the entropies are None for the baselines."""
    Xs = np.atleast_2d(np.asarray(Xs, dtype=float))
    if Xs.shape[0] == 0:
        raise ArgumentError("Acquisition evaluation needs at least one input")
    mean, var = hs.predict_y(Xs)
    _check_components(var)

    if kind.name in FITBO_KINDS:
        first, second = _fitbo_terms(mean, var, kind)
        return first - second, first, second

    incumbent = hs.dataset.y_min
    if kind.name == AcquisitionName.EI:
        per_sample = expected_improvement(mean, var, incumbent, kind.xi)
    elif kind.name == AcquisitionName.PI:
        per_sample = probability_of_improvement(mean, var, incumbent, kind.xi)
    else:
        beta = kind.beta_n(hs.dataset.dim, hs.dataset.n)
        per_sample = upper_confidence_bound(mean, var, beta)
    return np.mean(per_sample, axis=0), None, None


def acquisition_values(Xs: np.ndarray, hs: HyperSampleSet, kind: AcquisitionKind) -> np.ndarray:
    """Acquisition values only, as an (N,) array."""
    return _score(Xs, hs, kind)[0]


def evaluate_batch(xs: Sequence[np.ndarray], hs: HyperSampleSet, kind: AcquisitionKind) -> List[AcquisitionValue]:
    values, first, second = _score(xs, hs, kind)
    if first is None:
        return [AcquisitionValue(float(v)) for v in values]
    return [AcquisitionValue(float(v), float(e1), float(e2)) for v, e1, e2 in zip(values, first, second)]


def fitbo_alpha(x: np.ndarray, hs: HyperSampleSet, kind: AcquisitionKind) -> AcquisitionValue:
    if kind.name not in FITBO_KINDS:
        raise ArgumentError(f"fitbo_alpha needs a FITBO kind, got {kind.name.value}")
    return evaluate_batch(np.asarray(x, dtype=float).reshape(1, -1), hs, kind)[0]


def baseline_alpha(x: np.ndarray, hs: HyperSampleSet, kind: AcquisitionKind) -> AcquisitionValue:
    if kind.name in FITBO_KINDS:
        raise ArgumentError(f"baseline_alpha needs EI, PI or UCB, got {kind.name.value}")
    return evaluate_batch(np.asarray(x, dtype=float).reshape(1, -1), hs, kind)[0]
