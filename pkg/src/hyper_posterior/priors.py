from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.common.errors import ArgumentError
from src.gp_core import KernelHypers

# Weakly informative on the unit cube; see DESIGN.md.
LOG_LENGTHSCALE_PRIOR = (np.log(0.3), 0.7)
LOG_OUTPUTSCALE_PRIOR = (0.0, 1.0)
LOG_NOISE_PRIOR = (np.log(0.03), 1.0)
ZETA_PRIOR = (0.0, 1.0)


@dataclass(frozen=True)
class WhitenedParams:
    """Unconstrained sampler state.

    Layout: d log-lengthscales, log-outputscale, log-noise, zeta with
    zeta = log(y_min - eta), so eta < y_min for every finite zeta.
    """
    z: np.ndarray

    def __post_init__(self):
        z = np.array(self.z, dtype=float).ravel()
        if z.size < 4:
            raise ArgumentError(f"Whitened vector needs at least 4 entries, got {z.size}")
        z.setflags(write=False)
        object.__setattr__(self, 'z', z)

    @property
    def dim(self) -> int:
        return self.z.size - 3

    def to_model(self, y_min: float) -> Tuple[KernelHypers, float]:
        d = self.dim
        hypers = KernelHypers(self.z[:d], self.z[d], self.z[d + 1])
        eta = y_min - np.exp(self.z[d + 2])
        return hypers, float(eta)

    @classmethod
    def from_model(cls, hypers: KernelHypers, eta: float, y_min: float) -> 'WhitenedParams':
        if eta >= y_min:
            raise ArgumentError(f"eta={eta} must lie below y_min={y_min}")
        return cls(np.concatenate([hypers.log_lengthscales,
                                   [hypers.log_outputscale, hypers.log_noise, np.log(y_min - eta)]]))


def noise_index(dim: int) -> int:
    return dim + 1


def zeta_index(dim: int) -> int:
    return dim + 2


@dataclass(frozen=True)
class PriorSpec:
    """Independent Gaussian priors on every whitened coordinate."""
    mean: np.ndarray
    std: np.ndarray

    def __post_init__(self):
        mean = np.array(self.mean, dtype=float).ravel()
        std = np.array(self.std, dtype=float).ravel()
        if mean.shape != std.shape:
            raise ArgumentError(f"Prior mean {mean.shape} and std {std.shape} differ in shape")
        if not np.all(np.isfinite(mean)) or not np.all(np.isfinite(std)) or np.any(std <= 0.0):
            raise ArgumentError("Prior std devs must be finite and strictly positive")
        mean.setflags(write=False)
        std.setflags(write=False)
        object.__setattr__(self, 'mean', mean)
        object.__setattr__(self, 'std', std)

    @classmethod
    def default(cls, dim: int) -> 'PriorSpec':
        mean = [LOG_LENGTHSCALE_PRIOR[0]] * dim + [LOG_OUTPUTSCALE_PRIOR[0], LOG_NOISE_PRIOR[0], ZETA_PRIOR[0]]
        std = [LOG_LENGTHSCALE_PRIOR[1]] * dim + [LOG_OUTPUTSCALE_PRIOR[1], LOG_NOISE_PRIOR[1], ZETA_PRIOR[1]]
        return cls(np.array(mean), np.array(std))

    @property
    def size(self) -> int:
        return self.mean.size

    def with_mean(self, index: int, value: float) -> 'PriorSpec':
        mean = self.mean.copy()
        mean[index] = value
        return PriorSpec(mean, self.std)

    def sample(self, rng: np.random.Generator) -> np.ndarray:
        return self.mean + self.std * rng.standard_normal(self.size)
