from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from src.common.errors import ArgumentError


@dataclass(frozen=True)
class Truth:
    """Known global minimisers (unit-cube rows) and the minimum value."""
    minimisers: np.ndarray
    minimum: float

    def __post_init__(self):
        object.__setattr__(self, 'minimisers', np.atleast_2d(np.asarray(self.minimisers, dtype=float)))


@dataclass(frozen=True)
class Problem:
    """Noise-free objective on [0, 1]^dim; `noise_std` is added by the loop."""
    name: str
    objective: Callable[[np.ndarray], float]
    dim: int
    noise_std: float = 0.0
    truth: Optional[Truth] = None

    def __post_init__(self):
        if self.dim < 1:
            raise ArgumentError(f"Problem dimension must be >= 1, got {self.dim}")
        if not self.noise_std >= 0.0:
            raise ArgumentError(f"noise_std must be >= 0, got {self.noise_std}")
        if self.truth is not None and self.truth.minimisers.shape[1] != self.dim:
            raise ArgumentError("Truth minimisers do not match the problem dimension")
