import logging
from typing import Union

import numpy as np

from src.common.errors import ConditioningError
from src.gp_core import Dataset, cholesky_jitter, kernel_matrix
from src.hyper_posterior.priors import WhitenedParams
from src.warped_model import transform_targets

logger = logging.getLogger(__name__)


def log_likelihood(z: Union[WhitenedParams, np.ndarray], ds: Dataset) -> float:
    """GP marginal likelihood of the warped targets plus the change-of-variables term.

    log N(g; 0, K + jitter*I) + sum_i log(1/g_i). Raises ConditioningError when
    the Gram matrix cannot be factored at maximum jitter.
    """
    params = z if isinstance(z, WhitenedParams) else WhitenedParams(z)
    hypers, eta = params.to_model(ds.y_min)
    g = transform_targets(ds.y, eta)
    chol = cholesky_jitter(kernel_matrix(ds.X, ds.X, hypers))
    alpha = chol.solve(g)
    log_gauss = -0.5 * g @ alpha - 0.5 * chol.log_det - 0.5 * ds.n * np.log(2.0 * np.pi)
    return float(log_gauss - np.sum(np.log(g)))


class SafeLogLikelihood:
    """Callable wrapper for the sampler: conditioning failures become -inf."""

    def __init__(self, ds: Dataset):
        self.ds = ds
        self.failures = 0
        self.calls = 0

    def __call__(self, z: np.ndarray) -> float:
        self.calls += 1
        try:
            value = log_likelihood(z, self.ds)
        except (ConditioningError, FloatingPointError, OverflowError, ValueError) as e:
            self.failures += 1
            logger.debug(f"Likelihood evaluation rejected: {e}")
            return -np.inf
        return value if np.isfinite(value) else -np.inf
