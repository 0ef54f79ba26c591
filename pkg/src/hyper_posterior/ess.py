import logging
from typing import Callable, Optional, Tuple

import numpy as np

from src.common.errors import ArgumentError, SamplerStuckError
from src.hyper_posterior.priors import PriorSpec

logger = logging.getLogger(__name__)

MIN_BRACKET = 1e-12


def ess_step(current: np.ndarray, prior: PriorSpec, loglik: Callable[[np.ndarray], float],
             rng: np.random.Generator, current_loglik: Optional[float] = None,
             frozen: Optional[np.ndarray] = None) -> Tuple[np.ndarray, float]:
    """One elliptical slice sampling transition around the prior mean.

    Leaves prior(z) * exp(loglik(z)) invariant. Coordinates flagged in `frozen`
    get a zero prior draw and must already sit at the prior mean, so they never
    move. Returns the new state and its log-likelihood.
    """
    current = np.asarray(current, dtype=float)
    if current.shape != prior.mean.shape:
        raise ArgumentError(f"State shape {current.shape} does not match prior {prior.mean.shape}")
    if current_loglik is None:
        current_loglik = loglik(current)
    if not np.isfinite(current_loglik):
        raise ArgumentError("Elliptical slice sampling needs a finite log-likelihood at the current state")

    nu = prior.std * rng.standard_normal(prior.size)
    if frozen is not None:
        nu[frozen] = 0.0
    threshold = np.log(rng.uniform()) + current_loglik
    centred = current - prior.mean

    phi = rng.uniform(0.0, 2.0 * np.pi)
    phi_min, phi_max = phi - 2.0 * np.pi, phi
    while True:
        proposal = centred * np.cos(phi) + nu * np.sin(phi) + prior.mean
        proposal_loglik = loglik(proposal)
        if proposal_loglik >= threshold:
            return proposal, float(proposal_loglik)
        if phi > 0.0:
            phi_max = phi
        else:
            phi_min = phi
        if phi_max - phi_min < MIN_BRACKET:
            raise SamplerStuckError(
                f"Slice bracket collapsed below {MIN_BRACKET} rad "
                f"(threshold {threshold:.6g}, current log-likelihood {current_loglik:.6g})")
        phi = rng.uniform(phi_min, phi_max)
