import logging
from dataclasses import dataclass, field
from typing import List, Optional, Tuple, Union

import numpy as np

from src.common.errors import ArgumentError, FittingError
from src.gp_core import Dataset, KernelHypers
from src.hyper_posterior.ess import ess_step
from src.hyper_posterior.likelihood import SafeLogLikelihood
from src.hyper_posterior.priors import PriorSpec, WhitenedParams, noise_index
from src.warped_model import WarpedPosterior

logger = logging.getLogger(__name__)

DEFAULT_SAMPLES = 400
DEFAULT_BURN_IN = 100
DEFAULT_THIN = 2
MAX_INIT_ATTEMPTS = 100
# upper bound on M * N * n floats held per predictive chunk
CHUNK_ELEMENTS = 2_000_000


@dataclass(frozen=True)
class HyperSample:
    hypers: KernelHypers
    eta: float
    posterior: WarpedPosterior


@dataclass(frozen=True)
class HyperSampleSet:
    """M joint draws of (theta, eta), each with its fitted warped posterior.

    The per-sample state is also stacked into arrays so that the M-component
    predictive over a batch of inputs is a handful of array operations.
    """
    dataset: Dataset
    samples: Tuple[HyperSample, ...]
    _stack: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        if len(self.samples) < 1:
            raise ArgumentError("A hyperparameter sample set needs at least one sample")
        object.__setattr__(self, 'samples', tuple(self.samples))
        stack = {
            'inv_ls_sq': np.stack([s.hypers.lengthscales ** -2.0 for s in self.samples]),
            'signal_var': np.array([s.hypers.signal_variance for s in self.samples]),
            'noise_var': np.array([s.hypers.noise_variance for s in self.samples]),
            'eta': np.array([s.eta for s in self.samples]),
            'alpha': np.stack([s.posterior.gp.alpha for s in self.samples]),
            'L_inv_T': np.stack([s.posterior.gp.L_inv.T for s in self.samples]),
        }
        for arr in stack.values():
            arr.setflags(write=False)
        object.__setattr__(self, '_stack', stack)

    def __len__(self) -> int:
        return len(self.samples)

    @property
    def etas(self) -> np.ndarray:
        return self._stack['eta']

    @property
    def noise_variances(self) -> np.ndarray:
        return self._stack['noise_var']

    def _predict_f_chunk(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        s = self._stack
        X = self.dataset.X
        diff_sq = (Xs[:, None, :] - X[None, :, :]) ** 2
        # one (M, d) x (d, N*n) product, so the per-sample cost does not grow with d
        sq = (s['inv_ls_sq'] @ diff_sq.reshape(-1, X.shape[1]).T).reshape(len(self), Xs.shape[0], X.shape[0])
        Ks = s['signal_var'][:, None, None] * np.exp(-0.5 * sq)
        m_g = np.einsum('mNn,mn->mN', Ks, s['alpha'])
        V = np.matmul(Ks, s['L_inv_T'])
        v_g = np.maximum(s['signal_var'][:, None] - np.sum(V ** 2, axis=2), 0.0)
        return s['eta'][:, None] + 0.5 * m_g ** 2, m_g ** 2 * v_g

    def predict_f(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        """Per-sample f predictive at every row of Xs, as two (M, N) arrays."""
        Xs = np.atleast_2d(np.asarray(Xs, dtype=float))
        if Xs.shape[1] != self.dataset.dim:
            raise ArgumentError(f"Queries have dimension {Xs.shape[1]}, model has {self.dataset.dim}")
        chunk = max(1, CHUNK_ELEMENTS // (len(self) * self.dataset.n))
        means, variances = [], []
        for start in range(0, Xs.shape[0], chunk):
            m, v = self._predict_f_chunk(Xs[start:start + chunk])
            means.append(m)
            variances.append(v)
        return np.concatenate(means, axis=1), np.concatenate(variances, axis=1)

    def predict_y(self, Xs: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
        mean, var = self.predict_f(Xs)
        return mean, var + self._stack['noise_var'][:, None]

    def marginal_mean(self, Xs: np.ndarray) -> np.ndarray:
        mean, _ = self.predict_f(Xs)
        return np.mean(mean, axis=0)


def build_sample_set(ds: Dataset, states: List[WhitenedParams]) -> HyperSampleSet:
    samples = []
    for params in states:
        hypers, eta = params.to_model(ds.y_min)
        samples.append(HyperSample(hypers, eta, WarpedPosterior.fit(ds, hypers, eta)))
    return HyperSampleSet(ds, tuple(samples))


def _initial_state(prior: PriorSpec, loglik: SafeLogLikelihood, rng: np.random.Generator,
                   frozen: Optional[np.ndarray]) -> Tuple[np.ndarray, float]:
    state = prior.mean.copy()
    value = loglik(state)
    attempts = 0
    while not np.isfinite(value) and attempts < MAX_INIT_ATTEMPTS:
        state = prior.sample(rng)
        if frozen is not None:
            state[frozen] = prior.mean[frozen]
        value = loglik(state)
        attempts += 1
    if not np.isfinite(value):
        raise FittingError(
            f"No finite-likelihood starting state after {attempts} prior draws",
            {'likelihood_calls': loglik.calls, 'conditioning_failures': loglik.failures,
             'n': loglik.ds.n})
    return state, value


def sample_posterior(ds: Dataset, prior: Optional[PriorSpec] = None,
                     n_samples: int = DEFAULT_SAMPLES, burn_in: int = DEFAULT_BURN_IN,
                     thin: int = DEFAULT_THIN,
                     rng: Union[np.random.Generator, int, None] = None,
                     noise_std: Optional[float] = None) -> HyperSampleSet:
    """Draw M samples of psi = (theta, eta) from p(psi | D) with elliptical slice sampling.

    If `noise_std` is given the log-noise coordinate is pinned at log(noise_std).
    """
    if n_samples < 1:
        raise ArgumentError(f"n_samples must be >= 1, got {n_samples}")
    if burn_in < 0 or thin < 1:
        raise ArgumentError(f"Need burn_in >= 0 and thin >= 1, got {burn_in}, {thin}")
    rng = np.random.default_rng(rng)
    prior = prior if prior is not None else PriorSpec.default(ds.dim)
    if prior.size != ds.dim + 3:
        raise ArgumentError(f"Prior has {prior.size} coordinates, expected {ds.dim + 3}")

    frozen = None
    if noise_std is not None:
        if noise_std <= 0.0:
            raise ArgumentError(f"Pinned noise std must be positive, got {noise_std}")
        frozen = np.zeros(prior.size, dtype=bool)
        frozen[noise_index(ds.dim)] = True
        prior = prior.with_mean(noise_index(ds.dim), np.log(noise_std))

    loglik = SafeLogLikelihood(ds)
    state, value = _initial_state(prior, loglik, rng, frozen)

    collected = []
    total = burn_in + n_samples * thin
    for step in range(total):
        state, value = ess_step(state, prior, loglik, rng, value, frozen)
        if step >= burn_in and (step - burn_in) % thin == thin - 1:
            collected.append(WhitenedParams(state))

    if loglik.failures:
        logger.debug(f"{loglik.failures} of {loglik.calls} likelihood calls hit conditioning failures")
    return build_sample_set(ds, collected)
