"""Entropy of univariate, equally weighted Gaussian mixtures.

Three estimators: adaptive Simpson quadrature of -p log p, the moment-matched
Gaussian upper bound, and plain Monte Carlo. The quadrature runs level by
level over all open intervals of all requested mixtures at once; each mixture
is refined against its own tolerance, so batching never changes a result.
"""
from dataclasses import dataclass
from typing import Tuple

import numpy as np

from src.common.errors import ArgumentError, DomainError, NonConvergenceError

LOG_2PI_E = np.log(2.0 * np.pi * np.e)
WINDOW_STDS = 8.0
DEFAULT_REL_TOL = 1e-6
ABS_TOL_FLOOR = 1e-10
MAX_DEPTH = 60
DENSITY_FLOOR = 1e-300
INITIAL_INTERVALS = 8
CHUNK_ELEMENTS = 1 << 17


@dataclass(frozen=True)
class GaussianMixture1D:
    means: np.ndarray
    variances: np.ndarray

    def __post_init__(self):
        means = np.array(self.means, dtype=float).ravel()
        variances = np.array(self.variances, dtype=float).ravel()
        if means.size < 1 or means.shape != variances.shape:
            raise ArgumentError(f"Need matching non-empty means/variances, got {means.shape}, {variances.shape}")
        if not np.all(np.isfinite(means)) or not np.all(np.isfinite(variances)):
            raise ArgumentError("Mixture parameters must be finite")
        if np.any(variances < 0.0):
            raise DomainError("Mixture variances must be non-negative")
        object.__setattr__(self, 'means', means)
        object.__setattr__(self, 'variances', variances)

    @property
    def size(self) -> int:
        return self.means.size


def gaussian_entropy(variance: float) -> float:
    if not variance > 0.0:
        raise DomainError(f"Gaussian entropy needs a positive variance, got {variance}")
    return float(0.5 * (LOG_2PI_E + np.log(variance)))


def gmm_moments_batch(means: np.ndarray, variances: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Moments of B mixtures given as (B, M) arrays."""
    means = np.atleast_2d(np.asarray(means, dtype=float))
    variances = np.atleast_2d(np.asarray(variances, dtype=float))
    if means.shape != variances.shape:
        raise ArgumentError(f"means {means.shape} and variances {variances.shape} differ")
    centre = np.mean(means, axis=1)
    # mean(K) + mean((m - mean)^2): same value as mean(K + m^2) - mean^2 without cancellation
    spread = np.mean((means - centre[:, None]) ** 2, axis=1)
    return centre, np.maximum(np.mean(variances, axis=1) + spread, 0.0)


def gmm_moments(gm: GaussianMixture1D) -> Tuple[float, float]:
    mean, variance = gmm_moments_batch(gm.means[None, :], gm.variances[None, :])
    return float(mean[0]), float(variance[0])


def gmm_entropy_mm_batch(means: np.ndarray, variances: np.ndarray) -> np.ndarray:
    _, variance = gmm_moments_batch(means, variances)
    if np.any(variance <= 0.0):
        raise DomainError("Moment matching is undefined for a degenerate point-mass mixture")
    return 0.5 * (LOG_2PI_E + np.log(variance))


def gmm_entropy_mm(gm: GaussianMixture1D) -> float:
    _, variance = gmm_moments(gm)
    if variance <= 0.0:
        raise DomainError("Moment matching is undefined for a degenerate point-mass mixture")
    return gaussian_entropy(variance)


def _density(z: np.ndarray, means: np.ndarray, variances: np.ndarray) -> np.ndarray:
    """Mixture densities at z[k] under the components in row k of means/variances."""
    diff = z[:, None] - means
    comps = np.exp(-0.5 * diff ** 2 / variances) / np.sqrt(2.0 * np.pi * variances)
    return np.mean(comps, axis=1)


def gmm_density(gm: GaussianMixture1D, z: np.ndarray) -> np.ndarray:
    if np.any(gm.variances <= 0.0):
        raise DomainError("Density needs strictly positive component variances")
    z = np.atleast_1d(np.asarray(z, dtype=float))
    means = np.broadcast_to(gm.means, (z.size, gm.size))
    variances = np.broadcast_to(gm.variances, (z.size, gm.size))
    return _density(z, means, variances)


class _MixtureIntegrand:
    """-p log p for a stack of mixtures, evaluated at points tagged with their mixture row.

    Component constants are folded once so each evaluation is a gather, one
    fused square-and-exp pass and a weighted row sum.
    """

    def __init__(self, means: np.ndarray, variances: np.ndarray):
        stds = np.sqrt(variances)
        self.scale = 1.0 / (np.sqrt(2.0) * stds)
        self.shift = means * self.scale
        self.weight = 1.0 / (means.shape[1] * np.sqrt(2.0 * np.pi) * stds)
        self.chunk = max(1, CHUNK_ELEMENTS // means.shape[1])

    def __call__(self, z: np.ndarray, owner: np.ndarray) -> np.ndarray:
        p = np.empty(z.size)
        for start in range(0, z.size, self.chunk):
            sl = slice(start, start + self.chunk)
            rows = owner[sl]
            t = np.take(self.scale, rows, axis=0)
            t *= z[sl, None]
            t -= np.take(self.shift, rows, axis=0)
            np.square(t, out=t)
            np.negative(t, out=t)
            np.exp(t, out=t)
            p[sl] = np.einsum('km,km->k', t, np.take(self.weight, rows, axis=0))
        out = np.zeros_like(p)
        ok = p >= DENSITY_FLOOR
        out[ok] = -p[ok] * np.log(p[ok])
        return out


def _initial_breakpoints(means: np.ndarray, stds: np.ndarray, lower: np.ndarray,
                         upper: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Flattened sorted breakpoints and their mixture rows.

    A uniform grid over each window, plus a node within half a std of the mean
    of every component narrower than the grid, so no component can fall
    between two nodes unseen. Means are snapped to a power-of-two lattice at
    their own scale so near-coincident components share one node.
    """
    width = upper - lower
    grid = lower[:, None] + width[:, None] * np.linspace(0.0, 1.0, INITIAL_INTERVALS + 1)
    grid[:, -1] = upper
    lattice = np.exp2(np.floor(np.log2(stds)))
    snapped = np.round(means / lattice) * lattice
    narrow = stds < 0.5 * (width / INITIAL_INTERVALS)[:, None]
    snapped = np.clip(np.where(narrow, snapped, lower[:, None]), lower[:, None], upper[:, None])
    points = np.sort(np.concatenate([grid, snapped], axis=1), axis=1)
    keep = np.ones(points.shape, dtype=bool)
    keep[:, 1:] = points[:, 1:] > points[:, :-1]
    rows, _ = np.nonzero(keep)
    return points[keep], rows


def gmm_entropy_quadrature_batch(means: np.ndarray, variances: np.ndarray,
                                 rel_tol: float = DEFAULT_REL_TOL) -> np.ndarray:
    """Adaptive Simpson entropies of B mixtures given as (B, M) arrays.

    An interval is accepted once its Simpson error estimate falls below
    rel_tol times the running entropy of its mixture (floored at
    ABS_TOL_FLOOR).
    """
    means = np.atleast_2d(np.asarray(means, dtype=float))
    variances = np.atleast_2d(np.asarray(variances, dtype=float))
    if means.shape != variances.shape:
        raise ArgumentError(f"means {means.shape} and variances {variances.shape} differ")
    if np.any(~(variances > 0.0)):
        raise DomainError("Quadrature entropy needs strictly positive component variances")
    if not rel_tol > 0.0:
        raise ArgumentError(f"rel_tol must be positive, got {rel_tol}")
    n_mix = means.shape[0]
    stds = np.sqrt(variances)
    lower = np.min(means - WINDOW_STDS * stds, axis=1)
    upper = np.max(means + WINDOW_STDS * stds, axis=1)
    integrand = _MixtureIntegrand(means, variances)

    nodes, rows = _initial_breakpoints(means, stds, lower, upper)
    f_nodes = integrand(nodes, rows)
    pair = rows[:-1] == rows[1:]
    owner = rows[:-1][pair]
    a, b = nodes[:-1][pair], nodes[1:][pair]
    fa, fb = f_nodes[:-1][pair], f_nodes[1:][pair]
    m = 0.5 * (a + b)
    fm = integrand(m, owner)
    whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb)

    accepted = np.zeros(n_mix)
    depth = 0
    while owner.size:
        lm = 0.5 * (a + m)
        rm = 0.5 * (m + b)
        flm = integrand(lm, owner)
        frm = integrand(rm, owner)
        left = (m - a) / 6.0 * (fa + 4.0 * flm + fm)
        right = (b - m) / 6.0 * (fm + 4.0 * frm + fb)
        refined = left + right
        error = (refined - whole) / 15.0

        running = accepted + np.bincount(owner, weights=refined, minlength=n_mix)
        tol = np.maximum(rel_tol * np.abs(running), ABS_TOL_FLOOR)
        done = np.abs(error) <= tol[owner]
        accepted += np.bincount(owner[done], weights=(refined + error)[done], minlength=n_mix)

        open_ = ~done
        if not np.any(open_):
            break
        depth += 1
        if depth > MAX_DEPTH:
            worst = np.argmax(np.where(open_, np.abs(error), -np.inf))
            raise NonConvergenceError(
                f"Adaptive Simpson exceeded depth {MAX_DEPTH} on mixture {owner[worst]}",
                (float(a[worst]), float(b[worst])))

        # children stay in positional order within each mixture
        owner = np.repeat(owner[open_], 2)
        a = np.stack([a[open_], m[open_]], axis=1).ravel()
        b = np.stack([m[open_], b[open_]], axis=1).ravel()
        fa_new = np.stack([fa[open_], fm[open_]], axis=1).ravel()
        fb_new = np.stack([fm[open_], fb[open_]], axis=1).ravel()
        fm = np.stack([flm[open_], frm[open_]], axis=1).ravel()
        whole = np.stack([left[open_], right[open_]], axis=1).ravel()
        fa, fb = fa_new, fb_new
        m = 0.5 * (a + b)
    return accepted


def gmm_entropy_quadrature(gm: GaussianMixture1D, rel_tol: float = DEFAULT_REL_TOL) -> float:
    return float(gmm_entropy_quadrature_batch(gm.means[None, :], gm.variances[None, :], rel_tol)[0])


def gmm_entropy_monte_carlo(gm: GaussianMixture1D, n_samples: int,
                            rng: np.random.Generator) -> Tuple[float, float]:
    """Monte Carlo entropy estimate and its standard error."""
    if n_samples < 2:
        raise ArgumentError("Monte Carlo entropy needs at least two samples")
    if np.any(gm.variances <= 0.0):
        raise DomainError("Monte Carlo entropy needs strictly positive component variances")
    chunk = max(1, 2_000_000 // gm.size)
    log_p = np.empty(n_samples)
    for start in range(0, n_samples, chunk):
        k = min(chunk, n_samples - start)
        labels = rng.integers(gm.size, size=k)
        z = gm.means[labels] + np.sqrt(gm.variances[labels]) * rng.standard_normal(k)
        log_p[start:start + k] = np.log(gmm_density(gm, z))
    return float(-np.mean(log_p)), float(np.std(log_p, ddof=1) / np.sqrt(n_samples))
