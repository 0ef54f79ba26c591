from src.entropy.estimators import (
    GaussianMixture1D, gaussian_entropy, gmm_density, gmm_entropy_mm, gmm_entropy_mm_batch,
    gmm_entropy_monte_carlo, gmm_entropy_quadrature, gmm_entropy_quadrature_batch, gmm_moments,
    gmm_moments_batch,
)
