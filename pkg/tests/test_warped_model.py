import numpy as np
import pytest

from src.common.errors import DomainError
from src.gp_core import Dataset, KernelHypers
from src.warped_model import WarpedPosterior, predict_f, predict_y, transform_targets


def noise_free_model(eta_gap=0.5, noise=0.03, seed=0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(8, 1))
    y = np.sin(6.0 * X[:, 0]) + 2.0
    ds = Dataset(X, y)
    hypers = KernelHypers.from_natural([0.2], 1.0, noise)
    return WarpedPosterior.fit(ds, hypers, ds.y_min - eta_gap)


def test_transform_targets_known_values():
    assert np.allclose(transform_targets([1.0], 0.5), [1.0])
    assert np.allclose(transform_targets([3.0, 3.0], 1.0), [2.0, 2.0])
    eta, c = -0.7, 1.9
    assert np.allclose(transform_targets([eta + 0.5 * c ** 2], eta), [c])


def test_transform_targets_rejects_eta_at_or_above_minimum():
    with pytest.raises(DomainError):
        transform_targets([1.0, 2.0], 1.0)
    with pytest.raises(DomainError):
        transform_targets([1.0], np.nan)


def test_transform_targets_decrease_with_eta():
    y = np.array([1.0, 2.5, 4.0])
    assert np.all(transform_targets(y, 0.0) < transform_targets(y, -1.0))


def test_predict_f_interpolates_training_points():
    wp = noise_free_model()
    for i in range(wp.dataset.n):
        m, v = predict_f(wp, wp.dataset.X[i])
        assert m == pytest.approx(wp.dataset.y[i], abs=1e-3)
        assert v >= 0.0


def test_zero_latent_mean_gives_eta_and_zero_variance():
    ds = Dataset(np.array([[0.2], [0.7]]), np.array([1.0, 2.0]))
    hypers = KernelHypers.from_natural([0.3], 1.0, 0.03)
    wp = WarpedPosterior.from_targets(ds, hypers, 0.25, np.zeros(2))
    m, v = predict_f(wp, np.array([0.5]))
    assert m == 0.25
    assert v == 0.0


def test_predict_y_adds_noise_variance_only():
    wp = noise_free_model(noise=np.sqrt(1e-3))
    rng = np.random.default_rng(1)
    for x in rng.uniform(size=(10, 1)):
        mf, vf = predict_f(wp, x)
        my, vy = predict_y(wp, x)
        assert my == mf
        assert vy - vf == pytest.approx(1e-3, abs=1e-14)


def test_mean_is_bounded_below_by_eta():
    wp = noise_free_model(eta_gap=0.2)
    Xs = np.linspace(0.0, 1.0, 200)[:, None]
    mean, var = wp.predict_f_batch(Xs)
    assert np.all(mean >= wp.eta)
    assert np.all(var >= 0.0)


def test_prediction_is_invariant_to_sign_of_latent_targets():
    wp = noise_free_model()
    flipped = WarpedPosterior.from_targets(wp.dataset, wp.hypers, wp.eta, -wp.g)
    Xs = np.linspace(0.0, 1.0, 25)[:, None]
    m1, v1 = wp.predict_f_batch(Xs)
    m2, v2 = flipped.predict_f_batch(Xs)
    assert np.allclose(m1, m2, rtol=1e-12, atol=1e-12)
    assert np.allclose(v1, v2, rtol=1e-12, atol=1e-12)


def test_linearised_moments_match_monte_carlo():
    wp = noise_free_model(seed=3)
    x = np.array([0.37])
    m_g, v_g = wp.gp.predict(x[None, :])
    rng = np.random.default_rng(11)
    draws = m_g[0] + np.sqrt(v_g[0]) * rng.standard_normal(1_000_000)
    # first-order expansion of eta + g^2/2 around the latent mean
    f_lin = wp.eta + 0.5 * m_g[0] ** 2 + m_g[0] * (draws - m_g[0])
    m_f, v_f = predict_f(wp, x)
    se_mean = np.sqrt(v_f / draws.size)
    se_var = v_f * np.sqrt(2.0 / draws.size)
    assert abs(np.mean(f_lin) - m_f) <= 4.0 * se_mean
    assert abs(np.var(f_lin) - v_f) <= 4.0 * se_var
