import numpy as np
import pytest
from scipy.stats import norm

from src.acquisition import (
    AcquisitionKind, AcquisitionName, acquisition_values, baseline_alpha, evaluate_batch,
    expected_improvement, fitbo_alpha, probability_of_improvement, upper_confidence_bound,
)
from src.common.errors import ArgumentError
from src.entropy import GaussianMixture1D, gmm_entropy_mm, gmm_entropy_quadrature
from src.entropy.estimators import LOG_2PI_E
from src.gp_core import Dataset
from src.hyper_posterior import PriorSpec, WhitenedParams, build_sample_set, sample_posterior

FITBO = AcquisitionKind(AcquisitionName.FITBO, rel_tol=1e-8)
FITBO_MM = AcquisitionKind.parse('fitbo_mm')


def dataset(seed=0, n=6, dim=1, shift=0.0):
    rng = np.random.default_rng(seed)
    X = rng.uniform(size=(n, dim))
    y = np.sum(np.sin(5.0 * X), axis=1) + shift
    return Dataset(X, y)


def fitted(seed=0, n_samples=15, dim=1):
    ds = dataset(seed, dim=dim)
    return sample_posterior(ds, n_samples=n_samples, burn_in=20, thin=1, rng=seed)


def test_parse_and_validate_kinds():
    assert AcquisitionKind.parse('FITBO-MM').name is AcquisitionName.FITBO_MM
    with pytest.raises(ArgumentError):
        AcquisitionKind.parse('pes')
    with pytest.raises(ArgumentError):
        AcquisitionKind(AcquisitionName.UCB, beta=-1.0)
    kind = AcquisitionKind(AcquisitionName.UCB)
    assert kind.beta_n(2, 10) == pytest.approx(2.0 * np.log(2 * 100 * np.pi ** 2 / 0.6))


def test_single_sample_gives_zero_information():
    hs = fitted(n_samples=1)
    rng = np.random.default_rng(1)
    for x in rng.uniform(size=(100, 1)):
        assert abs(fitbo_alpha(x, hs, FITBO_MM).value) <= 1e-12
        assert abs(fitbo_alpha(x, hs, FITBO).value) <= 1e-6


def test_identical_samples_give_zero_information():
    ds = dataset()
    state = WhitenedParams(PriorSpec.default(1).mean)
    hs = build_sample_set(ds, [state] * 5)
    for x in np.linspace(0.0, 1.0, 7)[:, None]:
        assert abs(fitbo_alpha(x, hs, FITBO).value) <= 1e-6
        assert abs(fitbo_alpha(x, hs, FITBO_MM).value) <= 1e-10


def test_moment_matching_bounds_quadrature_and_is_non_negative():
    rng = np.random.default_rng(2)
    for seed in range(3):
        hs = fitted(seed=seed)
        Xs = rng.uniform(size=(40, 1))
        mm = acquisition_values(Xs, hs, FITBO_MM)
        quad = acquisition_values(Xs, hs, FITBO)
        assert np.all(mm >= quad - 1e-6)
        assert np.all(mm >= -1e-8)


def test_second_entropy_term_is_analytic():
    hs = fitted()
    x = np.array([0.42])
    value = fitbo_alpha(x, hs, FITBO_MM)
    _, var = hs.predict_y(x[None, :])
    assert value.entropy_second == pytest.approx(0.5 * np.mean(LOG_2PI_E + np.log(var[:, 0])), rel=1e-14)
    assert value.value == pytest.approx(value.entropy_first - value.entropy_second, abs=1e-15)


def test_first_entropy_term_uses_the_mixture_estimators():
    hs = fitted()
    x = np.array([0.58])
    mean, var = hs.predict_y(x[None, :])
    mixture = GaussianMixture1D(mean[:, 0], var[:, 0])
    assert fitbo_alpha(x, hs, FITBO_MM).entropy_first == pytest.approx(gmm_entropy_mm(mixture), rel=1e-12, abs=1e-12)
    assert fitbo_alpha(x, hs, FITBO).entropy_first == pytest.approx(
        gmm_entropy_quadrature(mixture, FITBO.rel_tol), rel=1e-10, abs=1e-12)


def test_baseline_closed_forms():
    assert expected_improvement(np.array([-1.0]), np.array([1.0]), 0.0)[0] == pytest.approx(
        norm.cdf(1.0) + norm.pdf(1.0))
    assert expected_improvement(np.array([-1.0]), np.array([1.0]), 0.0)[0] == pytest.approx(1.08332, abs=1e-5)
    assert expected_improvement(np.array([2.0]), np.array([0.0]), 2.0)[0] == 0.0
    assert probability_of_improvement(np.array([3.0]), np.array([0.5]), 3.0)[0] == pytest.approx(0.5)
    assert upper_confidence_bound(np.array([1.0]), np.array([4.0]), 9.0)[0] == pytest.approx(5.0)


def test_baselines_average_over_samples():
    hs = fitted()
    Xs = np.array([[0.3], [0.8]])
    mean, var = hs.predict_y(Xs)
    ei = acquisition_values(Xs, hs, AcquisitionKind.parse('ei'))
    assert np.allclose(ei, expected_improvement(mean, var, hs.dataset.y_min).mean(axis=0))
    assert baseline_alpha(Xs[0], hs, AcquisitionKind.parse('pi')).entropy_first is None
    with pytest.raises(ArgumentError):
        baseline_alpha(Xs[0], hs, FITBO)
    with pytest.raises(ArgumentError):
        fitbo_alpha(Xs[0], hs, AcquisitionKind.parse('ucb'))


@pytest.mark.parametrize('name', ['fitbo', 'fitbo_mm', 'ei', 'pi', 'ucb'])
def test_batch_matches_single_point_and_permutation(name):
    kind = AcquisitionKind.parse(name)
    hs = fitted(dim=2)
    rng = np.random.default_rng(4)
    Xs = rng.uniform(size=(9, 2))
    batch = acquisition_values(Xs, hs, kind)
    single = np.array([evaluate_batch([x], hs, kind)[0].value for x in Xs])
    assert np.allclose(batch, single, rtol=1e-6, atol=1e-6)
    perm = rng.permutation(9)
    assert np.allclose(acquisition_values(Xs[perm], hs, kind), batch[perm], rtol=1e-6, atol=1e-6)


def test_evaluate_batch_rejects_empty_input():
    with pytest.raises(ArgumentError):
        evaluate_batch(np.zeros((0, 1)), fitted(), FITBO_MM)


def test_runtime_unit_batch():
    ds = dataset(seed=5, n=10, dim=2)
    hs = sample_posterior(ds, n_samples=400, burn_in=100, thin=2, rng=5)
    Xs = np.random.default_rng(6).uniform(size=(100, 2))
    values = evaluate_batch(Xs, hs, AcquisitionKind.parse('fitbo'))
    assert len(values) == 100
    assert all(np.isfinite(v.value) for v in values)


def test_fitbo_argmax_is_translation_invariant():
    ds = dataset(seed=7, n=8)
    prior = PriorSpec.default(1)
    rng = np.random.default_rng(8)
    states = [WhitenedParams(prior.sample(rng)) for _ in range(20)]
    grid = np.linspace(0.0, 1.0, 200)[:, None]
    base = acquisition_values(grid, build_sample_set(ds, states), FITBO)
    shifted = acquisition_values(grid, build_sample_set(ds.shifted(10.0), states), FITBO)
    assert int(np.argmax(base)) == int(np.argmax(shifted))
