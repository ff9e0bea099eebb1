import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from affinega import AffineGARegistration, ConfigError, from_elementary, warp
from affinega.harness.distortion import rmse, uniform_pointset


@pytest.fixture(scope="module")
def data():
    s = uniform_pointset(40, seed=6)
    d = warp(from_elementary(1.2, -0.3, 4, 7), s)
    return s, d


def test_params_round_trip():
    est = AffineGARegistration(population_size=30, random_state=3)
    params = est.get_params()
    assert params["population_size"] == 30 and params["random_state"] == 3
    twin = clone(est)
    assert twin.get_params() == params
    est.set_params(generations=7)
    assert est.generations == 7


def test_transform_before_fit():
    with pytest.raises(NotFittedError):
        AffineGARegistration().transform([[0, 0]])


def test_fit_transform_aligns(data):
    s, d = data
    est = AffineGARegistration(population_size=60, generations=200, random_state=1)
    out = est.fit_transform(d, s)
    assert out.shape == d.shape
    np.testing.assert_array_equal(out, est.transform(d))
    assert est.convergence_.shape == (200,)
    assert est.fitness_ == est.convergence_[-1]
    np.testing.assert_array_equal(est.coef_, est.params_.linear)
    np.testing.assert_array_equal(est.intercept_, est.params_.translation)
    assert rmse(out, s) < 0.05 * np.ptp(s, axis=0).max()
    assert est.score(d, s) <= 0


def test_same_seed_same_fit(data):
    s, d = data
    a = AffineGARegistration(population_size=10, generations=10, random_state=4).fit(d, s)
    b = AffineGARegistration(population_size=10, generations=10, random_state=4).fit(d, s)
    assert a.params_ == b.params_


def test_unequal_sizes_allowed(data):
    s, d = data
    est = AffineGARegistration(population_size=10, generations=5, random_state=0).fit(d[:25], s)
    assert est.transform(d).shape == d.shape


def test_invalid_input(data):
    s, d = data
    with pytest.raises(ConfigError):
        AffineGARegistration(population_size=9).fit(d, s)
    with pytest.raises(ValueError):
        AffineGARegistration().fit(np.zeros((3, 3)), s)
    with pytest.raises(ValueError):
        AffineGARegistration().fit(d, np.array([[np.nan, 0.0]]))
