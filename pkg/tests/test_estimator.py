import math

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError
from sklearn.pipeline import make_pipeline

from stableproj.density import DensityRequest, density_at, make_sphere_rule
from stableproj.errors import DegenerateMeasureError, DomainError
from stableproj.estimator import ProjectionTransformer, StableDensity
from stableproj.projection import g_eval_many
from stableproj.spectral import DiscreteSpectralMeasure

from conftest import ASYM_POINTS, ASYM_WEIGHTS

X = np.array([[0.0, 0.0], [0.5, -1.0], [2.0, 1.5]])


def make(**kw):
    params = dict(points=ASYM_POINTS, weights=ASYM_WEIGHTS, alpha=1.4, shift=[0.3, -0.2], n_nodes=128)
    params.update(kw)
    return StableDensity(**params)


def test_params_and_clone():
    est = make()
    params = est.get_params()
    assert params["alpha"] == 1.4 and params["route"] == "auto"
    twin = clone(est)
    assert twin.get_params()["n_nodes"] == 128
    assert not hasattr(twin, "measure_")


def test_predict_matches_library():
    est = make().fit()
    m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4, [0.3, -0.2])
    lib = density_at(DensityRequest(X, m, "auto", make_sphere_rule(2, 128, "trapezoid-d2")))
    np.testing.assert_array_equal(est.predict(X), [r.value for r in lib])
    values, errors = est.predict_with_error(X)
    np.testing.assert_array_equal(errors, [r.err_est for r in lib])
    assert est.n_features_in_ == 2


def test_scores():
    est = make().fit()
    logs = est.score_samples(X)
    np.testing.assert_allclose(np.exp(logs), est.predict(X), rtol=1e-14)
    assert est.score(X) == pytest.approx(logs.sum())


def test_representation_switch():
    est = make().fit()
    m_est = est.to_representation("M")
    assert m_est.rep == "M" and est.rep == "A"
    assert m_est.measure_.rep == "M"
    np.testing.assert_allclose(m_est.predict(X), est.predict(X), atol=1e-8)


def test_unfitted_and_shape_errors():
    with pytest.raises(NotFittedError):
        make().predict(X)
    est = make().fit()
    with pytest.raises(ValueError):
        est.predict(np.zeros((2, 3)))
    with pytest.raises(ValueError):
        make().fit(np.zeros((2, 3)))


def test_invalid_configuration():
    with pytest.raises(DomainError):
        StableDensity().fit()
    with pytest.raises(DomainError):
        make(route="XY").fit()
    with pytest.raises(DegenerateMeasureError):
        make(points=[[1.0, 0.0], [-1.0, 0.0]], weights=[1.0, 1.0]).fit()


def test_default_rule():
    est = StableDensity(points=[[1, 0], [0, 1], [-1, 0], [0, -1]], weights=[0.25] * 4, alpha=1.0).fit()
    assert est.rule_.n_nodes == 512
    assert est.predict([[0.0, 0.0]])[0] > 0
    assert math.isfinite(est.score([[0.0, 0.0]]))


class TestTransformer:
    def test_single_column(self):
        v = np.array([[-1.0], [0.0], [0.75]])
        out = ProjectionTransformer(alpha=1.2, beta=0.3, d=2).fit_transform(v)
        np.testing.assert_array_equal(out.ravel(), g_eval_many(v.ravel(), 0.3, 1.2, 2).value)

    def test_two_columns(self):
        x = np.array([[0.5, -1.0], [0.5, 1.0]])
        out = ProjectionTransformer(alpha=0.8, d=1).fit(x).transform(x)
        np.testing.assert_array_equal(out.ravel(), g_eval_many(x[:, 0], x[:, 1], 0.8, 1).value)

    def test_pipeline_and_clone(self):
        pipe = make_pipeline(ProjectionTransformer(alpha=1.0, beta=0.0, d=1))
        out = pipe.fit_transform(np.array([[0.0], [1.0]]))
        np.testing.assert_allclose(out.ravel(), [1 / (2 * math.pi), 1 / (4 * math.pi)], rtol=1e-15)
        assert clone(pipe[0]).get_params()["d"] == 1

    @pytest.mark.parametrize("kw", [dict(alpha=2.0), dict(beta=1.5), dict(rep="Q")])
    def test_invalid(self, kw):
        with pytest.raises(DomainError):
            ProjectionTransformer(**kw).fit(np.zeros((2, 1)))

    def test_shape_checks(self):
        t = ProjectionTransformer().fit(np.zeros((2, 1)))
        with pytest.raises(ValueError):
            t.transform(np.zeros((2, 2)))
        with pytest.raises(ValueError):
            ProjectionTransformer().fit(np.zeros((2, 3)))
        with pytest.raises(DomainError):
            ProjectionTransformer().fit(np.zeros((1, 2))).transform(np.array([[0.0, 2.0]]))
