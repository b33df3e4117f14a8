"""scikit-learn style wrappers around the density and projection functions.

Nothing is learned from data here: ``fit`` validates the configuration and
freezes the spectral measure and sphere rule, after which the estimators
behave like any other fitted scikit-learn object (``get_params``, cloning,
pipelines).
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin, clone
from sklearn.utils.validation import check_array, check_is_fitted

from .density import ROUTES, DensityRequest, default_sphere_rule, density_at, make_sphere_rule
from .errors import DomainError
from .projection import REPRESENTATIONS, g_eval_many
from .quad import ToleranceSpec
from .spectral import DiscreteSpectralMeasure, convert_measure

__all__ = ["StableDensity", "ProjectionTransformer"]


def _tolerance(rel_tol, abs_tol):
    return ToleranceSpec(rel_tol=float(rel_tol), abs_tol=float(abs_tol))


class StableDensity(BaseEstimator):
    """Density of a multivariate stable law with a discrete spectral measure.

    Parameters
    ----------
    points : array_like of shape (n_atoms, d)
        Atom locations on the unit sphere.
    weights : array_like of shape (n_atoms,)
        Atom masses.
    alpha : float, default=1.5
    shift : array_like of shape (d,), optional
    rep : {"A", "M"}, default="A"
        Representation in which ``shift`` is expressed.
    route : str, default="auto"
    n_nodes : int, optional
        Sphere rule size; the per-dimension default when omitted.
    rule_kind : str, optional
    seed : int, default=0
    rel_tol, abs_tol : float
        Quadrature tolerances of the one-dimensional integrals.

    Attributes
    ----------
    measure_ : DiscreteSpectralMeasure
    rule_ : SphereRule
    n_features_in_ : int

    Examples
    --------
    >>> est = StableDensity(points=[[1, 0], [0, 1], [-1, 0], [0, -1]],
    ...                     weights=[0.25] * 4, alpha=1.0).fit()
    >>> bool(est.predict([[0.0, 0.0]])[0] > 0)
    True
    """

    def __init__(self, points=None, weights=None, alpha=1.5, shift=None, rep="A", route="auto",
                 n_nodes=None, rule_kind=None, seed=0, rel_tol=1e-10, abs_tol=1e-12):
        self.points = points
        self.weights = weights
        self.alpha = alpha
        self.shift = shift
        self.rep = rep
        self.route = route
        self.n_nodes = n_nodes
        self.rule_kind = rule_kind
        self.seed = seed
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol

    def fit(self, X=None, y=None):
        """Validate parameters and build the measure and sphere rule.

        ``X`` is only used to check its column count when given.
        """
        if self.points is None or self.weights is None:
            raise DomainError("StableDensity needs points and weights")
        if self.route not in ROUTES:
            raise DomainError(f"unknown route {self.route!r}")
        pts = check_array(self.points, dtype=float)
        m = DiscreteSpectralMeasure(pts, np.asarray(self.weights, dtype=float), float(self.alpha),
                                    self.shift, self.rep)
        m.require_full_dimensional()
        if X is not None:
            X = check_array(X, dtype=float)
            if X.shape[1] != m.dim:
                raise ValueError(f"X has {X.shape[1]} features, the measure has dimension {m.dim}")
        if self.n_nodes is None and self.rule_kind is None:
            rule = default_sphere_rule(m.dim, self.seed)
        else:
            kind = self.rule_kind or {2: "trapezoid-d2", 3: "gauss-product-d3"}.get(m.dim, "montecarlo")
            n = self.n_nodes or {2: 512, 3: 32}.get(m.dim, 200_000)
            rule = make_sphere_rule(m.dim, n, kind, self.seed)
        self.measure_ = m
        self.rule_ = rule
        self.tol_ = _tolerance(self.rel_tol, self.abs_tol)
        self.n_features_in_ = m.dim
        return self

    def _evaluate(self, X):
        check_is_fitted(self, "measure_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} features, expected {self.n_features_in_}")
        return density_at(DensityRequest(X, self.measure_, self.route, self.rule_, self.tol_))

    def predict(self, X):
        """Density values at the rows of ``X``."""
        return np.array([r.value for r in self._evaluate(X)])

    def predict_with_error(self, X):
        """Density values and their error estimates."""
        res = self._evaluate(X)
        return np.array([r.value for r in res]), np.array([r.err_est for r in res])

    def score_samples(self, X):
        """Log density; points where the computed value is not positive give ``-inf``."""
        values = self.predict(X)
        with np.errstate(divide="ignore"):
            return np.where(values > 0, np.log(np.where(values > 0, values, 1.0)), -np.inf)

    def score(self, X, y=None):
        """Total log density of ``X``."""
        return float(np.sum(self.score_samples(X)))

    def to_representation(self, rep):
        """Copy of the fitted estimator with the measure expressed in ``rep``."""
        check_is_fitted(self, "measure_")
        m = convert_measure(self.measure_, rep)
        return clone(self).set_params(shift=m.shift.copy(), rep=rep).fit()


class ProjectionTransformer(TransformerMixin, BaseEstimator):
    """Map each entry of ``X`` to ``g_{alpha,d}(v, beta)``.

    A single-column ``X`` holds abscissae ``v``.  A two-column ``X`` holds
    ``(v, beta)`` pairs and overrides the ``beta`` parameter.
    """

    def __init__(self, alpha=1.5, beta=0.0, d=1, rep="A", rel_tol=1e-10, abs_tol=1e-12):
        self.alpha = alpha
        self.beta = beta
        self.d = d
        self.rep = rep
        self.rel_tol = rel_tol
        self.abs_tol = abs_tol

    def fit(self, X, y=None):
        X = check_array(X, dtype=float)
        if X.shape[1] not in (1, 2):
            raise ValueError("X must have one column (v) or two columns (v, beta)")
        if self.rep not in REPRESENTATIONS:
            raise DomainError(f"rep must be one of {REPRESENTATIONS}")
        if not 0 < self.alpha < 2:
            raise DomainError("alpha must lie in (0, 2)")
        if not abs(self.beta) <= 1:
            raise DomainError("beta must lie in [-1, 1]")
        self.tol_ = _tolerance(self.rel_tol, self.abs_tol)
        self.n_features_in_ = X.shape[1]
        return self

    def transform(self, X):
        check_is_fitted(self, "tol_")
        X = check_array(X, dtype=float)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"X has {X.shape[1]} columns, expected {self.n_features_in_}")
        beta = X[:, 1] if X.shape[1] == 2 else self.beta
        if np.any(np.abs(beta) > 1):
            raise DomainError("beta values must lie in [-1, 1]")
        out = g_eval_many(X[:, 0], beta, float(self.alpha), int(self.d), self.rep, self.tol_)
        return out.value.reshape(-1, 1)
