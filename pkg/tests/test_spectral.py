import math

import mpmath as mp
import numpy as np
import pytest

from stableproj.errors import DegenerateMeasureError, DomainError
from stableproj.spectral import (
    DiscreteSpectralMeasure,
    convert_measure,
    functionals_at,
    functionals_many,
    uniform_measure,
)

from conftest import ASYM_POINTS, ASYM_WEIGHTS

# 4-atom measure at alpha = 1.4, t = (1, 0); summed at 50 digits, frozen
FROZEN_14 = {
    "sigma": 1.18251310844992009,
    "beta": 0.76792163737403936,
    "sigma_B": 1.5457735652229525,
    "beta_B": 0.86270398346435993,
    "mu_M": -1.2498613191304161,
    "mu_AM": 1.3984040311987123,
    "mu_MM": 0.14854271206829625,
}


def mp_functionals(t, points, weights, alpha):
    """Plain re-summation of the direction functionals in extended precision."""
    mp.mp.dps = 50
    a = mp.mpf(alpha)
    p = [mp.fsum(mp.mpf(ti) * mp.mpf(si) for ti, si in zip(t, s)) for s in points]
    w = [mp.mpf(x) for x in weights]
    sa = mp.fsum(wi * abs(pi) ** a for wi, pi in zip(w, p))
    sigma = sa ** (1 / a)
    beta = mp.fsum(wi * mp.sign(pi) * abs(pi) ** a for wi, pi in zip(w, p)) / sa
    lin = mp.fsum(wi * pi for wi, pi in zip(w, p))
    tan = mp.tan(mp.pi * a / 2)
    k = a - 2 if a > 1 else a
    beta_b = 2 / (mp.pi * k) * mp.atan(beta * tan)
    sigma_b = sigma / mp.cos(mp.pi / 2 * k * beta_b) ** (1 / a)
    return {"sigma": sigma, "beta": beta, "sigma_B": sigma_b, "beta_B": beta_b,
            "mu_M": sigma * beta * tan, "mu_AM": -tan * lin, "mu_MM": tan * (beta * sigma - lin)}


class TestMeasure:
    def test_basic(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        assert m.dim == 2 and m.n_atoms == 4
        assert m.total_mass == pytest.approx(2.5)
        np.testing.assert_allclose(m.first_moment, ASYM_WEIGHTS @ ASYM_POINTS)
        np.testing.assert_array_equal(m.shift, [0.0, 0.0])
        assert m.is_full_dimensional()

    def test_immutable(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        with pytest.raises(ValueError):
            m.points[0, 0] = 2.0
        with pytest.raises(AttributeError):
            m.alpha = 1.0

    @pytest.mark.parametrize("points, weights, alpha, shift, rep", [
        ([[1.0, 0.0]], [0.0], 1.0, None, "A"),
        ([[1.0, 0.0]], [1.0, 2.0], 1.0, None, "A"),
        ([[1.1, 0.0]], [1.0], 1.0, None, "A"),
        ([[1.0], [-1.0]], [1.0, 1.0], 1.0, None, "A"),
        ([[1.0, 0.0]], [1.0], 2.0, None, "A"),
        ([[1.0, 0.0]], [1.0], 1.0, [1.0, 2.0, 3.0], "A"),
        ([[1.0, 0.0]], [1.0], 1.0, None, "B"),
        (np.zeros((0, 2)), [], 1.0, None, "A"),
    ])
    def test_invalid(self, points, weights, alpha, shift, rep):
        with pytest.raises(DomainError):
            DiscreteSpectralMeasure(points, weights, alpha, shift, rep)

    def test_rank(self):
        m = DiscreteSpectralMeasure([[1.0, 0.0], [-1.0, 0.0]], [1.0, 1.0], 1.5)
        assert not m.is_full_dimensional()
        with pytest.raises(DegenerateMeasureError):
            m.require_full_dimensional()

    def test_equality(self):
        a = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        b = DiscreteSpectralMeasure(ASYM_POINTS.copy(), ASYM_WEIGHTS.copy(), 1.4)
        assert a == b
        assert a != a.with_shift([0.0, 1e-300])


class TestFunctionals:
    @pytest.mark.parametrize("alpha", [0.5, 1.5])
    def test_single_atom(self, alpha):
        m = DiscreteSpectralMeasure([[0.6, 0.8]], [1.0], alpha)
        f = functionals_at([0.6, 0.8], m)
        assert f.sigma == pytest.approx(1.0, rel=1e-15)
        assert f.beta == pytest.approx(1.0, rel=1e-15)
        assert f.mu_AM == pytest.approx(-math.tan(math.pi * alpha / 2), rel=1e-14)

    def test_antipodal_at_one(self):
        m = DiscreteSpectralMeasure([[0.6, 0.8], [-0.6, -0.8]], [0.7, 0.7], 1.0)
        for t in ([1.0, 0.0], [0.0, 1.0], [math.sqrt(0.5), -math.sqrt(0.5)]):
            f = functionals_at(t, m)
            assert f.beta == pytest.approx(0.0, abs=1e-16)
            assert f.mu == pytest.approx(0.0, abs=1e-16)

    def test_asymmetric_high_precision(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        f = functionals_at([1.0, 0.0], m)
        ref = mp_functionals([1, 0], ASYM_POINTS.tolist(), ASYM_WEIGHTS.tolist(), 1.4)
        for name, frozen in FROZEN_14.items():
            assert float(ref[name]) == pytest.approx(frozen, rel=1e-15)
            assert getattr(f, name) == pytest.approx(frozen, rel=1e-14)
        assert f.mu == 0.0 and f.mu_B == 0.0

    @pytest.mark.parametrize("t", [[0.6, 0.8], [-0.28, 0.96], [-1.0, 0.0]])
    @pytest.mark.parametrize("alpha", [0.35, 0.9, 1.7])
    def test_asymmetric_directions(self, t, alpha):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, alpha)
        f = functionals_at(t, m)
        ref = mp_functionals(t, ASYM_POINTS.tolist(), ASYM_WEIGHTS.tolist(), alpha)
        for name, value in ref.items():
            assert getattr(f, name) == pytest.approx(float(value), rel=1e-12, abs=1e-15)

    def test_alpha_one_forms(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.0)
        t = np.array([0.6, 0.8])
        f = functionals_at(t, m)
        p = ASYM_POINTS @ t
        plog = np.sum(ASYM_WEIGHTS * p * np.log(np.abs(p)))
        assert f.mu == pytest.approx(-2 / math.pi * plog, rel=1e-14)
        assert f.mu_MM == pytest.approx(f.mu + 2 / math.pi * f.beta * f.sigma * math.log(f.sigma), rel=1e-13)
        assert f.mu_M == f.mu_MM and f.mu_AM == f.mu_MM
        assert f.sigma_B == pytest.approx(f.sigma * 2 / math.pi, rel=1e-15)
        assert f.beta_B == f.beta
        assert f.mu_B == pytest.approx(f.beta * f.sigma_B * math.log(f.sigma_B) - 2 / math.pi * plog, rel=1e-13)

    def test_zero_log_zero(self):
        m = DiscreteSpectralMeasure([[1.0, 0.0], [0.0, 1.0]], [1.0, 2.0], 1.0)
        f = functionals_at([1.0, 0.0], m)
        assert f.mu == 0.0
        assert math.isfinite(f.mu_MM)

    def test_degenerate_direction(self):
        m = DiscreteSpectralMeasure([[1.0, 0.0], [-1.0, 0.0]], [1.0, 1.0], 1.3)
        f = functionals_at([0.0, 1.0], m)
        assert f.degenerate and f.sigma == 0.0 and f.beta == 0.0

    def test_dimension_mismatch(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        with pytest.raises(DomainError):
            functionals_at([1.0, 0.0, 0.0], m)
        with pytest.raises(DomainError):
            functionals_at([[1.0, 0.0]], m)

    @pytest.mark.parametrize("alpha", [0.6, 1.0, 1.4])
    def test_homogeneity(self, alpha):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, alpha)
        t = np.array([[0.6, -0.8], [0.0, 1.0]])
        for r in (0.3, 2.5):
            one = functionals_many(t, m)
            scaled = functionals_many(r * t, m)
            np.testing.assert_allclose(scaled["sigma"], r * one["sigma"], rtol=1e-13)
            np.testing.assert_allclose(scaled["beta"], one["beta"], rtol=1e-13)
            if alpha != 1:
                np.testing.assert_allclose(scaled["mu_MM"], r * one["mu_MM"], rtol=1e-12)

    def test_many_matches_single(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 0.8)
        t = np.array([[1.0, 0.0], [0.0, -1.0]])
        many = functionals_many(t, m)
        for k in range(2):
            f = functionals_at(t[k], m)
            for name in ("sigma", "beta", "sigma_B", "mu_MM"):
                assert getattr(f, name) == pytest.approx(many[name][k], rel=1e-14)


class TestConvert:
    def test_symmetric_unchanged(self):
        pts = [[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]]
        m = DiscreteSpectralMeasure(pts, [0.25] * 4, 1.3, [0.5, -0.5])
        out = convert_measure(m, "M")
        assert out.rep == "M"
        np.testing.assert_array_equal(out.shift, m.shift)

    def test_single_atom(self):
        # mu0 = mu + tan(pi alpha/2) sum w s, tan(pi/4) = 1
        m = DiscreteSpectralMeasure([[1.0, 0.0]], [1.0], 0.5)
        out = convert_measure(m, "M")
        np.testing.assert_allclose(out.shift, [1.0, 0.0], rtol=1e-15)
        np.testing.assert_array_equal(out.points, m.points)

    def test_round_trip_exact_from_zero(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        back = convert_measure(convert_measure(m, "M"), "A")
        np.testing.assert_array_equal(back.shift, m.shift)
        assert back == m

    def test_round_trip_general(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 0.7, [0.3, -0.2])
        back = convert_measure(convert_measure(m, "M"), "A")
        np.testing.assert_allclose(back.shift, m.shift, rtol=0, atol=1e-15)

    def test_same_rep_is_identity(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.4)
        assert convert_measure(m, "A") is m

    def test_alpha_one(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1.0, [0.1, 0.2])
        out = convert_measure(m, "M")
        assert out.rep == "M"
        np.testing.assert_array_equal(out.shift, m.shift)

    def test_near_one_refused(self):
        m = DiscreteSpectralMeasure(ASYM_POINTS, ASYM_WEIGHTS, 1 + 1e-9)
        with pytest.raises(DomainError):
            convert_measure(m, "M")
        with pytest.raises(DomainError):
            convert_measure(m, "B")


class TestUniform:
    def test_four_atoms(self):
        m = uniform_measure(2, 4)
        np.testing.assert_allclose(m.points, [[1, 0], [0, 1], [-1, 0], [0, -1]], atol=1e-15)
        np.testing.assert_array_equal(m.weights, [0.25] * 4)

    def test_zero_skew(self):
        m = uniform_measure(2, 256, alpha=1.3)
        assert abs(functionals_at([1.0, 0.0], m).beta) <= 1e-12

    def test_cauchy_scale(self):
        gamma = 1.7
        m = uniform_measure(2, 256, total_mass=gamma, alpha=1.0)
        ang = np.linspace(0, 2 * math.pi, 37)
        t = np.column_stack([np.cos(ang), np.sin(ang)])
        sigma = functionals_many(t, m)["sigma"]
        np.testing.assert_allclose(sigma, gamma * 2 / math.pi, rtol=1e-4)

    def test_three_dimensional(self):
        m = uniform_measure(3, 200, alpha=1.5)
        assert m.dim == 3 and m.n_atoms == 200
        np.testing.assert_allclose(m.first_moment, 0.0, atol=1e-15)
        np.testing.assert_allclose(np.linalg.norm(m.points, axis=1), 1.0, rtol=1e-15)
        assert m.is_full_dimensional()

    @pytest.mark.parametrize("args", [(4, 16), (2, 3), (3, 5), (2, 8, 0.0)])
    def test_invalid(self, args):
        with pytest.raises(DomainError):
            uniform_measure(*args)
