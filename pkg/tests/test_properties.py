"""Randomised property suites, 1000 derandomised cases each."""
import math

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from stableproj.projection import g_eval_many
from stableproj.spectral import DiscreteSpectralMeasure, convert_measure, functionals_many

CASES = settings(max_examples=1000, derandomize=True, deadline=None, database=None)

alphas = st.floats(0.05, 1.95).filter(lambda a: abs(a - 1) > 1e-3) | st.just(1.0)
betas = st.floats(-1.0, 1.0)
dims = st.integers(2, 4)


@st.composite
def measures(draw, alpha=alphas):
    d = draw(dims)
    n = draw(st.integers(1, 6))
    raw = np.array(draw(st.lists(st.lists(st.floats(-1, 1), min_size=d, max_size=d),
                                 min_size=n, max_size=n)))
    norms = np.linalg.norm(raw, axis=1)
    raw = np.where(norms[:, None] > 1e-3, raw, np.eye(d)[0])
    pts = raw / np.linalg.norm(raw, axis=1, keepdims=True)
    w = np.array(draw(st.lists(st.floats(1e-3, 10), min_size=n, max_size=n)))
    shift = np.array(draw(st.lists(st.floats(-5, 5), min_size=d, max_size=d)))
    return DiscreteSpectralMeasure(pts, w, draw(alpha), shift)


def directions(d, draw):
    t = np.array(draw(st.lists(st.floats(-1, 1), min_size=d, max_size=d)))
    return t if np.linalg.norm(t) > 1e-3 else np.eye(d)[0]


@CASES
@given(v=st.floats(-20, 20), beta=betas, alpha=alphas, d=st.integers(1, 4),
       rep=st.sampled_from(["A", "B", "M"]))
def test_g_symmetry(v, beta, alpha, d, rep):
    pair = g_eval_many([v, -v], [beta, -beta], alpha, d, rep)
    a, b = pair.value
    assert abs(a - b) <= 1e-12 + 1e-9 * abs(a)


@CASES
@given(data=st.data(), r=st.floats(1e-3, 1e3))
def test_scale_homogeneity(data, r):
    m = data.draw(measures())
    t = directions(m.dim, data.draw)
    f = functionals_many(np.vstack([t, r * t]), m)
    assert math.isclose(f["sigma"][1], r * f["sigma"][0], rel_tol=1e-12, abs_tol=1e-300)


@CASES
@given(data=st.data(), r=st.floats(1e-3, 1e3))
def test_skew_homogeneity(data, r):
    m = data.draw(measures())
    t = directions(m.dim, data.draw)
    f = functionals_many(np.vstack([t, r * t]), m)
    assert abs(f["beta"][1] - f["beta"][0]) <= 1e-12


@CASES
@given(data=st.data(), r=st.floats(1e-3, 1e3))
def test_m_shift_homogeneity(data, r):
    m = data.draw(measures(alpha=st.floats(0.05, 1.95).filter(lambda a: abs(a - 1) > 1e-3)))
    t = directions(m.dim, data.draw)
    f = functionals_many(np.vstack([t, r * t]), m)
    # both terms scale with r; compare against the larger of them
    size = abs(math.tan(math.pi * m.alpha / 2)) * (f["sigma"][0] + np.abs(m.points @ t) @ m.weights)
    # values below the normal float range carry no relative precision
    assert abs(f["mu_MM"][1] - r * f["mu_MM"][0]) <= 1e-12 * r * size + r * np.finfo(float).tiny


@CASES
@given(data=st.data())
def test_skew_bound(data):
    m = data.draw(measures())
    t = directions(m.dim, data.draw)
    f = functionals_many(t, m)
    assert abs(f["beta"][0]) <= 1
    assert abs(f["beta_B"][0]) <= 1


@CASES
@given(data=st.data())
def test_representation_round_trip(data):
    m = data.draw(measures(alpha=st.floats(0.05, 1.95).filter(lambda a: abs(a - 1) > 1e-3)))
    back = convert_measure(convert_measure(m, "M"), "A")
    c = np.abs(math.tan(math.pi * m.alpha / 2) * m.first_moment)
    bound = 4 * np.finfo(float).eps * (np.abs(m.shift) + c)
    assert back.rep == "A"
    assert np.all(np.abs(back.shift - m.shift) <= bound)
    np.testing.assert_array_equal(back.points, m.points)
