"""The complex kernel ``h^n(x; alpha, beta)`` in Zolotarev's (B) parameterization.

``h^n`` is ``1/pi`` times the integral over ``(0, inf)`` of
``(iz)^n exp(izx + psi(z; alpha, -beta))``.  Its real part for ``n = 0`` is the
(B) density; higher ``n`` are derivatives in ``x``, and the imaginary part is
what even-dimensional projections need.

The finite-interval evaluation integrates along the curve on which the
exponent is real, parameterised by the angle ``(pi/2) phi`` of ``z``.  Two
facts that the closed formulas below depend on:

* for ``alpha > 1`` the curve is traversed from infinity to the origin as the
  angle increases, so the angular integral carries a factor ``-1``;
* whenever the curve ends on the imaginary axis at ``|z| = tau`` instead of
  at the origin, the segment between the two contributes a purely imaginary
  term.  This happens for ``beta = 1`` with ``alpha <= 1`` and for
  ``beta = -1`` with ``alpha > 1``.  For ``alpha < 1, beta = -1`` the curve
  collapses onto the imaginary axis and the whole value is that ray integral.

:func:`h_n_direct` integrates the defining integral along a straight ray and
shares no code with the finite-interval path; it is the verification oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DomainError
from .quad import (
    DEFAULT_TOL,
    BatchOutcome,
    ToleranceSpec,
    integrate_batch,
    integrate_damped_tail_batch,
    tail_cutoff,
)

__all__ = [
    "KernelParams",
    "KernelResult",
    "FINITE_INTERVAL",
    "DIRECT_FALLBACK",
    "CLOSED_FORM",
    "METHOD_NAMES",
    "kappa_of",
    "u_alpha",
    "u_one",
    "contour_radius",
    "contour_radius_deriv",
    "tau_of",
    "v_weight",
    "w_weight",
    "psi_direct",
    "h_n",
    "h_n_direct",
    "h_n_batch",
    "h_n_direct_batch",
]

FINITE_INTERVAL, DIRECT_FALLBACK, CLOSED_FORM = 0, 1, 2
METHOD_NAMES = {FINITE_INTERVAL: "finite-interval", DIRECT_FALLBACK: "direct-fallback",
                CLOSED_FORM: "closed-form"}

HALF_PI = 0.5 * math.pi
#: |alpha - 1| below which the finite-interval path hands over to the oracle
ALPHA_ONE_BAND = 5e-3
#: |beta| this close to 1 is treated as exactly +-1
BETA_EDGE = 1e-10


def kappa_of(alpha: float) -> float:
    """``K(alpha) = alpha - 1 + sign(1 - alpha)``: ``alpha`` below 1, ``alpha - 2`` above."""
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if alpha == 1:
        raise DomainError("K(alpha) is undefined at alpha = 1")
    return alpha if alpha < 1 else alpha - 2.0


@dataclass(frozen=True)
class KernelParams:
    """Stability index and (B)-skewness of a kernel evaluation."""

    alpha: float
    beta: float
    kappa: float = field(init=False)
    theta: float = field(init=False)

    def __post_init__(self):
        if not 0 < self.alpha < 2:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")
        if not abs(self.beta) <= 1:
            raise DomainError(f"beta must lie in [-1, 1], got {self.beta}")
        if self.alpha == 1:
            kappa = theta = math.nan
        else:
            kappa = kappa_of(self.alpha)
            theta = self.beta * kappa / self.alpha
        object.__setattr__(self, "kappa", kappa)
        object.__setattr__(self, "theta", theta)


@dataclass(frozen=True)
class KernelResult:
    value: complex
    err_est: float
    method: str
    converged: bool = True


def u_alpha(phi, params: KernelParams):
    """Zolotarev's ``U_alpha(phi; theta)`` on ``-theta < phi < 1``.

    ``(sin(pi alpha (phi+theta)/2) / cos(pi phi/2))**(alpha/(1-alpha))
    * cos(pi ((alpha-1) phi + alpha theta)/2) / cos(pi phi/2)``
    """
    a, th = params.alpha, params.theta
    if a == 1:
        raise DomainError("u_alpha needs alpha != 1; use u_one")
    phi = np.asarray(phi, dtype=float)
    if np.any(~((phi > -th) & (phi < 1))):
        raise DomainError(f"phi must lie in ({-th}, 1)")
    cos_phi = np.cos(HALF_PI * phi)
    ratio = np.sin(HALF_PI * a * (phi + th)) / cos_phi
    out = ratio ** (a / (1 - a)) * np.cos(HALF_PI * ((a - 1) * phi + a * th)) / cos_phi
    return out[()] if out.ndim == 0 else out


def u_one(phi, beta: float):
    """``U_1(phi; beta) = (pi/2) (1 + beta phi)/cos(pi phi/2) * exp((pi/2)(phi + 1/beta) tan(pi phi/2))``."""
    if not beta > 0:
        raise DomainError(f"u_one needs beta > 0, got {beta}")
    phi = np.asarray(phi, dtype=float)
    if np.any(~((phi > -1) & (phi < 1))):
        raise DomainError("phi must lie in (-1, 1)")
    arg = HALF_PI * phi
    out = HALF_PI * (1 + beta * phi) / np.cos(arg) * np.exp(HALF_PI * (phi + 1 / beta) * np.tan(arg))
    return out[()] if out.ndim == 0 else out


def _check_finite(value, what, phi):
    if not np.all(np.isfinite(value)):
        raise DomainError(f"{what} is not finite at angle {phi}")


def contour_radius(phi, x: float, params: KernelParams):
    """Modulus ``r`` of the real-exponent contour at angle ``phi`` (radians)."""
    a = params.alpha
    phi = np.asarray(phi, dtype=float)
    if a == 1:
        if not params.beta > 0:
            raise DomainError("contour_radius at alpha = 1 needs beta > 0")
        b = params.beta
        with np.errstate(over="ignore"):
            out = np.exp(-x / b + (phi + HALF_PI / b) * np.tan(phi))
    else:
        if not x > 0:
            raise DomainError(f"contour_radius needs x > 0 for alpha != 1, got {x}")
        s = np.sin(a * (phi + HALF_PI * params.theta))
        with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
            out = (s / (x * np.cos(phi))) ** (1 / (1 - a))
    _check_finite(out, "contour radius", phi)
    return out[()] if out.ndim == 0 else out


def _log_radius_slope(phi, params):
    """``r'/r`` at angle ``phi``."""
    a = params.alpha
    if a == 1:
        return np.tan(phi) + (phi + HALF_PI / params.beta) / np.cos(phi) ** 2
    return (a / np.tan(a * (phi + HALF_PI * params.theta)) + np.tan(phi)) / (1 - a)


def contour_radius_deriv(phi, x: float, params: KernelParams):
    """Derivative of :func:`contour_radius` with respect to the angle."""
    phi = np.asarray(phi, dtype=float)
    out = contour_radius(phi, x, params) * _log_radius_slope(phi, params)
    _check_finite(out, "contour radius derivative", phi)
    return out[()] if out.ndim == 0 else out


def tau_of(x: float, params: KernelParams) -> float:
    """Distance from the origin at which the contour meets the imaginary axis."""
    a = params.alpha
    if a == 1:
        return math.exp(-x - 1)
    if not x > 0:
        raise DomainError(f"tau needs x > 0 for alpha != 1, got {x}")
    return (a / x) ** (1 / (1 - a))


def _angle_factors(phi, n):
    c = HALF_PI * (n + 1) * (np.asarray(phi, dtype=float) + 1)
    return np.sin(c), np.cos(c)


def v_weight(phi, n: int, x: float, params: KernelParams):
    """``V_n(phi) = r^n (r' sin c + r cos c)`` with ``c = (pi/2)(n+1)(phi+1)``, r at ``(pi/2) phi``."""
    ang = HALF_PI * np.asarray(phi, dtype=float)
    r = contour_radius(ang, x, params)
    rp = contour_radius_deriv(ang, x, params)
    s, c = _angle_factors(phi, n)
    return r ** n * (rp * s + r * c)


def w_weight(phi, n: int, x: float, params: KernelParams):
    """``W_n(phi) = r^n (r sin c - r' cos c)``; companion of :func:`v_weight`."""
    ang = HALF_PI * np.asarray(phi, dtype=float)
    r = contour_radius(ang, x, params)
    rp = contour_radius_deriv(ang, x, params)
    s, c = _angle_factors(phi, n)
    return r ** n * (r * s - rp * c)


def psi_direct(z, params: KernelParams):
    """Log characteristic function ``psi(z; alpha, beta)`` continued to ``Re z > 0``.

    ``-z**alpha exp(-i pi theta alpha/2)`` for ``alpha != 1`` and
    ``-z (pi/2 + i beta log z)`` at ``alpha = 1`` (principal branches).
    """
    z = np.asarray(z, dtype=complex)
    if params.alpha == 1:
        out = -z * (HALF_PI + 1j * params.beta * np.log(z))
    else:
        out = -(z ** params.alpha) * np.exp(-0.5j * math.pi * params.theta * params.alpha)
    return out[()] if out.ndim == 0 else out


# ---------------------------------------------------------------------------
# batched finite-interval evaluation

def _monotone_root(g, lo, hi, target, increasing, iters=60):
    lo, hi = lo.copy(), hi.copy()
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        with np.errstate(all="ignore"):
            val = g(mid)
        below = (val < target) if increasing else (val > target)
        lo = np.where(below, mid, lo)
        hi = np.where(below, hi, mid)
    return 0.5 * (lo + hi)


#: panel ends where the damping exponent W crosses these levels; the integrand
#: grows like W^(n+1) below W = 1, so the low marks must reach double precision
_LOG_W_MARKS = tuple(math.log(w) for w in (1e-16, 1e-12, 1e-9, 1e-6, 1e-4, 1e-3, 1e-2, 1e-1,
                                           1.0, 10.0, 1e2, 1e3))


def _seed_breakpoints(log_w, lo, hi, increasing):
    pts = [_monotone_root(log_w, lo, hi, t, increasing) for t in _LOG_W_MARKS]
    for frac in (0.25, 0.5, 0.75):
        pts.append(lo + frac * (hi - lo))
    return np.column_stack(pts)


def _cot_minus_inv(y):
    """``cot(y) - 1/y`` without cancellation for small ``y``."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 0.2
    ys = np.where(small, y, 0.0)
    y2 = ys * ys
    series = -ys * (1 / 3 + y2 * (1 / 45 + y2 * (2 / 945 + y2 * (1 / 4725 + y2 * 2 / 93555))))
    with np.errstate(all="ignore"):
        direct = 1 / np.tan(y) - 1 / y
    return np.where(small, series, direct)


def _y_minus_sin(y):
    """``y - sin(y)`` without cancellation for small ``y``."""
    y = np.asarray(y, dtype=float)
    small = np.abs(y) < 0.2
    ys = np.where(small, y, 0.0)
    y2 = ys * ys
    series = ys * y2 * (1 / 6 - y2 * (1 / 120 - y2 * (1 / 5040 - y2 * (1 / 362880 - y2 / 39916800))))
    return np.where(small, series, y - np.sin(y))


def _half_angle_trig(phi):
    """``cos(pi phi/2)`` and ``tan(pi phi/2)`` accurate near ``phi = +-1``."""
    q = HALF_PI * (1 - np.abs(phi))
    cos_half = np.sin(q)
    tan_half = np.sign(phi) * np.cos(q) / cos_half
    return cos_half, tan_half


def _alpha_geometry(phi, th, edge, alpha):
    """``log(S/C)``, ``log`` of the cosine factor of ``U_alpha``, ``log C`` and ``r'/r``.

    ``S = sin(pi alpha (phi+theta)/2)`` and ``C = cos(pi phi/2)``.  ``edge``
    marks problems whose contour ends on the imaginary axis; there the end
    point terms are rewritten in the distance to that end to avoid cancelling
    poles.
    """
    cos_half, tan_half = _half_angle_trig(phi)
    arg = HALF_PI * alpha * (phi + th)
    sin_arg = np.sin(arg)
    cos_factor = np.cos(HALF_PI * ((alpha - 1) * phi + alpha * th))
    slope = (alpha / np.tan(arg) + tan_half) / (1 - alpha)
    if edge.any():
        if alpha < 1:
            # theta = 1, contour ends at phi = -1
            d = HALF_PI * (1 + phi)
            e_sin = np.sin(alpha * d)
            e_cos = np.sin(HALF_PI * (1 - alpha) * (1 + phi))
            e_slope = (alpha * _cot_minus_inv(alpha * d) - _cot_minus_inv(d)) / (1 - alpha)
        else:
            # theta = 2/alpha - 1, contour ends at phi = 1
            d = HALF_PI * (1 - phi)
            e_sin = np.sin(alpha * d)
            e_cos = np.sin(HALF_PI * (alpha - 1) * (1 - phi))
            e_slope = (_cot_minus_inv(d) - alpha * _cot_minus_inv(alpha * d)) / (1 - alpha)
        sin_arg = np.where(edge, e_sin, sin_arg)
        cos_factor = np.where(edge, e_cos, cos_factor)
        slope = np.where(edge, e_slope, slope)
    log_cos_half = np.log(cos_half)
    return np.log(sin_arg) - log_cos_half, np.log(cos_factor), log_cos_half, slope


def _combine(log_w, log_r, slope, phi, n, scale):
    w = np.exp(log_w)
    expo = np.where(np.isposinf(w) | np.isneginf(log_r), -np.inf, -w + (n + 1) * log_r)
    amp = np.exp(expo)
    s, c = _angle_factors(phi, n)
    val = amp * ((slope * s + c) + 1j * (s - slope * c))
    return np.where(amp > 0, scale * val, 0.0)


def _angular_alpha(x, theta, edge, n, alpha, tol):
    """Finite-interval part for ``alpha != 1``: ``(1/2) int_{-theta}^1 e^{-W} (V_n + i W_n)``."""
    orient = 1.0 if alpha < 1 else -1.0
    lx = np.log(x)
    p_r = 1.0 / (1 - alpha)
    p_u = alpha / (1 - alpha)
    p_x = alpha / (alpha - 1)

    def pieces(phi, th, lxx, ed):
        log_ratio, log_cosf, log_c, slope = _alpha_geometry(phi, th, ed, alpha)
        log_w = p_x * lxx + p_u * log_ratio + log_cosf - log_c
        log_r = p_r * (log_ratio - lxx)
        return log_w, log_r, slope

    def integrand(phi, idx):
        with np.errstate(all="ignore"):
            log_w, log_r, slope = pieces(phi, theta[idx], lx[idx], edge[idx])
            return _combine(log_w, log_r, slope, phi, n, 0.5 * orient)

    lo = -theta
    hi = np.ones_like(theta)
    bps = _seed_breakpoints(lambda p: pieces(p, theta, lx, edge)[0], lo, hi, increasing=alpha < 1)
    return integrate_batch(integrand, lo, hi, tol, bps)


def _angular_one(x, beta, n, tol):
    """Finite-interval part for ``alpha = 1``, ``beta > 0``."""
    log_half_pi = math.log(HALF_PI)

    def pieces(phi, b, xx):
        cos_half, tan_half = _half_angle_trig(phi)
        shift = HALF_PI * phi + HALF_PI / b
        log_r = -xx / b + shift * tan_half
        log_w = log_r + log_half_pi + np.log1p(b * phi) - np.log(cos_half)
        slope = tan_half + shift / cos_half ** 2
        edge = b == 1
        if np.any(edge):
            # beta = 1: shift * tan -> -1 and the slope's poles cancel at phi = -1
            d = HALF_PI * (1 + phi)
            sd = np.sin(d)
            e_log_r = -xx - d * np.cos(d) / sd
            e_slope = _y_minus_sin(2 * d) / (2 * sd * sd)
            log_w = np.where(edge, log_w - log_r + e_log_r, log_w)
            log_r = np.where(edge, e_log_r, log_r)
            slope = np.where(edge, e_slope, slope)
        return log_w, log_r, slope

    def integrand(phi, idx):
        with np.errstate(all="ignore"):
            log_w, log_r, slope = pieces(phi, beta[idx], x[idx])
            return _combine(log_w, log_r, slope, phi, n, 0.5)

    lo = -np.ones_like(beta)
    hi = np.ones_like(beta)
    with np.errstate(all="ignore"):
        bps = _seed_breakpoints(lambda p: pieces(p, beta, x)[0], lo, hi, increasing=True)
    return integrate_batch(integrand, lo, hi, tol, bps)


def _cut_tol(tol):
    return 0.5 * tol.abs_tol if tol.abs_tol > 0 else 1e-300


def _tighter_envelope(c, p, lin, n, tol):
    """Per problem, ``exp(-c t^p)`` or ``exp(-lin t)``, whichever truncates sooner.

    Both must bound the integrand; ``lin <= 0`` means no linear bound.
    """
    c = np.broadcast_to(np.asarray(c, dtype=float), lin.shape).copy()
    p = np.broadcast_to(np.asarray(p, dtype=float), lin.shape).copy()
    eps = _cut_tol(tol)
    for i in np.flatnonzero(lin > 0):
        if (tail_cutoff(lin[i], 1.0, eps, 1.0 / math.pi, float(n))
                < tail_cutoff(c[i], p[i], eps, 1.0 / math.pi, float(n))):
            c[i], p[i] = lin[i], 1.0
    return c, p


def _segment_reach(x, n, alpha, tol):
    """Where the segment integrand has dropped below the tolerance for good.

    On ``(0, tau)`` the exponent is at most ``-(1-alpha) r^alpha`` (alpha < 1),
    ``-r`` (alpha = 1) or ``-x (1 - 1/alpha) r`` (alpha > 1).
    """
    if alpha < 1:
        c, p = np.full(x.size, 1 - alpha), alpha
    elif alpha == 1:
        c, p = np.ones(x.size), 1.0
    else:
        c, p = x * (1 - 1 / alpha), 1.0
    eps = _cut_tol(tol)
    return np.array([tail_cutoff(ci, p, eps, 1.0 / math.pi, float(n)) for ci in c])


def _segment(x, tau, n, alpha, tol):
    """``(1/pi) int_0^tau exp(E(r)) r^n dr`` along the imaginary-axis segment.

    ``E`` is the real exponent on the axis: ``xr - r^alpha`` (alpha < 1),
    ``-xr + r^alpha`` (alpha > 1) or ``xr + r log r`` (alpha = 1).
    """

    def integrand(r, idx):
        xx = x[idx]
        with np.errstate(all="ignore"):
            lr = np.log(r)
            if alpha < 1:
                expo = xx * r - np.exp(alpha * lr)
            elif alpha > 1:
                expo = -xx * r + np.exp(alpha * lr)
            else:
                expo = xx * r + r * lr
            return np.where(r > 0, np.exp(expo + n * lr) / math.pi, 0.0)

    fracs = 2.0 ** -np.arange(1, 12)
    tau = np.minimum(tau, _segment_reach(x, n, alpha, tol))
    live = tau > 0
    if live.all():
        bps = tau[:, None] * fracs[None, :]
        return integrate_batch(integrand, np.zeros_like(tau), tau, tol, bps)
    # tau underflows for far-out x; the segment then carries no mass
    m = tau.size
    out = BatchOutcome(np.zeros(m), np.zeros(m), np.zeros(m, dtype=int), np.ones(m, dtype=bool))
    if live.any():
        part = _segment(x[live], tau[live], n, alpha, tol)
        out.value[live], out.err_est[live], out.converged[live] = part.value, part.err_est, part.converged
    return out


def _imaginary_ray(x, n, alpha, tol):
    """``((-1)^n/pi) int_0^inf w^n exp(-w x - w^alpha) dw`` (alpha < 1, beta = -1)."""
    sign = (-1.0) ** n / math.pi

    def integrand(w, idx):
        with np.errstate(all="ignore"):
            return np.where(w > 0, sign * np.exp(n * np.log(w) - w * x[idx] - w ** alpha), 0.0)

    env_c, env_p = _tighter_envelope(1.0, alpha, x, n, tol)
    return integrate_damped_tail_batch(integrand, env_c, env_p, tol, 1.0 / math.pi, float(n))


@dataclass
class KernelBatch:
    value: np.ndarray
    err_est: np.ndarray
    converged: np.ndarray
    method: np.ndarray


def _snap_beta(beta):
    beta = np.clip(beta, -1.0, 1.0)
    return np.where(np.abs(beta) >= 1 - BETA_EDGE, np.sign(beta), beta)


def h_n_batch(x, beta, n: int, alpha: float, tol: ToleranceSpec = DEFAULT_TOL,
              fallback: bool = True) -> KernelBatch:
    """Vectorised :func:`h_n` over arrays ``x`` and ``beta`` at fixed ``n`` and ``alpha``.

    With ``fallback`` set, ``|alpha - 1| < 0.005`` is routed to the oracle.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    x, beta = np.broadcast_arrays(x, beta)
    x, beta = x.copy(), _snap_beta(beta)
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if np.any(np.abs(beta) > 1):
        raise DomainError("beta must lie in [-1, 1]")
    if alpha == 1:
        if np.any(~(beta > 0)):
            raise DomainError("h_n at alpha = 1 needs beta > 0")
    elif np.any(~(x > 0)):
        raise DomainError("h_n for alpha != 1 needs x > 0")
    m = x.size
    value = np.zeros(m, dtype=complex)
    err = np.zeros(m)
    conv = np.ones(m, dtype=bool)
    method = np.full(m, FINITE_INTERVAL, dtype=np.int8)
    if m == 0:
        return KernelBatch(value, err, conv, method)

    if fallback and alpha != 1 and abs(alpha - 1) < ALPHA_ONE_BAND:
        d = h_n_direct_batch(x, beta, n, alpha, tol)
        return KernelBatch(d.value, d.err_est, d.converged, np.full(m, DIRECT_FALLBACK, dtype=np.int8))

    def merge(mask, out, scale=1.0):
        value[mask] += scale * out.value
        err[mask] += out.err_est
        conv[mask] &= out.converged

    if alpha == 1:
        merge(slice(None), _angular_one(x, beta, n, tol))
        edge = beta == 1
        if edge.any():
            xe = x[edge]
            with np.errstate(over="ignore"):
                tau = np.exp(-xe - 1)
            merge(edge, _segment(xe, tau, n, 1.0, tol), -1j)
        return KernelBatch(value, err, conv, method)

    kappa = kappa_of(alpha)
    collapsed = (beta == -1) if alpha < 1 else np.zeros(m, dtype=bool)
    regular = ~collapsed
    if regular.any():
        edge_r = (beta[regular] == 1) if alpha < 1 else (beta[regular] == -1)
        merge(regular, _angular_alpha(x[regular], beta[regular] * kappa / alpha, edge_r, n, alpha, tol))
    if collapsed.any():
        merge(collapsed, _imaginary_ray(x[collapsed], n, alpha, tol), 1j)
    edge = (beta == 1) if alpha < 1 else (beta == -1)
    if edge.any():
        xe = x[edge]
        with np.errstate(over="ignore"):
            tau = (alpha / xe) ** (1 / (1 - alpha))
        if alpha < 1:
            merge(edge, _segment(xe, tau, n, alpha, tol), -1j)
        else:
            merge(edge, _segment(xe, tau, n, alpha, tol), 1j * (-1.0) ** n)
    return KernelBatch(value, err, conv, method)


def h_n(x: float, n: int, params: KernelParams, tol: ToleranceSpec = DEFAULT_TOL) -> KernelResult:
    """Finite-interval evaluation of ``h^n(x; alpha, beta)``.

    Requires ``x > 0`` when ``alpha != 1`` and ``beta > 0`` when ``alpha = 1``.
    """
    out = h_n_batch([x], [params.beta], n, params.alpha, tol)
    return KernelResult(complex(out.value[0]), float(out.err_est[0]),
                        METHOD_NAMES[int(out.method[0])], bool(out.converged[0]))


# ---------------------------------------------------------------------------
# oracle: the defining integral along a straight ray

def _ray_angle(x, psi_phase, alpha):
    """Ray angle keeping both ``exp(izx)`` and ``exp(psi)`` decaying on the whole sector."""
    sgn = np.where(x > 0, 1.0, np.where(x < 0, -1.0, -np.sign(psi_phase)))
    sgn = np.where(sgn == 0, 1.0, sgn)
    limit = np.minimum(HALF_PI, (HALF_PI - sgn * psi_phase) / alpha)
    return 0.5 * sgn * limit


def h_n_direct_batch(x, beta, n: int, alpha: float, tol: ToleranceSpec = DEFAULT_TOL,
                     ray_angle=None) -> BatchOutcome:
    """Oracle for :func:`h_n_batch`; integrates the defining integral on ``arg z = omega``.

    For ``alpha != 1`` the default ray is tilted towards the half plane where
    ``exp(izx)`` decays (by Cauchy's theorem the value is unchanged); at
    ``alpha = 1`` the real axis is used.
    """
    x = np.atleast_1d(np.asarray(x, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    x, beta = np.broadcast_arrays(x, beta)
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n}")
    if alpha == 1:
        omega = np.zeros(x.size) if ray_angle is None else np.broadcast_to(ray_angle, x.shape).astype(float)
        rot = np.exp(1j * omega)

        def integrand(t, idx):
            z = t * rot[idx]
            with np.errstate(all="ignore"):
                logz = np.log(z)
                val = np.exp(n * (logz + 0.5j * math.pi) + 1j * z * x[idx]
                             - HALF_PI * z + 1j * beta[idx] * z * logz) * rot[idx] / math.pi
            return np.where(t > 0, val, 0.0)

        env = np.full(x.size, HALF_PI) * np.cos(omega)
        return integrate_damped_tail_batch(integrand, env, 1.0, tol, 1.0 / math.pi, float(n))

    kappa = kappa_of(alpha)
    theta = beta * kappa / alpha
    phase = 0.5 * math.pi * theta * alpha
    omega = _ray_angle(x, phase, alpha) if ray_angle is None else np.broadcast_to(ray_angle, x.shape).astype(float)
    decay = np.cos(alpha * omega + phase)
    if np.any(decay <= 0):
        raise DomainError("ray angle leaves the sector where the integrand decays")
    rot = np.exp(1j * omega)
    spin = np.exp(1j * (alpha * omega + phase))

    def integrand(t, idx):
        with np.errstate(all="ignore"):
            lt = np.log(t)
            z = t * rot[idx]
            val = np.exp(n * (lt + 1j * (omega[idx] + HALF_PI)) + 1j * z * x[idx]
                         - np.exp(alpha * lt) * spin[idx]) * rot[idx] / math.pi
        return np.where(t > 0, val, 0.0)

    # exp(izx) also decays along a tilted ray; use whichever envelope cuts off sooner
    env_c, env_p = _tighter_envelope(decay, alpha, x * np.sin(omega), n, tol)
    return integrate_damped_tail_batch(integrand, env_c, env_p, tol, 1.0 / math.pi, float(n))


def h_n_direct(x: float, n: int, params: KernelParams, tol: ToleranceSpec = DEFAULT_TOL,
               ray_angle: float | None = None) -> complex:
    """Oracle value of ``h^n(x; alpha, beta)`` from its defining integral."""
    if params.alpha == 1 and not params.beta > 0:
        raise DomainError("h_n_direct at alpha = 1 needs beta > 0")
    out = h_n_direct_batch([x], [params.beta], n, params.alpha, tol, ray_angle)
    return complex(out.value[0])
