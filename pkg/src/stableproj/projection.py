"""Projection functions ``g_{alpha,d}(v, beta)`` in the (A), (B) and (M) forms.

Each form is ``(2 pi)^{-d} Re int_0^inf u^{d-1} exp(E(u)) du`` where

* (A): ``E = ivu - u^alpha (1 + i beta tan(pi alpha/2))``, and at ``alpha = 1``
  ``E = ivu - u + i (2/pi) beta u log u``;
* (B): ``E = ivu - u^alpha exp(i pi K(alpha) beta/2)``, and at ``alpha = 1``
  ``E = ivu - (pi/2) u + i beta u log u``;
* (M): the (A) integrand with ``v`` replaced by ``v + beta tan(pi alpha/2)``; it
  coincides with (A) at ``alpha = 1``.

:func:`g_eval_many` maps every form onto the kernel ``h^{d-1}`` and uses exact
Gamma-function values where the kernel is not defined.  :func:`g_direct_many`
integrates the defining integral along a tilted ray and is the oracle.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import special

from .errors import DomainError
from .kernel import (
    ALPHA_ONE_BAND,
    CLOSED_FORM,
    DIRECT_FALLBACK,
    FINITE_INTERVAL,
    HALF_PI,
    METHOD_NAMES,
    h_n_batch,
    kappa_of,
)
from .quad import DEFAULT_TOL, ToleranceSpec, integrate_damped_tail_batch, tail_cutoff

__all__ = [
    "REPRESENTATIONS",
    "GQuery",
    "GResult",
    "GBatch",
    "BConversion",
    "beta_to_B",
    "b_conversion",
    "g_closed_form",
    "g_eval",
    "g_eval_detailed",
    "g_eval_many",
    "g_direct",
    "g_direct_many",
]

REPRESENTATIONS = ("A", "B", "M")

#: below this ``|x|`` (``alpha != 1``) the kernel hands over to the oracle
SMALL_ABSCISSA = 1e-2
#: below this ``|beta|`` at ``alpha = 1`` the kernel hands over to the oracle
SMALL_BETA_ONE = 5e-2
#: ``|beta|`` below this is treated as exactly zero
BETA_ZERO = 1e-12


@dataclass(frozen=True)
class GQuery:
    """A single evaluation point of a projection function."""

    v: float
    beta: float
    alpha: float
    d: int
    rep: str = "A"

    def __post_init__(self):
        _check_common(self.alpha, self.d, self.rep)
        if not abs(self.beta) <= 1:
            raise DomainError(f"beta must lie in [-1, 1], got {self.beta}")
        if not math.isfinite(self.v):
            raise DomainError(f"v must be finite, got {self.v}")


@dataclass(frozen=True)
class GResult:
    value: float
    err_est: float
    method: str
    converged: bool = True


@dataclass
class GBatch:
    """Vectorised results; ``method`` holds the integer tags of :mod:`stableproj.kernel`."""

    value: np.ndarray
    err_est: np.ndarray
    converged: np.ndarray
    method: np.ndarray

    def __getitem__(self, i) -> GResult:
        return GResult(float(self.value[i]), float(self.err_est[i]),
                       METHOD_NAMES[int(self.method[i])], bool(self.converged[i]))

    def __len__(self):
        return self.value.size


@dataclass(frozen=True)
class BConversion:
    """Quantities that carry an (A) or (M) query over to the (B) form."""

    beta_B: float
    theta_B: float
    scale: float
    x: float
    y: float = field(default=math.nan)


def _check_common(alpha, d, rep):
    if not 0 < alpha < 2:
        raise DomainError(f"alpha must lie in (0, 2), got {alpha}")
    if int(d) != d or d < 1:
        raise DomainError(f"d must be a positive integer, got {d}")
    if rep not in REPRESENTATIONS:
        raise DomainError(f"rep must be one of {REPRESENTATIONS}, got {rep!r}")


def beta_to_B(beta, alpha: float):
    """(A) skewness to (B) skewness: ``(2/(pi K)) arctan(beta tan(pi alpha/2))``.

    >>> float(beta_to_B(1.0, 1.5))
    1.0
    """
    kappa = kappa_of(alpha)
    beta = np.asarray(beta, dtype=float)
    out = np.clip(np.arctan(beta * math.tan(HALF_PI * alpha)) / (HALF_PI * kappa), -1.0, 1.0)
    return out[()] if out.ndim == 0 else out


def b_conversion(q: GQuery) -> BConversion:
    """Conversion data for an (A) or (M) query."""
    if q.rep == "B":
        raise DomainError("b_conversion applies to rep A or M")
    if q.alpha == 1:
        return BConversion(q.beta, math.nan, HALF_PI, HALF_PI * q.v,
                           HALF_PI * q.v + q.beta * math.log(HALF_PI))
    kappa = kappa_of(q.alpha)
    beta_b = float(beta_to_B(q.beta, q.alpha))
    theta_b = beta_b * kappa / q.alpha
    scale = math.cos(HALF_PI * q.alpha * theta_b) ** (1 / q.alpha)
    v = q.v if q.rep == "A" else q.v + math.tan(HALF_PI * q.alpha * theta_b)
    return BConversion(beta_b, theta_b, scale, scale * v)


def g_closed_form(q: GQuery) -> float | None:
    """Exact value where one is available, otherwise ``None``.

    Covered: ``v = 0`` for ``alpha != 1`` (after the (M) shift) and
    ``beta = 0`` at ``alpha = 1``.
    """
    value, ok = _closed_forms(np.array([q.v], dtype=float), np.array([q.beta], dtype=float),
                              q.alpha, q.d, q.rep)
    return float(value[0]) if ok[0] else None


def _closed_forms(v, beta, alpha, d, rep):
    """Exact values and the mask where they apply."""
    norm = (2 * math.pi) ** -d
    if alpha == 1:
        ok = np.abs(beta) < BETA_ZERO
        lam = HALF_PI if rep == "B" else 1.0
        value = math.gamma(d) * norm * np.real((lam - 1j * v) ** (-float(d)))
        return np.where(ok, value, np.nan), ok
    t = math.tan(HALF_PI * alpha)
    if rep == "B":
        coef = np.exp(1j * HALF_PI * kappa_of(alpha) * beta)
        shifted = v
    else:
        coef = 1 + 1j * beta * t
        shifted = v + beta * t if rep == "M" else v
    ok = shifted == 0
    value = math.exp(special.gammaln(d / alpha)) / alpha * norm * np.real(coef ** (-d / alpha))
    return np.where(ok, value, np.nan), ok


def _kernel_g_b(x, b, alpha, d, tol):
    """(B) form through ``h^{d-1}`` for ``alpha != 1`` and ``x != 0``."""
    s = np.sign(x)
    k = h_n_batch(np.abs(x), b * s, d - 1, alpha, tol, fallback=False)
    factor = 1.0 / (2 ** d * (math.pi * 1j) ** (d - 1))
    return np.real(k.value * factor), k.err_est * abs(factor), k.converged


def _kernel_g_b_one(y, b, d, tol):
    """(B) form at ``alpha = 1`` for ``beta != 0``."""
    s = np.sign(b)
    k = h_n_batch(y * s, np.abs(b), d - 1, 1.0, tol, fallback=False)
    factor = 1.0 / (2 ** d * (math.pi * 1j) ** (d - 1))
    return np.real(k.value * factor), k.err_est * abs(factor), k.converged


def g_eval_many(v, beta, alpha: float, d: int, rep: str = "A",
                tol: ToleranceSpec = DEFAULT_TOL) -> GBatch:
    """Evaluate ``g`` over arrays ``v`` and ``beta`` (broadcast) at fixed ``alpha``, ``d``, ``rep``.

    Parameters
    ----------
    v, beta : array_like
        Abscissae and skewness values in the ``rep`` parameterisation.
    alpha : float
        Stability index in ``(0, 2)``.
    d : int
        Dimension; the kernel derivative order is ``d - 1``.
    rep : {"A", "B", "M"}
    tol : ToleranceSpec

    Returns
    -------
    GBatch
        Values with error estimates, convergence flags and method tags.
    """
    _check_common(alpha, d, rep)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    v, beta = np.broadcast_arrays(v, beta)
    v = v.ravel().copy()
    beta = np.clip(beta.ravel(), -1.0, 1.0)
    if np.any(~np.isfinite(v)) or np.any(~np.isfinite(beta)):
        raise DomainError("v and beta must be finite")
    beta = np.where(np.abs(beta) < BETA_ZERO, 0.0, beta)
    m = v.size
    value = np.zeros(m)
    err = np.zeros(m)
    conv = np.ones(m, dtype=bool)
    method = np.full(m, FINITE_INTERVAL, dtype=np.int8)
    if m == 0:
        return GBatch(value, err, conv, method)

    closed, ok = _closed_forms(v, beta, alpha, d, rep)
    value[ok] = closed[ok]
    method[ok] = CLOSED_FORM
    todo = ~ok

    if alpha == 1:
        if rep == "B":
            y, scale_d = v, 1.0
        else:
            y, scale_d = HALF_PI * v + beta * math.log(HALF_PI), HALF_PI ** d
        direct = todo & (np.abs(beta) < SMALL_BETA_ONE)
        kern = todo & ~direct
        if kern.any():
            val, e, c = _kernel_g_b_one(y[kern], beta[kern], d, tol)
            value[kern], err[kern], conv[kern] = scale_d * val, scale_d * e, c
    else:
        if rep == "B":
            x, b, scale_d = v, beta, np.ones(m)
        else:
            t = math.tan(HALF_PI * alpha)
            b = beta_to_B(beta, alpha)
            cos_b = np.cos(HALF_PI * kappa_of(alpha) * b)
            scale = cos_b ** (1 / alpha)
            x = scale * (v + beta * t if rep == "M" else v)
            scale_d = scale ** d
        direct = todo & ((abs(alpha - 1) < ALPHA_ONE_BAND) | (np.abs(x) < SMALL_ABSCISSA))
        kern = todo & ~direct
        if kern.any():
            val, e, c = _kernel_g_b(x[kern], b[kern], alpha, d, tol)
            value[kern], err[kern], conv[kern] = scale_d[kern] * val, scale_d[kern] * e, c

    if direct.any():
        out = g_direct_many(v[direct], beta[direct], alpha, d, rep, tol)
        value[direct], err[direct], conv[direct] = out.value, out.err_est, out.converged
        method[direct] = DIRECT_FALLBACK
    return GBatch(value, err, conv, method)


def g_eval_detailed(q: GQuery, tol: ToleranceSpec = DEFAULT_TOL) -> GResult:
    """:func:`g_eval` together with its error estimate and method tag."""
    return g_eval_many([q.v], [q.beta], q.alpha, q.d, q.rep, tol)[0]


def g_eval(q: GQuery, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Value of the projection function for one query.

    >>> round(g_eval(GQuery(v=0.0, beta=0.0, alpha=1.0, d=1)), 7)
    0.1591549
    """
    return g_eval_detailed(q, tol).value


# ---------------------------------------------------------------------------
# oracle

def _ray_integral(v, coef, alpha, d, tol):
    """``(2 pi)^{-d} Re int_0^inf u^{d-1} exp(ivu - coef u^alpha) du`` along a tilted ray.

    ``coef`` has positive real part.  The ray ``u = t e^{i omega}`` leans into
    the half plane where ``exp(ivu)`` decays while keeping ``Re(coef u^alpha)``
    positive, so the integrand loses its oscillation.
    """
    chi = np.angle(coef)
    mod = np.abs(coef)
    sgn = np.where(v > 0, 1.0, np.where(v < 0, -1.0, -np.sign(chi)))
    sgn = np.where(sgn == 0, 1.0, sgn)
    omega = 0.5 * sgn * np.minimum(HALF_PI, (HALF_PI - sgn * chi) / alpha)
    decay = mod * np.cos(alpha * omega + chi)
    if np.any(decay <= 0):
        raise DomainError("oracle ray leaves the decay sector")
    rot = np.exp(1j * omega)
    spin = coef * np.exp(1j * alpha * omega)
    bound = (2 * math.pi) ** -d

    def integrand(t, idx):
        with np.errstate(all="ignore"):
            lt = np.log(t)
            val = np.exp((d - 1) * lt + 1j * d * omega[idx] + 1j * v[idx] * t * rot[idx]
                         - np.exp(alpha * lt) * spin[idx])
        return np.where(t > 0, bound * val, 0.0)

    lin = v * np.sin(omega)
    env_c, env_p = decay.copy(), np.full(v.size, alpha)
    cut_tol = 0.5 * tol.abs_tol if tol.abs_tol > 0 else 1e-300
    for i in np.flatnonzero(lin > 0):
        if (tail_cutoff(lin[i], 1.0, cut_tol, bound, d - 1.0)
                < tail_cutoff(decay[i], alpha, cut_tol, bound, d - 1.0)):
            env_c[i], env_p[i] = lin[i], 1.0
    out = integrate_damped_tail_batch(integrand, env_c, env_p, tol, bound, d - 1.0)
    return np.real(out.value), out.err_est, out.converged


def _line_integral_one(v, lam, b, d, tol):
    """``(2 pi)^{-d} Re int_0^inf u^{d-1} exp(ivu - lam u + i b u log u) du`` on the real axis."""
    bound = (2 * math.pi) ** -d

    def integrand(u, idx):
        with np.errstate(all="ignore"):
            lu = np.log(u)
            val = np.exp((d - 1) * lu - lam * u) * np.cos(v[idx] * u + b[idx] * u * lu)
        return np.where(u > 0, bound * val, 0.0)

    out = integrate_damped_tail_batch(integrand, np.full(v.size, lam), 1.0, tol, bound, d - 1.0)
    return out.value.real, out.err_est, out.converged


def g_direct_many(v, beta, alpha: float, d: int, rep: str = "A",
                  tol: ToleranceSpec = DEFAULT_TOL) -> GBatch:
    """Oracle evaluation of the defining integral of ``g`` (see module docstring)."""
    _check_common(alpha, d, rep)
    v = np.atleast_1d(np.asarray(v, dtype=float))
    beta = np.atleast_1d(np.asarray(beta, dtype=float))
    v, beta = np.broadcast_arrays(v, beta)
    v = v.ravel().copy()
    beta = np.clip(beta.ravel(), -1.0, 1.0)
    if alpha == 1:
        if rep == "B":
            val, e, c = _line_integral_one(v, HALF_PI, beta, d, tol)
        else:
            val, e, c = _line_integral_one(v, 1.0, beta / HALF_PI, d, tol)
    else:
        if rep == "B":
            coef = np.exp(1j * HALF_PI * kappa_of(alpha) * beta)
        else:
            t = math.tan(HALF_PI * alpha)
            coef = 1 + 1j * beta * t
            if rep == "M":
                v = v + beta * t
        val, e, c = _ray_integral(v, coef, alpha, d, tol)
    return GBatch(val, e, c, np.full(v.size, DIRECT_FALLBACK, dtype=np.int8))


def g_direct(q: GQuery, tol: ToleranceSpec = DEFAULT_TOL) -> float:
    """Oracle value for a single query."""
    return float(g_direct_many([q.v], [q.beta], q.alpha, q.d, q.rep, tol).value[0])
