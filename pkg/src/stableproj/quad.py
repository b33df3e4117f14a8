"""One-dimensional integration engines.

Two entry points are used throughout the package:

* :func:`integrate_interval` -- adaptive bisection on a finite interval with an
  embedded pair of open Gauss-Legendre rules (10 and 21 nodes).  The integrand
  is never evaluated at an endpoint.
* :func:`integrate_damped_tail` -- semi-infinite integrals whose integrand is
  bounded by ``M * u**k * exp(-c * u**p)``.  The domain is truncated where the
  envelope tail (an upper incomplete gamma function) drops below ``abs_tol``.

Both have batched counterparts (:func:`integrate_batch`,
:func:`integrate_damped_tail_batch`) that integrate many related problems in
lock-step so that every integrand call is a single vectorised numpy evaluation.
Integrands may be real or complex valued.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import special

from .errors import DomainError, QuadratureError

__all__ = [
    "ToleranceSpec",
    "QuadratureOutcome",
    "BatchOutcome",
    "DEFAULT_TOL",
    "integrate_interval",
    "integrate_batch",
    "integrate_damped_tail",
    "integrate_damped_tail_batch",
    "tail_cutoff",
]

_XLO, _WLO = leggauss(10)
_XHI, _WHI = leggauss(21)
_NODES = np.concatenate([_XLO, _XHI])
_NLO = _XLO.size
_NPER = _NODES.size
#: cap on the panels evaluated together in the first pass of :func:`integrate_batch`
_MAX_INITIAL_PANELS = 1 << 17


@dataclass(frozen=True)
class ToleranceSpec:
    """Accuracy request for the integration engines."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_subdivisions: int = 2000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError(f"rel_tol must be > 0, got {self.rel_tol}")
        if not self.abs_tol >= 0:
            raise DomainError(f"abs_tol must be >= 0, got {self.abs_tol}")
        if int(self.max_subdivisions) < 1:
            raise DomainError(f"max_subdivisions must be >= 1, got {self.max_subdivisions}")

    def target(self, value):
        """Error budget ``max(abs_tol, rel_tol*|value|)``."""
        return np.maximum(self.abs_tol, self.rel_tol * np.abs(value))


DEFAULT_TOL = ToleranceSpec()


@dataclass(frozen=True)
class QuadratureOutcome:
    value: complex | float
    err_est: float
    n_evals: int
    converged: bool
    method: str = "gauss-legendre-10/21"


@dataclass
class BatchOutcome:
    """Results of :func:`integrate_batch`; one entry per problem."""

    value: np.ndarray
    err_est: np.ndarray
    n_evals: np.ndarray
    converged: np.ndarray

    def __len__(self):
        return self.value.shape[0]

    def __getitem__(self, i) -> QuadratureOutcome:
        v = self.value[i]
        v = complex(v) if np.iscomplexobj(self.value) else float(v)
        return QuadratureOutcome(v, float(self.err_est[i]), int(self.n_evals[i]), bool(self.converged[i]))


def _segment_sum(ids, values, m):
    if np.iscomplexobj(values):
        return (np.bincount(ids, values.real, minlength=m)
                + 1j * np.bincount(ids, values.imag, minlength=m))
    return np.bincount(ids, values, minlength=m)


def _rule_sum(vals: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # column by column, so a panel's sum does not depend on its row in the batch
    acc = vals[:, 0] * weights[0]
    for j in range(1, weights.size):
        acc = acc + vals[:, j] * weights[j]
    return acc


def integrate_batch(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    a,
    b,
    tol: ToleranceSpec = DEFAULT_TOL,
    breakpoints=None,
) -> BatchOutcome:
    """Integrate ``m`` problems ``int_{a_i}^{b_i} f(x, i) dx`` simultaneously.

    Parameters
    ----------
    f : callable
        ``f(x, idx)`` receives flat arrays of abscissae and the problem index
        of each abscissa and returns the integrand values (real or complex).
    a, b : array_like
        Interval endpoints, shape ``(m,)``.
    tol : ToleranceSpec
        ``max_subdivisions`` caps the number of panels per problem.
    breakpoints : array_like, optional
        Shape ``(m, k)`` interior points used to seed the initial panels.
        Points outside ``[a_i, b_i]`` and NaNs are ignored.

    Returns
    -------
    BatchOutcome
        ``converged`` is False where the panel budget ran out; no exception
        is raised in that case.

    Raises
    ------
    QuadratureError
        If ``f`` returns a non-finite value at any node.
    """
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    a, b = np.broadcast_arrays(a, b)
    m = a.size
    if np.any(~(a < b)):
        raise DomainError("integration requires a < b for every problem")

    if breakpoints is None:
        edges = np.column_stack([a, b])
    else:
        bp = np.asarray(breakpoints, dtype=float).reshape(m, -1)
        bp = np.where(np.isnan(bp), b[:, None], bp)
        bp = np.clip(bp, a[:, None], b[:, None])
        edges = np.sort(np.column_stack([a, bp, b]), axis=1)

    # large batches run in groups so the node arrays of one pass stay bounded
    group = max(1, _MAX_INITIAL_PANELS // (edges.shape[1] - 1))
    if m <= group:
        return _integrate_edges(f, edges, tol, 0)
    parts = [_integrate_edges(f, edges[s:s + group], tol, s) for s in range(0, m, group)]
    return BatchOutcome(np.concatenate([p.value for p in parts]),
                        np.concatenate([p.err_est for p in parts]),
                        np.concatenate([p.n_evals for p in parts]),
                        np.concatenate([p.converged for p in parts]))


def _integrate_edges(f, edges: np.ndarray, tol: ToleranceSpec, offset: int) -> BatchOutcome:
    """Adaptive loop for problems ``offset .. offset + len(edges) - 1`` seeded with panel ``edges``."""
    m = edges.shape[0]
    pa = edges[:, :-1].ravel()
    pb = edges[:, 1:].ravel()
    pid = np.repeat(np.arange(m), edges.shape[1] - 1)
    keep = pb > pa
    pa, pb, pid = pa[keep], pb[keep], pid[keep]

    length = edges[:, -1] - edges[:, 0]
    acc_val = None
    acc_err = np.zeros(m)
    n_evals = np.zeros(m, dtype=np.int64)
    n_panels = np.bincount(pid, minlength=m)
    exhausted = np.zeros(m, dtype=bool)
    eps = np.finfo(float).eps

    while pa.size:
        mid = 0.5 * (pa + pb)
        half = 0.5 * (pb - pa)
        xs = mid[:, None] + half[:, None] * _NODES[None, :]
        vals = np.asarray(f(xs.ravel(), np.repeat(pid + offset, _NPER)))
        vals = np.broadcast_to(vals, (xs.size,)).reshape(xs.shape)
        finite = np.isfinite(vals)
        if not finite.all():
            r, c = np.argwhere(~finite)[0]
            raise QuadratureError(xs[r, c], vals[r, c], int(pid[r]) + offset)
        if acc_val is None:
            acc_val = np.zeros(m, dtype=vals.dtype if np.iscomplexobj(vals) else float)

        lo = half * _rule_sum(vals[:, :_NLO], _WLO)
        hi = half * _rule_sum(vals[:, _NLO:], _WHI)
        err = np.abs(hi - lo)
        n_evals += np.bincount(pid, minlength=m) * _NPER

        total = acc_val + _segment_sum(pid, hi, m)
        total_err = acc_err + np.bincount(pid, err, minlength=m)
        budget = tol.target(total)
        exhausted |= n_panels >= tol.max_subdivisions
        finish = (total_err <= budget) | exhausted

        local_ok = err <= budget[pid] * (pb - pa) / length[pid]
        unsplittable = half <= 8 * eps * np.maximum(np.abs(mid), 1e-300)
        accept = finish[pid] | local_ok | unsplittable

        acc_val = acc_val + _segment_sum(pid[accept], hi[accept], m)
        acc_err += np.bincount(pid[accept], err[accept], minlength=m)

        split = ~accept
        if not split.any():
            break
        n_panels += np.bincount(pid[split], minlength=m)
        sa, sb, sm, sid = pa[split], pb[split], mid[split], pid[split]
        pa = np.concatenate([sa, sm])
        pb = np.concatenate([sm, sb])
        pid = np.concatenate([sid, sid])

    if acc_val is None:
        acc_val = np.zeros(m)
    converged = (acc_err <= tol.target(acc_val) * (1 + 1e-12)) & ~exhausted
    return BatchOutcome(acc_val, acc_err, n_evals, converged)


def integrate_interval(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    tol: ToleranceSpec = DEFAULT_TOL,
    breakpoints: Optional[Sequence[float]] = None,
) -> QuadratureOutcome:
    """Adaptive quadrature of ``f`` over ``(a, b)``.

    ``f`` is called with a 1-d array of abscissae and must return an array of
    the same shape (wrap scalar functions in :func:`numpy.vectorize`).

    >>> integrate_interval(lambda x: x**2, 0.0, 1.0).value  # doctest: +ELLIPSIS
    0.33333333333333...
    """
    if not a < b:
        raise DomainError(f"integrate_interval requires a < b, got a={a}, b={b}")
    bp = None if breakpoints is None else np.asarray(breakpoints, dtype=float)[None, :]
    out = integrate_batch(lambda x, idx: f(x), [a], [b], tol, bp)
    return out[0]


def tail_cutoff(c: float, p: float, abs_tol: float, bound: float = 1.0, power: float = 0.0) -> float:
    """Smallest ``U`` with ``bound * int_U^inf u**power exp(-c u**p) du <= abs_tol``.

    The tail integral equals ``bound * Gamma_upper(s, c U**p) / (p c**s)`` with
    ``s = (power + 1)/p``; the root in ``y = c U**p`` is found by bisection.
    Returns ``inf`` when the cutoff exceeds the double range (very small ``p``).
    """
    if not (c > 0 and p > 0):
        raise DomainError(f"envelope requires c > 0 and p > 0, got c={c}, p={p}")
    if power <= -1:
        raise DomainError("envelope power must exceed -1")
    s = (power + 1.0) / p
    log_target = np.log(max(abs_tol, 1e-300))
    log_pre = np.log(bound) + special.gammaln(s) - np.log(p) - s * np.log(c)

    def log_tail(y):
        q = special.gammaincc(s, y)
        return -np.inf if q <= 0 else log_pre + np.log(q)

    if log_tail(0.0) <= log_target:
        return 0.0
    lo, hi = 0.0, max(1.0, s)
    while log_tail(hi) > log_target:
        lo, hi = hi, 2 * hi
    for _ in range(200):
        midpoint = 0.5 * (lo + hi)
        if log_tail(midpoint) > log_target:
            lo = midpoint
        else:
            hi = midpoint
        if hi - lo <= 1e-12 * hi:
            break
    log_u = (math.log(hi) - math.log(c)) / p
    return math.exp(log_u) if log_u < 709.0 else math.inf


def _tail_breakpoints(c, p, umax, count=48):
    scale = c ** (-1.0 / p)
    pts = scale * 2.0 ** np.arange(-4, count - 4)
    out = np.full(count, np.nan)
    inside = pts[pts < umax]
    out[: inside.size] = inside
    return out


def integrate_damped_tail_batch(
    f: Callable[[np.ndarray, np.ndarray], np.ndarray],
    c,
    p,
    tol: ToleranceSpec = DEFAULT_TOL,
    bound=1.0,
    power=0.0,
) -> BatchOutcome:
    """Batched :func:`integrate_damped_tail`; ``c``, ``p``, ``bound``, ``power`` broadcast."""
    c, p, bound, power = (np.atleast_1d(np.asarray(z, dtype=float)) for z in (c, p, bound, power))
    c, p, bound, power = np.broadcast_arrays(c, p, bound, power)
    if np.any(~(c > 0)) or np.any(~(p > 0)):
        raise DomainError("envelope requires c > 0 and p > 0")
    m = c.size
    upper = np.empty(m)
    cache = {}
    for i in range(m):
        key = (c[i], p[i], bound[i], power[i])
        if key not in cache:
            cache[key] = tail_cutoff(c[i], p[i], 0.5 * tol.abs_tol if tol.abs_tol > 0 else 1e-300,
                                     bound[i], power[i])
        upper[i] = cache[key]
    if not np.all(np.isfinite(upper)):
        raise DomainError("envelope decays too slowly for a finite truncation point")
    upper = np.maximum(upper, 1e-300)
    bps = np.vstack([_tail_breakpoints(c[i], p[i], upper[i]) for i in range(m)])
    out = integrate_batch(f, np.zeros(m), upper, tol, bps)
    out.err_est = out.err_est + 0.5 * tol.abs_tol
    return out


def integrate_damped_tail(
    f: Callable[[np.ndarray], np.ndarray],
    envelope: tuple[float, float],
    tol: ToleranceSpec = DEFAULT_TOL,
    bound: float = 1.0,
    power: float = 0.0,
) -> QuadratureOutcome:
    """Integrate ``f`` over ``(0, inf)`` given ``|f(u)| <= bound * u**power * exp(-c u**p)``.

    >>> round(integrate_damped_tail(lambda u: np.exp(-u), (1.0, 1.0)).value, 10)
    1.0
    """
    c, p = envelope
    if not (c > 0 and p > 0):
        raise DomainError(f"envelope requires c > 0 and p > 0, got {envelope}")
    return integrate_damped_tail_batch(lambda x, idx: f(x), c, p, tol, bound, power)[0]
