"""Multivariate stable densities as sphere integrals of projection functions.

For a point ``x`` and a node ``s`` of a sphere rule let ``a = <x - nu, s>``.
Every route evaluates

    f(x) = sum_k w_k g_rep((a_k - shift_k) / scale_k, skew_k) / scale_k**d

and differs only in the one-dimensional representation ``rep`` and the
per-direction ``(scale, skew, shift)`` taken from
:class:`~stableproj.spectral.DirectionFunctionals`:

====== ========= ============== ============ ==============
route  measure   rep of ``g``   scale, skew  shift
====== ========= ============== ============ ==============
AA     A         A              sigma, beta  0 (``mu_MM`` at alpha = 1)
AB     A         B              sigma_B,     ``mu_B``
                                beta_B
AM     A         M              sigma, beta  ``mu_M``
MM     M         M              sigma, beta  ``mu_MM``
MA     M         A              sigma, beta  ``mu_AM``
MB     M         B              sigma_B,     ``mu_AM``
                                beta_B
====== ========= ============== ============ ==============

At ``alpha = 1`` the (A) and (M) forms coincide, so AM runs as AA and MA, MB
run as MM.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMeasureError, DomainError
from .projection import g_eval_many
from .quad import DEFAULT_TOL, ToleranceSpec
from .spectral import DiscreteSpectralMeasure, convert_measure, functionals_many

__all__ = [
    "ROUTES",
    "RULE_KINDS",
    "SphereRule",
    "DensityRequest",
    "DensityResult",
    "sphere_area",
    "make_sphere_rule",
    "default_sphere_rule",
    "resolve_route",
    "density_at",
    "density_grid",
    "lattice",
    "isotropic_cauchy_density",
    "isotropic_cauchy_tail",
]

ROUTES = ("auto", "AA", "AB", "AM", "MM", "MA", "MB")
RULE_KINDS = ("trapezoid-d2", "gauss-product-d3", "montecarlo")
#: near alpha = 1 the automatic route switches to the (M) form
AUTO_M_BAND = 0.05
SCALE_FLOOR = 1e-12
#: upper bound on point-by-node evaluations held in memory at once
CHUNK = 1 << 20
#: upper bound on point-by-node values (and their error estimates) kept per block of points
_BLOCK_ENTRIES = 8 * CHUNK

_ROUTE_TABLE = {
    # route: (g representation, scale key, skew key, shift key)
    "AA": ("A", "sigma", "beta", None),
    "AB": ("B", "sigma_B", "beta_B", "mu_B"),
    "AM": ("M", "sigma", "beta", "mu_M"),
    "MM": ("M", "sigma", "beta", "mu_MM"),
    "MA": ("A", "sigma", "beta", "mu_AM"),
    "MB": ("B", "sigma_B", "beta_B", "mu_AM"),
}
_ROUTE_AT_ONE = {"AM": "AA", "MA": "MM", "MB": "MM"}


def sphere_area(d: int) -> float:
    """Surface area of the unit sphere in ``R^d``."""
    return 2 * math.pi ** (d / 2) / math.gamma(d / 2)


@dataclass(frozen=True, eq=False)
class SphereRule:
    """Nodes and weights for integrating over the unit sphere.

    ``coarse_index`` and ``coarse_weights`` describe an embedded lower-order
    rule used for the error estimate; its nodes are rows of
    ``vstack([nodes, extra_nodes])``.  Monte Carlo rules have no coarse rule.
    """

    nodes: np.ndarray
    weights: np.ndarray
    kind: str
    seed: int | None = None
    extra_nodes: np.ndarray | None = None
    coarse_index: np.ndarray | None = None
    coarse_weights: np.ndarray | None = None
    dim: int = field(init=False)

    def __post_init__(self):
        nodes = np.array(self.nodes, dtype=float)
        w = np.array(self.weights, dtype=float).ravel()
        if nodes.ndim != 2 or nodes.shape[0] != w.size or nodes.shape[0] == 0:
            raise DomainError("nodes must have shape (n, d) matching the weights")
        if np.any(np.abs(np.linalg.norm(nodes, axis=1) - 1) > 1e-12):
            raise DomainError("sphere nodes must be unit vectors")
        if np.any(~(w > 0)):
            raise DomainError("sphere weights must be positive")
        if self.kind not in RULE_KINDS:
            raise DomainError(f"unknown rule kind {self.kind!r}")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "dim", nodes.shape[1])

    @property
    def n_nodes(self) -> int:
        return self.weights.size

    def all_nodes(self) -> np.ndarray:
        if self.extra_nodes is None:
            return self.nodes
        return np.vstack([self.nodes, self.extra_nodes])

    def rotated(self, q: np.ndarray) -> "SphereRule":
        """Same rule with every node mapped by the orthogonal matrix ``q``."""
        extra = None if self.extra_nodes is None else self.extra_nodes @ q.T
        return SphereRule(self.nodes @ q.T, self.weights, self.kind, self.seed, extra,
                          self.coarse_index, self.coarse_weights)


def _trapezoid_d2(n):
    ang = 2 * math.pi * np.arange(n) / n
    nodes = np.column_stack([np.cos(ang), np.sin(ang)])
    weights = np.full(n, 2 * math.pi / n)
    if n % 2:
        return SphereRule(nodes, weights, "trapezoid-d2")
    idx = np.arange(0, n, 2)
    return SphereRule(nodes, weights, "trapezoid-d2", coarse_index=idx,
                      coarse_weights=np.full(idx.size, 4 * math.pi / n))


def _gauss_product_nodes(n):
    x, wx = np.polynomial.legendre.leggauss(n)
    m = 2 * n
    phi = 2 * math.pi * np.arange(m) / m
    rho = np.sqrt(1 - x * x)
    nodes = np.column_stack([
        np.outer(rho, np.cos(phi)).ravel(),
        np.outer(rho, np.sin(phi)).ravel(),
        np.repeat(x, m),
    ])
    weights = np.repeat(wx, m) * (2 * math.pi / m)
    return nodes, weights


def _gauss_product_d3(n):
    nodes, weights = _gauss_product_nodes(n)
    coarse_nodes, coarse_weights = _gauss_product_nodes(max(n // 2, 1))
    idx = nodes.shape[0] + np.arange(coarse_nodes.shape[0])
    return SphereRule(nodes, weights, "gauss-product-d3", extra_nodes=coarse_nodes,
                      coarse_index=idx, coarse_weights=coarse_weights)


def _montecarlo(d, n, seed):
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((n, d))
    nodes = z / np.linalg.norm(z, axis=1, keepdims=True)
    return SphereRule(nodes, np.full(n, sphere_area(d) / n), "montecarlo", seed=seed)


def make_sphere_rule(d: int, n: int, kind: str, seed: int | None = 0) -> SphereRule:
    """Build a sphere rule.

    Parameters
    ----------
    d : int
        Ambient dimension, at least 2.
    n : int
        Number of nodes for ``trapezoid-d2`` and ``montecarlo``; number of
        polar Gauss-Legendre nodes for ``gauss-product-d3`` (which then uses
        ``2n`` azimuths).
    kind : {"trapezoid-d2", "gauss-product-d3", "montecarlo"}
    seed : int, optional
        Generator seed, used by ``montecarlo`` only.

    Examples
    --------
    >>> rule = make_sphere_rule(2, 4, "trapezoid-d2")
    >>> float(rule.weights.sum() / math.pi)
    2.0
    """
    if int(d) != d or d < 2:
        raise DomainError(f"d must be an integer >= 2, got {d}")
    if int(n) != n or n < 4:
        raise DomainError(f"n must be an integer >= 4, got {n}")
    if kind == "trapezoid-d2":
        if d != 2:
            raise DomainError("trapezoid-d2 needs d = 2")
        return _trapezoid_d2(int(n))
    if kind == "gauss-product-d3":
        if d != 3:
            raise DomainError("gauss-product-d3 needs d = 3")
        return _gauss_product_d3(int(n))
    if kind == "montecarlo":
        return _montecarlo(int(d), int(n), seed)
    raise DomainError(f"unknown rule kind {kind!r}; expected one of {RULE_KINDS}")


def default_sphere_rule(d: int, seed: int | None = 0) -> SphereRule:
    """512 trapezoid nodes for ``d = 2``, 32 x 64 Gauss product for ``d = 3``, else 200000 Monte Carlo points."""
    if d == 2:
        return make_sphere_rule(2, 512, "trapezoid-d2")
    if d == 3:
        return make_sphere_rule(3, 32, "gauss-product-d3")
    return make_sphere_rule(d, 200_000, "montecarlo", seed)


@dataclass(frozen=True)
class DensityRequest:
    points: np.ndarray
    measure: DiscreteSpectralMeasure
    route: str = "auto"
    rule: SphereRule | None = None
    tol: ToleranceSpec = DEFAULT_TOL

    def __post_init__(self):
        pts = np.atleast_2d(np.array(self.points, dtype=float))
        if pts.shape[1] != self.measure.dim:
            raise DomainError(f"points have dimension {pts.shape[1]}, measure has {self.measure.dim}")
        if np.any(~np.isfinite(pts)):
            raise DomainError("points must be finite")
        if self.route not in ROUTES:
            raise DomainError(f"unknown route {self.route!r}; expected one of {ROUTES}")
        if self.rule is not None and self.rule.dim != self.measure.dim:
            raise DomainError("sphere rule dimension differs from the measure dimension")
        pts.setflags(write=False)
        object.__setattr__(self, "points", pts)


@dataclass(frozen=True)
class DensityResult:
    value: float
    err_est: float
    route_used: str
    converged: bool = True


def resolve_route(route: str, measure: DiscreteSpectralMeasure) -> str:
    """Concrete route for ``route`` given the measure's representation and ``alpha``."""
    alpha = measure.alpha
    if route == "auto":
        route = "MM" if measure.rep == "M" or abs(alpha - 1) < AUTO_M_BAND else "AA"
    if alpha == 1:
        route = _ROUTE_AT_ONE.get(route, route)
    return route


def _node_parameters(route, measure, nodes):
    g_rep, scale_key, skew_key, shift_key = _ROUTE_TABLE[route]
    f = functionals_many(nodes, measure)
    scale, skew = f[scale_key], f[skew_key]
    if shift_key is None:
        shift = f["mu_MM"] if measure.alpha == 1 else np.zeros_like(scale)
    else:
        shift = f[shift_key]
    small = ~(scale >= SCALE_FLOOR)
    if np.any(small):
        k = int(np.flatnonzero(small)[0])
        raise DegenerateMeasureError(
            f"scale {scale[k]:.3g} at sphere node {k} {nodes[k].tolist()} is below {SCALE_FLOOR}")
    return g_rep, scale, skew, shift


def _node_values(points, measure, nodes, g_rep, scale, skew, shift, tol):
    """``g(...) / scale**d`` for every point (rows) and node (columns)."""
    d = measure.dim
    centred = points - measure.shift
    out = np.empty((points.shape[0], nodes.shape[0]))
    err = np.empty_like(out)
    conv = np.ones(points.shape[0], dtype=bool)
    inv = scale ** (-float(d))
    rows = max(1, CHUNK // nodes.shape[0])
    for start in range(0, points.shape[0], rows):
        block = slice(start, start + rows)
        v = (centred[block] @ nodes.T - shift) / scale
        b = np.broadcast_to(skew, v.shape)
        g = g_eval_many(v.ravel(), b.ravel(), measure.alpha, d, g_rep, tol)
        out[block] = g.value.reshape(v.shape) * inv
        err[block] = g.err_est.reshape(v.shape) * inv
        conv[block] = g.converged.reshape(v.shape).all(axis=1)
    return out, err, conv


def density_at(req: DensityRequest) -> list[DensityResult]:
    """Density of the stable law given by ``req.measure`` at each of ``req.points``.

    Parameters
    ----------
    req : DensityRequest
        ``route="auto"`` picks AA for an (A) measure and MM for an (M)
        measure, and MM whenever ``|alpha - 1| < 0.05``.  The measure is
        converted when the route asks for the other representation.

    Returns
    -------
    list of DensityResult
        In the order of ``req.points``.  ``err_est`` combines the embedded
        coarse-rule difference (or Monte Carlo standard error) with the
        propagated one-dimensional quadrature errors.

    Raises
    ------
    DegenerateMeasureError
        If the atoms do not span ``R^d`` or a direction has vanishing scale.
    """
    measure = req.measure
    measure.require_full_dimensional()
    route = resolve_route(req.route, measure)
    if measure.rep != route[0]:
        measure = convert_measure(measure, route[0])
    rule = req.rule if req.rule is not None else default_sphere_rule(measure.dim)
    nodes = rule.all_nodes()
    g_rep, scale, skew, shift = _node_parameters(route, measure, nodes)
    # blocks of points keep the (points x nodes) work arrays at a bounded size
    block = max(1, _BLOCK_ENTRIES // len(nodes))
    out: list[DensityResult] = []
    for lo in range(0, len(req.points), block):
        vals, errs, conv = _node_values(req.points[lo:lo + block], measure, nodes, g_rep, scale, skew,
                                        shift, req.tol)
        out.extend(_reduce(vals, errs, conv, rule, measure.dim, route))
    return out


def _reduce(vals, errs, conv, rule: SphereRule, dim: int, route: str) -> list[DensityResult]:
    k = rule.n_nodes
    main = _weighted_rows(vals[:, :k], rule.weights)
    g_err = _weighted_rows(errs[:, :k], rule.weights)
    if rule.kind == "montecarlo":
        spread = vals[:, :k].std(axis=1, ddof=1) if k > 1 else np.zeros(len(main))
        rule_err = spread * sphere_area(dim) / math.sqrt(k)
    elif rule.coarse_index is not None:
        coarse = _weighted_rows(vals[:, rule.coarse_index], rule.coarse_weights)
        rule_err = np.abs(main - coarse)
    else:
        rule_err = np.zeros_like(main)
    return [DensityResult(float(main[i]), float(rule_err[i] + g_err[i]), route, bool(conv[i]))
            for i in range(main.size)]


def _weighted_rows(values: np.ndarray, weights: np.ndarray) -> np.ndarray:
    # fixed node order, so each point's sum is bitwise independent of its row position
    acc = np.zeros(values.shape[0])
    for j in range(values.shape[1]):
        acc += values[:, j] * weights[j]
    return acc


def lattice(axes) -> tuple[list[np.ndarray], np.ndarray]:
    """Axis coordinates and row-major lattice points for ``[(start, stop, step), ...]``.

    ``stop`` is included when it lies on the lattice (up to rounding).
    """
    coords = []
    for start, stop, step in axes:
        if not (math.isfinite(start) and math.isfinite(stop) and math.isfinite(step)):
            raise DomainError("lattice bounds must be finite")
        if not step > 0:
            raise DomainError(f"lattice step must be positive, got {step}")
        if stop < start:
            raise DomainError(f"lattice stop {stop} is below start {start}")
        count = int(math.floor((stop - start) / step + 1e-9)) + 1
        coords.append(start + step * np.arange(count))
    mesh = np.meshgrid(*coords, indexing="ij")
    return coords, np.column_stack([c.ravel() for c in mesh])


def density_grid(axes, measure: DiscreteSpectralMeasure, route: str = "auto",
                 rule: SphereRule | None = None,
                 tol: ToleranceSpec = DEFAULT_TOL) -> tuple[np.ndarray, list[DensityResult]]:
    """Evaluate the density on a rectangular lattice (row-major, last axis fastest)."""
    _, points = lattice(axes)
    return points, density_at(DensityRequest(points, measure, route, rule, tol))


def isotropic_cauchy_density(x, scale: float):
    """Bivariate isotropic Cauchy density ``c / (2 pi (c^2 + |x|^2)^{3/2})``."""
    r2 = np.sum(np.atleast_2d(np.asarray(x, dtype=float)) ** 2, axis=1)
    return scale / (2 * math.pi * (scale * scale + r2) ** 1.5)


def isotropic_cauchy_tail(radius: float, scale: float) -> float:
    """Mass of the bivariate isotropic Cauchy law outside the disc of ``radius``."""
    return scale / math.hypot(scale, radius)

