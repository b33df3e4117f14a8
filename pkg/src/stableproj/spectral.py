"""Discrete spectral measures and the per-direction parameters they induce."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateMeasureError, DomainError
from .kernel import HALF_PI, kappa_of
from .projection import beta_to_B

__all__ = [
    "MEASURE_REPS",
    "DiscreteSpectralMeasure",
    "DirectionFunctionals",
    "functionals_at",
    "functionals_many",
    "convert_measure",
    "uniform_measure",
]

MEASURE_REPS = ("A", "M")
UNIT_TOL = 1e-12
#: conversions involving tan(pi alpha/2) refuse alpha this close to 1
TAN_GUARD = 1e-8


def _unit_rows(points, tol=UNIT_TOL):
    pts = np.array(points, dtype=float)
    if pts.ndim != 2:
        raise DomainError("atoms must form a 2-d array of shape (n_atoms, d)")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(np.abs(norms - 1) > tol):
        raise DomainError(f"atoms must be unit vectors (max |norm-1| = {np.max(np.abs(norms - 1)):.3g})")
    return pts


@dataclass(frozen=True, eq=False)
class DiscreteSpectralMeasure:
    """Finitely many weighted atoms on the unit sphere plus a shift.

    Parameters
    ----------
    points : array_like, shape (n_atoms, d)
        Unit vectors, ``d >= 2``.
    weights : array_like, shape (n_atoms,)
        Strictly positive masses.
    alpha : float
        Stability index.
    shift : array_like, shape (d,), optional
        ``mu`` for ``rep="A"``, ``mu0`` for ``rep="M"``; zero by default.
    rep : {"A", "M"}
    """

    points: np.ndarray
    weights: np.ndarray
    alpha: float
    shift: np.ndarray = None
    rep: str = "A"
    dim: int = field(init=False)

    def __post_init__(self):
        pts = _unit_rows(self.points)
        w = np.array(self.weights, dtype=float).ravel()
        if pts.shape[0] == 0:
            raise DomainError("a spectral measure needs at least one atom")
        if w.shape[0] != pts.shape[0]:
            raise DomainError(f"{pts.shape[0]} atoms but {w.shape[0]} weights")
        if np.any(~(w > 0)) or np.any(~np.isfinite(w)):
            raise DomainError("weights must be finite and strictly positive")
        d = pts.shape[1]
        if d < 2:
            raise DomainError(f"dimension must be at least 2, got {d}")
        if not 0 < self.alpha < 2:
            raise DomainError(f"alpha must lie in (0, 2), got {self.alpha}")
        if self.rep not in MEASURE_REPS:
            raise DomainError(f"rep must be 'A' or 'M', got {self.rep!r}")
        shift = np.zeros(d) if self.shift is None else np.array(self.shift, dtype=float).ravel()
        if shift.shape != (d,) or np.any(~np.isfinite(shift)):
            raise DomainError(f"shift must be a finite vector of length {d}")
        for arr in (pts, w, shift):
            arr.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "shift", shift)
        object.__setattr__(self, "dim", d)

    @property
    def n_atoms(self) -> int:
        return self.points.shape[0]

    @property
    def total_mass(self) -> float:
        return float(self.weights.sum())

    @property
    def first_moment(self) -> np.ndarray:
        """``sum_i w_i s_i``."""
        return self.weights @ self.points

    def is_full_dimensional(self) -> bool:
        return np.linalg.matrix_rank(self.points) == self.dim

    def require_full_dimensional(self):
        rank = np.linalg.matrix_rank(self.points)
        if rank < self.dim:
            raise DegenerateMeasureError(
                f"atoms span a {rank}-dimensional subspace of R^{self.dim}; a density needs rank {self.dim}")

    def with_shift(self, shift, rep: str | None = None) -> "DiscreteSpectralMeasure":
        return DiscreteSpectralMeasure(self.points, self.weights, self.alpha, shift,
                                       self.rep if rep is None else rep)

    def __eq__(self, other):
        if not isinstance(other, DiscreteSpectralMeasure):
            return NotImplemented
        return (self.alpha == other.alpha and self.rep == other.rep
                and np.array_equal(self.points, other.points)
                and np.array_equal(self.weights, other.weights)
                and np.array_equal(self.shift, other.shift))

    __hash__ = None


@dataclass(frozen=True)
class DirectionFunctionals:
    """One-dimensional parameters of the projection ``<X, t>``.

    ``mu_M`` is the (A)-to-(M) shift ``sigma beta tan(pi alpha/2)``, ``mu_AM`` the
    (M)-measure shift seen by an (A) projection and ``mu_MM`` the one seen by
    an (M) projection.  ``sigma_B`` and ``beta_B`` are the (B) scale and skew,
    ``mu_B`` the (B) shift (zero unless ``alpha = 1``).
    """

    sigma: float
    beta: float
    mu: float
    sigma_B: float
    beta_B: float
    mu_B: float
    mu_M: float
    mu_AM: float
    mu_MM: float
    degenerate: bool = False


def _xlogabs(p):
    """``p log|p|`` with ``0 log 0 = 0``."""
    a = np.abs(p)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.where(a > 0, p * np.log(np.where(a > 0, a, 1.0)), 0.0)


def functionals_many(t, m: DiscreteSpectralMeasure) -> dict[str, np.ndarray]:
    """Functionals for every row of ``t`` (shape ``(k, d)``); rows need not be unit.

    Returns a mapping from field name of :class:`DirectionFunctionals` to arrays.
    """
    t = np.atleast_2d(np.asarray(t, dtype=float))
    if t.shape[1] != m.dim:
        raise DomainError(f"direction has dimension {t.shape[1]}, measure has {m.dim}")
    a = m.alpha
    w = m.weights
    p = t @ m.points.T
    # scale by the largest projection so |p|^alpha cannot underflow
    top = np.max(np.abs(p), axis=1)
    degenerate = ~(top > 0)
    top = np.where(degenerate, 1.0, top)
    ap = np.abs(p / top[:, None]) ** a
    sig_a = ap @ w
    sigma = np.where(degenerate, 0.0, top * sig_a ** (1 / a))
    safe = np.where(degenerate, 1.0, sig_a)
    beta = np.where(degenerate, 0.0, ((np.sign(p) * ap) @ w) / safe)
    beta = np.clip(beta, -1.0, 1.0)
    lin = p @ w
    if a == 1:
        plog = _xlogabs(p) @ w
        with np.errstate(divide="ignore", invalid="ignore"):
            slog = np.where(degenerate, 0.0, sigma * np.log(np.where(degenerate, 1.0, sigma)))
        mu = -plog / HALF_PI
        mu_mm = (beta * slog - plog) / HALF_PI
        sigma_b = sigma / HALF_PI
        with np.errstate(divide="ignore", invalid="ignore"):
            sblog = np.where(degenerate, 0.0, sigma_b * np.log(np.where(degenerate, 1.0, sigma_b)))
        mu_b = beta * sblog - plog / HALF_PI
        return dict(sigma=sigma, beta=beta, mu=mu, sigma_B=sigma_b, beta_B=beta.copy(), mu_B=mu_b,
                    mu_M=mu_mm.copy(), mu_AM=mu_mm.copy(), mu_MM=mu_mm, degenerate=degenerate)
    tan = math.tan(HALF_PI * a)
    beta_b = beta_to_B(beta, a)
    sigma_b = sigma / np.cos(HALF_PI * kappa_of(a) * beta_b) ** (1 / a)
    zero = np.zeros_like(sigma)
    return dict(sigma=sigma, beta=beta, mu=zero, sigma_B=sigma_b, beta_B=np.atleast_1d(beta_b),
                mu_B=zero.copy(), mu_M=sigma * beta * tan, mu_AM=-tan * lin,
                mu_MM=tan * (beta * sigma - lin), degenerate=degenerate)


def functionals_at(t, m: DiscreteSpectralMeasure) -> DirectionFunctionals:
    """Functionals of the measure in direction ``t``.

    Parameters
    ----------
    t : array_like, shape (d,)
    m : DiscreteSpectralMeasure

    Returns
    -------
    DirectionFunctionals
        ``degenerate`` is set when every atom is orthogonal to ``t``.

    Examples
    --------
    >>> m = DiscreteSpectralMeasure([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0], alpha=1.5)
    >>> f = functionals_at([1.0, 0.0], m)
    >>> f.sigma, f.beta
    (1.0, 1.0)
    """
    t = np.asarray(t, dtype=float)
    if t.ndim != 1:
        raise DomainError("functionals_at takes a single direction")
    out = functionals_many(t[None, :], m)
    return DirectionFunctionals(**{k: (bool(v[0]) if k == "degenerate" else float(v[0]))
                                   for k, v in out.items()})


def convert_measure(m: DiscreteSpectralMeasure, to: str) -> DiscreteSpectralMeasure:
    """Re-express ``m`` in representation ``to`` (``"A"`` or ``"M"``).

    The atoms are unchanged.  With ``c = tan(pi alpha/2) sum_i w_i s_i`` the
    shifts are related by ``mu0 = mu + c``.  At ``alpha = 1`` both
    representations coincide and the measure is returned unchanged.

    Raises
    ------
    DomainError
        If ``alpha`` is within ``1e-8`` of 1 (but not equal to it) and a
        change of representation is requested.
    """
    if to not in MEASURE_REPS:
        raise DomainError(f"target representation must be 'A' or 'M', got {to!r}")
    if to == m.rep or m.alpha == 1:
        return m if to == m.rep else m.with_shift(m.shift, rep=to)
    if abs(m.alpha - 1) < TAN_GUARD:
        raise DomainError(f"alpha = {m.alpha} is too close to 1 for an A/M conversion")
    c = math.tan(HALF_PI * m.alpha) * m.first_moment
    shift = m.shift + c if to == "M" else m.shift - c
    return m.with_shift(shift, rep=to)


def _spiral_points(n):
    """Quasi-uniform points on the 2-sphere along a golden-angle spiral."""
    k = np.arange(n) + 0.5
    z = 1 - 2 * k / n
    rho = np.sqrt(1 - z * z)
    phi = math.pi * (3 - math.sqrt(5)) * k
    return np.column_stack([rho * np.cos(phi), rho * np.sin(phi), z])


def uniform_measure(d: int, n_atoms: int, total_mass: float = 1.0, rep: str = "A",
                    alpha: float = 1.0) -> DiscreteSpectralMeasure:
    """Equal-weight measure approximating the uniform one on the sphere.

    ``d = 2`` uses equally spaced angles and ``d = 3`` a golden-angle spiral
    (made exactly antipodally symmetric when ``n_atoms`` is even).
    """
    if n_atoms < 2 * d:
        raise DomainError(f"n_atoms must be at least {2 * d}")
    if not total_mass > 0:
        raise DomainError("total_mass must be positive")
    if d == 2:
        ang = 2 * math.pi * np.arange(n_atoms) / n_atoms
        pts = np.column_stack([np.cos(ang), np.sin(ang)])
    elif d == 3:
        if n_atoms % 2 == 0:
            half = _spiral_points(n_atoms)[: n_atoms // 2]
            pts = np.vstack([half, -half])
        else:
            pts = _spiral_points(n_atoms)
        pts /= np.linalg.norm(pts, axis=1, keepdims=True)
    else:
        raise DomainError(f"uniform_measure supports d = 2 or 3, got {d}")
    if rep not in MEASURE_REPS:
        raise DomainError(f"rep must be 'A' or 'M', got {rep!r}")
    w = np.full(n_atoms, total_mass / n_atoms)
    return DiscreteSpectralMeasure(pts, w, alpha, None, rep)

