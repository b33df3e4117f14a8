"""Oracle cross-check suites behind ``stableproj check``."""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field

import numpy as np

from .density import DensityRequest, density_at, isotropic_cauchy_density
from .kernel import h_n_batch, h_n_direct_batch
from .projection import g_direct_many, g_eval_many
from .spectral import DiscreteSpectralMeasure, functionals_at, uniform_measure

__all__ = ["CheckRow", "CheckReport", "SUITES", "run_suite", "kernel_suite", "projection_suite",
           "density_suite", "asymmetric_measure"]

KERNEL_ALPHAS = (0.3, 0.5, 0.8, 1.2, 1.5, 1.9)
KERNEL_BETAS = (-1.0, -0.5, 0.0, 0.5, 1.0)
KERNEL_XS = (0.1, 0.5, 1.0, 2.0, 5.0)
ONE_BETAS = (0.3, 0.7, 1.0)
ONE_XS = (-2.0, 0.0, 1.0)

CAUCHY_REL_TOL = 1e-3


@dataclass(frozen=True)
class CheckRow:
    label: str
    error: float
    limit: float
    converged: bool = True

    @property
    def passed(self) -> bool:
        return self.converged and self.error <= self.limit


@dataclass
class CheckReport:
    suite: str
    rows: list[CheckRow] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    @property
    def failures(self) -> list[CheckRow]:
        return [r for r in self.rows if not r.passed]

    def worst(self, k: int = 5) -> list[CheckRow]:
        return sorted(self.rows, key=lambda r: (r.passed, -(r.error / r.limit if r.limit else r.error)))[:k]

    def render(self, k: int = 5) -> str:
        lines = [f"suite {self.suite}: {len(self.rows)} points, {len(self.failures)} failed"]
        for r in self.worst(k):
            flag = "ok  " if r.passed else "FAIL"
            conv = "" if r.converged else " (not converged)"
            lines.append(f"  {flag} {r.label}: error {r.error:.3e} limit {r.limit:.1e}{conv}")
        lines.append("PASS" if self.passed else "FAIL")
        return "\n".join(lines)


def _component_error(a, b):
    return np.maximum(np.abs(a.real - b.real), np.abs(a.imag - b.imag))


def kernel_suite(tol: float = 1e-6) -> CheckReport:
    """Finite-interval kernel against the ray oracle on the standard grid."""
    report = CheckReport("kernel")
    xs = np.array(KERNEL_XS)
    for alpha, beta, n in itertools.product(KERNEL_ALPHAS, KERNEL_BETAS, range(4)):
        k = h_n_batch(xs, beta, n, alpha)
        o = h_n_direct_batch(xs, beta, n, alpha)
        err = _component_error(k.value, o.value)
        for i, x in enumerate(xs):
            report.rows.append(CheckRow(f"h^{n}(x={x}; alpha={alpha}, beta={beta})", float(err[i]),
                                        tol * (1 + abs(o.value[i])), bool(k.converged[i] and o.converged[i])))
    xs = np.array(ONE_XS)
    for beta, n in itertools.product(ONE_BETAS, range(4)):
        k = h_n_batch(xs, beta, n, 1.0)
        o = h_n_direct_batch(xs, beta, n, 1.0)
        err = _component_error(k.value, o.value)
        for i, x in enumerate(xs):
            report.rows.append(CheckRow(f"h^{n}(x={x}; alpha=1, beta={beta})", float(err[i]),
                                        tol * (1 + abs(o.value[i])), bool(k.converged[i] and o.converged[i])))
    return report


def projection_suite(tol: float = 1e-6) -> CheckReport:
    """``g`` against its defining integral for every representation.

    The grid contains ``alpha <= 1, beta = 1`` with even ``d``, where the
    kernel's imaginary part carries the extra segment term.
    """
    report = CheckReport("projection")
    betas = np.array([0.0, 0.5, -0.5, 1.0, -1.0])
    vs = np.array([0.0, 0.5, -0.5, 2.0, -2.0])
    bb, vv = (a.ravel() for a in np.meshgrid(betas, vs))
    for rep, alpha, d in itertools.product("ABM", (0.5, 0.8, 1.0, 1.2, 1.7), (1, 2, 3, 4)):
        g = g_eval_many(vv, bb, alpha, d, rep)
        o = g_direct_many(vv, bb, alpha, d, rep)
        err = np.abs(g.value - o.value)
        for i in range(vv.size):
            report.rows.append(CheckRow(f"g^{rep}(v={vv[i]}, beta={bb[i]}; alpha={alpha}, d={d})",
                                        float(err[i]), tol * (1 + abs(o.value[i])),
                                        bool(g.converged[i] and o.converged[i])))
    return report


def asymmetric_measure(alpha: float, shift=(0.3, -0.2)) -> DiscreteSpectralMeasure:
    """Four unequal atoms in the plane, used by the route-agreement checks."""
    pts = np.array([[1.0, 0.0], [0.0, 1.0], [-0.6, 0.8], [0.28, -0.96]])
    return DiscreteSpectralMeasure(pts, [1.0, 0.5, 0.3, 0.7], alpha, np.array(shift))


def density_suite(tol: float = 1e-6) -> CheckReport:
    """Route agreement on a small lattice and the isotropic Cauchy closed form."""
    report = CheckReport("density")
    axis = np.linspace(-2, 2, 3)
    points = np.array(list(itertools.product(axis, axis)))
    for alpha in (0.7, 1.4):
        m = asymmetric_measure(alpha)
        values = {}
        for route in ("AA", "AB", "AM", "MM", "MA", "MB"):
            res = density_at(DensityRequest(points, m, route))
            values[route] = (np.array([r.value for r in res]), all(r.converged for r in res))
        base, _ = values["AA"]
        for route, (vals, conv) in values.items():
            if route == "AA":
                continue
            err = float(np.max(np.abs(vals - base)))
            report.rows.append(CheckRow(f"route {route} vs AA (alpha={alpha})", err,
                                        max(tol, tol * float(np.max(np.abs(base)))), conv))
    m = uniform_measure(2, 256, 1.0, alpha=1.0)
    scale = functionals_at([1.0, 0.0], m).sigma
    pts = np.array([[0.0, 0.0], [1.0, 0.0], [0.5, 2.0], [3.0, 0.0], [-2.1, 2.1]])
    res = density_at(DensityRequest(pts, m))
    exact = isotropic_cauchy_density(pts, scale)
    for p, r, e in zip(pts, res, exact):
        report.rows.append(CheckRow(f"isotropic Cauchy at {p.tolist()}", abs(r.value / e - 1),
                                    CAUCHY_REL_TOL, r.converged))
    return report


SUITES = {"kernel": kernel_suite, "projection": projection_suite, "density": density_suite}


def run_suite(name: str, tol: float = 1e-6) -> CheckReport:
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; expected one of {sorted(SUITES)}")
    if not (tol > 0 and math.isfinite(tol)):
        raise ValueError("tolerance must be positive")
    return SUITES[name](tol)
