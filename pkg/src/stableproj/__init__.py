"""Multivariate stable densities by projection onto one-dimensional stable functions."""
from .density import (
    DensityRequest,
    DensityResult,
    SphereRule,
    density_at,
    density_grid,
    make_sphere_rule,
)
from .errors import ConvergenceError, DegenerateMeasureError, DomainError, QuadratureError
from .kernel import KernelParams, KernelResult, h_n, h_n_direct
from .projection import GQuery, beta_to_B, g_direct, g_eval
from .quad import QuadratureOutcome, ToleranceSpec, integrate_damped_tail, integrate_interval
from .spectral import (
    DirectionFunctionals,
    DiscreteSpectralMeasure,
    convert_measure,
    functionals_at,
    uniform_measure,
)

__version__ = "0.1.0"

__all__ = [
    "ConvergenceError",
    "DegenerateMeasureError",
    "DensityRequest",
    "DensityResult",
    "DirectionFunctionals",
    "DiscreteSpectralMeasure",
    "DomainError",
    "GQuery",
    "KernelParams",
    "KernelResult",
    "QuadratureError",
    "QuadratureOutcome",
    "SphereRule",
    "ToleranceSpec",
    "beta_to_B",
    "convert_measure",
    "density_at",
    "density_grid",
    "functionals_at",
    "g_direct",
    "g_eval",
    "h_n",
    "h_n_direct",
    "integrate_damped_tail",
    "integrate_interval",
    "make_sphere_rule",
    "uniform_measure",
]
