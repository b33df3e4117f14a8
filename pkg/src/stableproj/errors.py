"""Exception types raised by the library."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of a function."""


class QuadratureError(ArithmeticError):
    """An integrand produced a non-finite value at an interior node."""

    def __init__(self, abscissa, value, problem=None):
        self.abscissa = float(abscissa)
        self.value = value
        self.problem = problem
        where = "" if problem is None else f" (problem {problem})"
        super().__init__(f"non-finite integrand value {value!r} at x={self.abscissa!r}{where}")


class DegenerateMeasureError(ValueError):
    """The spectral measure does not define a density (rank deficient or zero scale)."""


class ConvergenceError(RuntimeError):
    """Raised by callers that require converged quadrature."""
