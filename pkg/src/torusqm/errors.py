"""Exception hierarchy shared by all modules."""


class TorusQMError(Exception):
    """Base class for library errors."""


class DomainError(TorusQMError, ValueError):
    """Argument outside the domain of a special function."""


class ParameterError(TorusQMError, ValueError):
    """Forbidden parameter combination (e.g. HeunB gamma in {0, -1, -2, ...})."""


class ConvergenceError(TorusQMError, ArithmeticError):
    """An iteration or series failed to converge."""


class SingularityError(TorusQMError, ArithmeticError):
    """Integration path came too close to a singular point."""


class StiffnessError(TorusQMError, ArithmeticError):
    """Step size underflow during ODE integration."""


class DegenerateAxis(TorusQMError, ValueError):
    """Point on the excised z-axis where the toroidal angle is undefined."""


class ChartError(TorusQMError, ValueError):
    """Point outside the principal chart (R + w cos u <= 0)."""


class NonconvergedError(TorusQMError, ArithmeticError):
    """Truncated mode sum has not converged at the requested order."""


class CoincidenceError(TorusQMError, ValueError):
    """Field and source points coincide in the cross-section."""


class StepError(TorusQMError, ArithmeticError):
    """Finite-difference step too large for the requested tolerance."""
