"""Exception types raised by the evaluators."""


class SpecialFunctionError(Exception):
    """Base class for all library errors."""


class PoleError(SpecialFunctionError, ValueError):
    """Argument sits on a pole of a gamma factor."""


class ParameterError(SpecialFunctionError, ValueError):
    """Parameter set violates an evaluator precondition."""


class DomainError(SpecialFunctionError, ValueError):
    """Argument outside the region where the series converges."""


class NoConvergence(SpecialFunctionError, ArithmeticError):
    """Summation did not settle within the term budget."""


class QuadratureFailure(SpecialFunctionError, ArithmeticError):
    """Adaptive quadrature could not reach the requested accuracy."""
