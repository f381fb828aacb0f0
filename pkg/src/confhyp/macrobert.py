"""MacRobert's E-function for p <= q through its hypergeometric series.

    E(a_1..a_p; b_1..b_q; z) = prod Gamma(a_j) / prod Gamma(b_j) * pFq(a; b; -1/z)

The Barnes-integral form is never integrated numerically; for p <= q the
series above converges for every z != 0.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass

from .core import (
    EvalResult,
    gamma,
    is_nonpositive_integer,
    loggamma,
    reciprocal_gamma,
    require_finite,
)
from .errors import DomainError, ParameterError, PoleError
from .hyperseries import (
    DEFAULT_CONTROL,
    ParamList,
    SeriesControl,
    as_paramlist,
    cancel_common,
    pfq,
    pfq_zderiv,
)

__all__ = ["EFunctionSpec", "e_eval", "e_zderiv", "e_moment_sum", "efun", "gamma_prefactor"]


@dataclass(frozen=True)
class EFunctionSpec:
    upper: ParamList
    lower: ParamList
    argument: complex

    def __post_init__(self):
        object.__setattr__(self, "upper", as_paramlist(self.upper))
        object.__setattr__(self, "lower", as_paramlist(self.lower))
        object.__setattr__(self, "argument", complex(self.argument))

    def validate(self) -> None:
        if self.argument == 0:
            raise ParameterError("E-function argument must be nonzero")
        if len(self.upper) > len(self.lower):
            raise ParameterError(
                f"E-function needs p <= q, got p={len(self.upper)}, q={len(self.lower)}"
            )
        for value, _ in self.upper.entries:
            if is_nonpositive_integer(value):
                raise PoleError(f"upper parameter {value} puts Gamma on a pole")
        for value, _ in self.lower.entries:
            if is_nonpositive_integer(value):
                raise ParameterError(f"lower parameter {value} is a nonpositive integer")


def gamma_prefactor(upper: ParamList, lower: ParamList) -> complex:
    """prod Gamma(upper) / prod Gamma(lower) after cancelling shared entries."""
    upper, lower = cancel_common(upper, lower)
    try:
        value = 1 + 0j
        for a, m in upper.entries:
            value *= gamma(a) ** m
        for b, m in lower.entries:
            value /= gamma(b) ** m
        return require_finite(value, "E-function prefactor")
    except (OverflowError, ZeroDivisionError):
        pass
    # long repeated blocks: go through logarithms instead
    log_value = sum(m * loggamma(a) for a, m in upper.entries)
    log_value -= sum(m * loggamma(b) for b, m in lower.entries)
    try:
        return require_finite(cmath.exp(log_value), "E-function prefactor")
    except OverflowError:
        raise OverflowError("E-function gamma prefactor is not representable") from None


def e_eval(spec: EFunctionSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    spec.validate()
    pre = gamma_prefactor(spec.upper, spec.lower)
    series = pfq(spec.upper, spec.lower, -1.0 / spec.argument, ctl)
    return series.scaled(pre)


def e_zderiv(spec: EFunctionSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """z dE/dz by term-wise differentiation of the series in -1/z."""
    spec.validate()
    pre = gamma_prefactor(spec.upper, spec.lower)
    # with x = -1/z, z d/dz = -x d/dx
    series = pfq_zderiv(spec.upper, spec.lower, -1.0 / spec.argument, ctl)
    return series.scaled(-pre)


def efun(upper, lower, z: complex, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """Shorthand returning only the value of E(upper; lower; z)."""
    return e_eval(EFunctionSpec(upper, lower, z), ctl).value


def e_moment_sum(
    alpha: complex,
    beta: complex,
    r: int,
    x: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> EvalResult:
    """sum_nu x^nu nu^r Gamma(alpha+nu) / (nu! Gamma(beta+nu)) as an E-function.

    r = 0 gives E(alpha; beta; -1/x); r >= 1 gives
    x E(alpha+1, [2]_{r-1}; beta+1, [1]_{r-1}; -1/x).
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    x = complex(x)
    if abs(x) >= 1:
        raise DomainError(f"moment sum is restricted to |x| < 1, got |x|={abs(x):.6g}")
    if x == 0:
        value = gamma(alpha) * reciprocal_gamma(beta) if r == 0 else 0j
        return EvalResult(value, 0.0, 1, True)
    if r == 0:
        return e_eval(EFunctionSpec(ParamList([alpha]), ParamList([beta]), -1.0 / x), ctl)
    upper = ParamList([alpha + 1, (2, r - 1)])
    lower = ParamList([beta + 1, (1, r - 1)])
    return e_eval(EFunctionSpec(upper, lower, -1.0 / x), ctl).scaled(x)
