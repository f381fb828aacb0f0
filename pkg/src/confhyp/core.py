"""Complex gamma-function kernel and shared result types.

Everything here works on Python ``complex`` scalars in double precision.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import PoleError

__all__ = [
    "EvalResult",
    "gamma",
    "loggamma",
    "reciprocal_gamma",
    "pochhammer",
    "binomial",
    "stirling_magnitude",
    "is_nonpositive_integer",
    "require_finite",
]

POLE_TOL = 1e-12
POCHHAMMER_DIRECT_MAX = 64

# Lanczos approximation with Godfrey's coefficients, g = 607/128, 15 terms.
_LANCZOS_SHIFT = 671.0 / 128.0
_LANCZOS_C0 = 0.999999999999997092
_LANCZOS_COEF = (
    57.1562356658629235,
    -59.5979603554754912,
    14.1360979747417471,
    -0.491913816097620199,
    0.339946499848118887e-4,
    0.465236289270485756e-4,
    -0.983744753048795646e-4,
    0.158088703224912494e-3,
    -0.210264441724104883e-3,
    0.217439618115212643e-3,
    -0.164318106536763890e-3,
    0.844182239838527433e-4,
    -0.261908384015814087e-4,
    0.368991826595316234e-5,
)
_SQRT_2PI = math.sqrt(2.0 * math.pi)
# beyond this modulus the exponent of the Lanczos form is large enough that
# double rounding of it costs more than 1e-14; evaluate it in extended precision
_EXTENDED_ABOVE = 12.0
_PI_EXT = np.longdouble("3.14159265358979323846264338327950288")

# Bernoulli numbers B_2k / (2k (2k-1)) for the Stirling series of log-gamma.
_STIRLING_COEF = (
    1.0 / 12.0,
    -1.0 / 360.0,
    1.0 / 1260.0,
    -1.0 / 1680.0,
    1.0 / 1188.0,
    -691.0 / 360360.0,
    1.0 / 156.0,
    -3617.0 / 122400.0,
)


@dataclass(frozen=True)
class EvalResult:
    """Value of a truncated expansion together with its bookkeeping."""

    value: complex
    abs_error_estimate: float
    terms_used: int
    converged: bool

    def scaled(self, factor: complex) -> "EvalResult":
        """Return the result multiplied by a constant, error scaled alike."""
        return EvalResult(
            self.value * factor,
            self.abs_error_estimate * abs(factor),
            self.terms_used,
            self.converged,
        )


def require_finite(value: complex, what: str = "value") -> complex:
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise OverflowError(f"{what} is not finite ({value!r})")
    return value


def _nearest_nonpositive_integer(z: complex) -> int | None:
    z = complex(z)
    if z.real > 0.5:
        return None
    n = round(z.real)
    if n > 0:
        return None
    if abs(z - n) < POLE_TOL:
        return int(n)
    return None


def is_nonpositive_integer(z: complex) -> bool:
    """True when ``z`` is within the pole tolerance of 0, -1, -2, ..."""
    return _nearest_nonpositive_integer(z) is not None


def _sinpi(z: complex) -> complex:
    # sin(pi z) with the integer part removed exactly before scaling by pi
    n = round(z.real)
    w = z - n
    if abs(w.imag) > _EXTENDED_ABOVE / math.pi:
        s = complex(np.sin(_PI_EXT * np.clongdouble(w)))
    else:
        s = cmath.sin(math.pi * w)
    return -s if n % 2 else s


def _lanczos(z: complex) -> complex:
    # valid for Re z >= 0.5
    acc = _LANCZOS_C0
    for k, c in enumerate(_LANCZOS_COEF, start=1):
        acc += c / (z + k)
    acc *= _SQRT_2PI / z
    if abs(z) > _EXTENDED_ABOVE:
        ze = np.clongdouble(z)
        te = ze + np.longdouble(_LANCZOS_SHIFT)
        return complex(np.exp((ze + np.longdouble(0.5)) * np.log(te) - te)) * acc
    t = z + _LANCZOS_SHIFT
    return cmath.exp((z + 0.5) * cmath.log(t) - t) * acc


def gamma(z: complex) -> complex:
    """Gamma function for complex argument.

    Raises PoleError within 1e-12 of a nonpositive integer.
    """
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"gamma has a pole at {z!r}")
    if z.real < 0.5:
        # reflection: Gamma(z) Gamma(1-z) = pi / sin(pi z)
        value = math.pi / (_sinpi(z) * _lanczos(1.0 - z))
    else:
        value = _lanczos(z)
    return require_finite(value, f"gamma({z!r})")


def loggamma(z: complex) -> complex:
    """Principal branch of log Gamma(z), continued from the positive axis."""
    z = complex(z)
    if is_nonpositive_integer(z):
        raise PoleError(f"log-gamma has a pole at {z!r}")
    shift = 0.0j
    while z.real < 15.0:
        shift += cmath.log(z)
        z += 1.0
    inv = 1.0 / z
    inv2 = inv * inv
    series = 0.0j
    power = inv
    for c in _STIRLING_COEF:
        series += c * power
        power *= inv2
    return (z - 0.5) * cmath.log(z) - z + 0.5 * math.log(2.0 * math.pi) + series - shift


def reciprocal_gamma(z: complex) -> complex:
    """1/Gamma(z); entire, exactly zero at the poles of Gamma."""
    z = complex(z)
    if is_nonpositive_integer(z):
        return 0j
    return 1.0 / gamma(z)


def pochhammer(a: complex, m: int) -> complex:
    """Rising factorial (a)_m = a (a+1) ... (a+m-1)."""
    if m < 0:
        raise ValueError("pochhammer needs m >= 0")
    a = complex(a)
    if m == 0:
        return 1 + 0j
    pole = _nearest_nonpositive_integer(a)
    if m <= POCHHAMMER_DIRECT_MAX or pole is not None:
        if pole is not None and m > -pole:
            return 0j
        value = 1 + 0j
        for k in range(m):
            value *= a + k
        return require_finite(value, f"pochhammer({a!r}, {m})")
    try:
        value = cmath.exp(loggamma(a + m) - loggamma(a))
    except OverflowError:
        raise OverflowError(f"pochhammer({a!r}, {m}) overflows") from None
    return require_finite(value, f"pochhammer({a!r}, {m})")


def binomial(n: int, k: int) -> int:
    return math.comb(n, k)


def stirling_magnitude(n: int) -> float:
    """sqrt(2 pi n) (n/e)^n, the leading Stirling approximation of n!."""
    if n < 1:
        raise ValueError("stirling_magnitude needs n >= 1")
    return math.exp(0.5 * math.log(2.0 * math.pi * n) + n * (math.log(n) - 1.0))
