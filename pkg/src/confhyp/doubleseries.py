"""Two-variable hypergeometric series summed over anti-diagonals.

Both the Kampe de Feriet function F^{1:1;1}_{1:1;1} and Appell's F2 are
instances of

    sum_{m,n} [(A)_{m+n} / (C)_{m+n}] [(B1)_m / (D1)_m] [(B2)_n / (D2)_n]
              x^m y^n / (m! n!)

where each bracket is a product over a (possibly empty) parameter list.
Terms of one anti-diagonal m + n = N are advanced together from the previous
diagonal, so no Pochhammer symbol is ever formed explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator, Optional, Sequence

import numpy as np

from .core import EvalResult, is_nonpositive_integer
from .errors import DomainError, NoConvergence, ParameterError
from .hyperseries import DEFAULT_CONTROL, EPS, SeriesControl

__all__ = [
    "KdFSpec",
    "AppellF2Spec",
    "double_series",
    "kdf_eval",
    "appell_f2",
    "rectangular_sum",
]


def _factor(ups: Sequence[complex], lows: Sequence[complex], k):
    """prod (u + k) / prod (l + k); ``k`` may be a scalar or an array."""
    out = 1.0
    for u, lo in zip(ups, lows):
        out = out * ((u + k) / (lo + k))
    for u in ups[len(lows):]:
        out = out * (u + k)
    for lo in lows[len(ups):]:
        out = out / (lo + k)
    return out


def _check_lower(values: Sequence[complex], what: str) -> None:
    for v in values:
        if is_nonpositive_integer(v):
            raise ParameterError(f"{what} parameter {v} is a nonpositive integer")


def _diagonals(shared, row1, row2, x, y) -> Iterator[np.ndarray]:
    """Yield the array of terms on each anti-diagonal, index m = 0..N."""
    a_up, a_low = shared
    b1, d1 = row1
    b2, d2 = row2
    diag = np.ones(1, dtype=complex)
    n_total = 0
    while True:
        yield diag
        s = _factor(a_up, a_low, n_total)
        n = n_total - np.arange(n_total + 1)
        step_n = diag * (s * y) * _factor(b2, d2, n) / (n + 1)
        step_m = diag[-1] * s * _factor(b1, d1, n_total) * x / (n_total + 1)
        diag = np.empty(n_total + 2, dtype=complex)
        diag[:-1] = step_n
        diag[-1] = step_m
        n_total += 1


def double_series(
    shared: tuple[Sequence[complex], Sequence[complex]],
    row1: tuple[Sequence[complex], Sequence[complex]],
    row2: tuple[Sequence[complex], Sequence[complex]],
    x: complex,
    y: complex,
    ctl: SeriesControl = DEFAULT_CONTROL,
    degree_weight: Optional[Callable[[int], complex]] = None,
) -> EvalResult:
    """Sum the generic double series by anti-diagonal blocks.

    Each parameter group is a pair ``(upper, lower)`` of plain lists. When
    ``degree_weight`` is given, the block of total degree N is multiplied by
    ``degree_weight(N)`` before accumulation (used for term-wise derivatives).

    Stops once ``stagnation_window`` consecutive blocks have absolute mass at
    most ``rel_tol * |partial|`` and the block masses are shrinking.
    """
    shared = tuple(tuple(complex(v) for v in g) for g in shared)
    row1 = tuple(tuple(complex(v) for v in g) for g in row1)
    row2 = tuple(tuple(complex(v) for v in g) for g in row2)
    _check_lower(shared[1] + row1[1] + row2[1], "lower")
    x = complex(x)
    y = complex(y)
    every = shared[0] + shared[1] + row1[0] + row1[1] + row2[0] + row2[1]
    n_min = max([0.0] + [-v.real for v in every])
    # rounding in a degree-N term grows like sqrt(N * m) ulps
    m = len(every) + 2

    total = 0j
    abs_total = 0.0
    round_total = 0.0
    used = 0
    quiet = 0
    prev_mass = math.inf
    # overflow shows up as a non-finite block and is reported as NoConvergence
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        for n_total, diag in enumerate(_diagonals(shared, row1, row2, x, y)):
            if used + diag.size > ctl.max_terms:
                raise NoConvergence(
                    f"double series did not converge in {ctl.max_terms} terms "
                    f"(x={x!r}, y={y!r}, |partial|={abs(total):.3g})"
                )
            weight = 1.0 if degree_weight is None else degree_weight(n_total)
            mass = float(np.abs(diag).sum()) * abs(weight)
            block = complex(diag.sum()) * weight
            total += block
            abs_total += mass
            round_total += mass * (1.0 + math.sqrt(n_total * m))
            used += diag.size
            if not (math.isfinite(abs_total) and math.isfinite(abs(total))):
                raise NoConvergence(f"double series overflowed at degree {n_total} (x={x!r}, y={y!r})")
            quiet = quiet + 1 if mass <= ctl.rel_tol * abs(total) else 0
            shrinking = mass < prev_mass
            if mass == 0.0 and n_total > n_min and not diag.any():
                # every later diagonal is built from this one
                err = EPS * round_total
                return EvalResult(total, err, used, err <= ctl.rel_tol * max(1.0, abs(total)))
            if quiet >= ctl.stagnation_window and shrinking and n_total > n_min:
                r = mass / prev_mass
                tail = mass * r / (1.0 - r)
                err = tail + EPS * round_total
                converged = err <= ctl.rel_tol * max(1.0, abs(total))
                return EvalResult(total, err, used, converged)
            prev_mass = mass
    raise AssertionError("unreachable")


@dataclass(frozen=True)
class KdFSpec:
    """Parameters of F^{1:1;1}_{1:1;1}[a1 : b1 ; b2 ; c1 : d1 ; d2 ; z1, z2]."""

    a1: complex
    b1: complex
    b2: complex
    c1: complex
    d1: complex
    d2: complex
    z1: complex
    z2: complex

    def __post_init__(self):
        for name in ("a1", "b1", "b2", "c1", "d1", "d2", "z1", "z2"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def validate(self) -> None:
        for name in ("c1", "d1", "d2"):
            if is_nonpositive_integer(getattr(self, name)):
                raise ParameterError(f"{name} = {getattr(self, name)} is a nonpositive integer")


@dataclass(frozen=True)
class AppellF2Spec:
    a: complex
    b1: complex
    b2: complex
    c1: complex
    c2: complex
    x: complex
    y: complex

    def __post_init__(self):
        for name in ("a", "b1", "b2", "c1", "c2", "x", "y"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def validate(self) -> None:
        for name in ("c1", "c2"):
            if is_nonpositive_integer(getattr(self, name)):
                raise ParameterError(f"{name} = {getattr(self, name)} is a nonpositive integer")
        if abs(self.x) + abs(self.y) >= 1.0:
            raise DomainError(
                f"Appell F2 needs |x| + |y| < 1, got {abs(self.x) + abs(self.y):.6g}"
            )


def kdf_eval(
    spec: KdFSpec,
    ctl: SeriesControl = DEFAULT_CONTROL,
    degree_weight: Optional[Callable[[int], complex]] = None,
) -> EvalResult:
    spec.validate()
    return double_series(
        ((spec.a1,), (spec.c1,)),
        ((spec.b1,), (spec.d1,)),
        ((spec.b2,), (spec.d2,)),
        spec.z1,
        spec.z2,
        ctl,
        degree_weight,
    )


def appell_f2(spec: AppellF2Spec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    spec.validate()
    return double_series(
        ((spec.a,), ()),
        ((spec.b1,), (spec.c1,)),
        ((spec.b2,), (spec.c2,)),
        spec.x,
        spec.y,
        ctl,
    )


def rectangular_sum(spec: KdFSpec, m_max: int, n_max: int) -> complex:
    """Plain rectangular partial sum over 0 <= m1 <= m_max, 0 <= m2 <= n_max.

    Reference summation order for cross-checking the diagonal engine.
    """
    spec.validate()
    col = 1 + 0j
    total = 0j
    for m1 in range(m_max + 1):
        term = col
        for m2 in range(n_max + 1):
            total += term
            k = m1 + m2
            term *= (spec.a1 + k) / (spec.c1 + k) * (spec.b2 + m2) / (spec.d2 + m2) * spec.z2 / (m2 + 1)
        col *= (spec.a1 + m1) / (spec.c1 + m1) * (spec.b1 + m1) / (spec.d1 + m1) * spec.z1 / (m1 + 1)
    return total
