"""Recurrence relations and E-function summation identities as residual checks."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Mapping, Optional

from .errors import NoConvergence, ParameterError
from .hyperseries import DEFAULT_CONTROL, ParamList, SeriesControl
from .macrobert import EFunctionSpec, e_eval
from .wfunction import WArgs, w_eval

__all__ = ["IdentityReport", "recurrence_8", "sum_identity_10", "relative_residual"]


def relative_residual(lhs: complex, rhs: complex) -> float:
    return abs(lhs - rhs) / max(1.0, abs(lhs), abs(rhs))


@dataclass(frozen=True)
class IdentityReport:
    name: str
    residual: float
    lhs: complex
    rhs: complex
    params: Mapping[str, complex] = field(default_factory=dict)
    terms_used: Optional[int] = None

    @classmethod
    def build(cls, name, lhs, rhs, params, terms_used=None) -> "IdentityReport":
        return cls(name, relative_residual(lhs, rhs), complex(lhs), complex(rhs), dict(params), terms_used)


def _e(upper, lower, z, ctl) -> complex:
    return e_eval(EFunctionSpec(ParamList(upper), ParamList(lower), z), ctl).value


def _w(a, b, g, d, z, ctl) -> complex:
    return w_eval(WArgs(a, b, g, d, z), ctl).value


def recurrence_8(which: str, alpha, beta, gamma, delta, z, ctl: SeriesControl = DEFAULT_CONTROL) -> IdentityReport:
    """Three expressions for E(a+1; d; z) E(a+g; b+1; -z) in terms of W.

    a: W(a,b,g,d) - W(a+1,b+1,g-1,d+1)/z
    b: (b-a-1)/b W(a,b,g,d) + W(a+1,b,g-1,d)/b + W(a+1,b+2,g,d+1)/(b z^2)
    c: (b-d+1)/b W(a,b,g,d) + W(a,b,g,d-1)/b + W(a+1,b+2,g,d+1)/(b z^2)
    """
    a, b, g, d, z = (complex(v) for v in (alpha, beta, gamma, delta, z))
    params = dict(alpha=a, beta=b, gamma=g, delta=d, z=z)
    lhs = _e([a + 1], [d], z, ctl) * _e([a + g], [b + 1], -z, ctl)
    if which == "a":
        rhs = _w(a, b, g, d, z, ctl) - _w(a + 1, b + 1, g - 1, d + 1, z, ctl) / z
    elif which in ("b", "c"):
        if b == 0:
            raise ParameterError("recurrences b and c need beta != 0")
        last = _w(a + 1, b + 2, g, d + 1, z, ctl) / (b * z * z)
        base = _w(a, b, g, d, z, ctl)
        if which == "b":
            rhs = (b - a - 1) / b * base + _w(a + 1, b, g - 1, d, z, ctl) / b + last
        else:
            rhs = (b - d + 1) / b * base + _w(a, b, g, d - 1, z, ctl) / b + last
    else:
        raise ValueError(f"unknown recurrence {which!r}")
    return IdentityReport.build(f"recurrence_8{which}", lhs, rhs, params)


def _sum_rhs(which, a, b, g, z, r, ctl) -> complex:
    if which == "a":
        return -_e([a + 1, b + 2], [b + 1, b + 3], z, ctl)
    if which == "b":
        rep = _e([a, (b + 1, r + 1)], [b, (b + 2, r + 1)], z, ctl)
        return z * math.factorial(r) * (_e([a], [b], z, ctl) - (b + 1) ** (r + 1) * rep)
    return -b * _w(a, b + 2, g, b + 1, z, ctl) - _w(a, b + 3, g + 1, b + 1, z, ctl) / z


def _sum_term(which, a, b, g, z, r, s, ctl) -> complex:
    head = _e([a + 1, (2, s - 1)], [b + 1, (1, s - 1)], z, ctl)
    if which == "a":
        return (-1) ** s / (b + 1) ** s * head
    if which == "b":
        # (r+s)!/s! = (s+1)(s+2)...(s+r)
        weight = math.prod(range(s + 1, s + r + 1))
        return (-1) ** s * weight / (b + 1) ** s * head
    tail = _e([a + g, (b + 1, s + 1)], [b, (b + 2, s + 1)], -z, ctl)
    return (-1) ** s * head * tail


def sum_identity_10(
    which: str,
    params: Mapping[str, complex],
    z,
    r: int = 0,
    s_terms: int = 60,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> IdentityReport:
    """Partial sum over s = 1..s_terms of the chosen E-function series versus its closed form.

    a: sum (-1)^s/(b+1)^s E(a+1,[2]_{s-1}; b+1,[1]_{s-1}; z)          = -E(a+1,b+2; b+1,b+3; z)
    b: sum (-1)^s (r+s)!/(s!(b+1)^s) E(a+1,[2]_{s-1}; b+1,[1]_{s-1}; z)
       = z r! (E(a;b;z) - (b+1)^{r+1} E(a,[b+1]_{r+1}; b,[b+2]_{r+1}; z))
    c: sum (-1)^s E(a+1,[2]_{s-1}; b+1,[1]_{s-1}; z) E(a+g,[b+1]_{s+1}; b,[b+2]_{s+1}; -z)
       = -b W(a,b+2,g,b+1;z) - W(a,b+3,g+1,b+1;z)/z

    The partial sums are reported as computed. The loop stops early only if
    ``stagnation_window`` consecutive terms fall below rel_tol * |partial|.
    """
    if which not in ("a", "b", "c"):
        raise ValueError(f"unknown sum identity {which!r}")
    if s_terms < 1:
        raise ValueError("s_terms must be positive")
    if r < 0:
        raise ValueError("r must be nonnegative")
    a = complex(params["alpha"])
    b = complex(params["beta"])
    g = complex(params.get("gamma", 0.0))
    z = complex(z)
    rhs = _sum_rhs(which, a, b, g, z, r, ctl)
    total = 0j
    quiet = 0
    used = 0
    for s in range(1, s_terms + 1):
        term = _sum_term(which, a, b, g, z, r, s, ctl)
        total += term
        used = s
        if not math.isfinite(abs(total)):
            raise NoConvergence(f"sum identity {which} overflowed at s={s}")
        quiet = quiet + 1 if abs(term) <= ctl.rel_tol * abs(total) else 0
        if quiet >= ctl.stagnation_window:
            break
    record = dict(alpha=a, beta=b, z=z, r=r)
    if which == "c":
        record["gamma"] = g
    return IdentityReport.build(f"sum_identity_10{which}", total, rhs, record, used)
