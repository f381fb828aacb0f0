"""Closed forms for integrals of products of two E-functions, and their quadrature oracle.

The integrand is

    t^{beta+l} E(alpha; beta; lam/t) E(alpha+gamma; beta; -lam/t)

on (0, rho], optionally weighted by e^{-h t} on (0, infinity). Here
``lam`` has unit modulus; lam = i is the case with oscillatory Kummer factors.
"""

from __future__ import annotations

import cmath
import json
import math
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

from scipy import integrate

from .core import EvalResult, binomial, gamma, reciprocal_gamma
from .doubleseries import AppellF2Spec, appell_f2
from .errors import DomainError, ParameterError, QuadratureFailure
from .hyperseries import DEFAULT_CONTROL, SeriesControl, kummer_m
from .macrobert import EFunctionSpec, e_eval
from .wfunction import WArgs, w_eval

__all__ = [
    "IntegralSpec",
    "LaplaceSpec",
    "integral_closed_l0",
    "integral_closed_l0_alt",
    "integral_closed_l1",
    "integral_closed_general",
    "laplace_integral_f2",
    "quadrature_oracle",
    "GOLDEN_PATH",
    "golden_cases",
    "derive_golden",
    "read_golden",
    "write_golden",
]

GOLDEN_PATH = Path(__file__).with_name("data") / "golden_integrals.json"
UNIT_TOL = 1e-12


@dataclass(frozen=True)
class IntegralSpec:
    alpha: complex
    beta: complex
    gamma: complex
    l: int = 0
    rho: float = 1.0
    lam: complex = 1j

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "lam"):
            object.__setattr__(self, name, complex(getattr(self, name)))
        object.__setattr__(self, "rho", float(self.rho))
        object.__setattr__(self, "l", int(self.l))

    def validate(self) -> None:
        if self.l < 0:
            raise ParameterError("l must be nonnegative")
        if not self.beta.real + self.l > -1:
            raise ParameterError("need Re(beta) + l > -1 for integrability at t = 0")
        if not (math.isfinite(self.rho) and self.rho > 0):
            raise DomainError(f"rho must be finite and positive, got {self.rho}")
        if abs(abs(self.lam) - 1.0) > UNIT_TOL:
            raise DomainError(f"lambda must have unit modulus, got |lambda|={abs(self.lam):.6g}")

    def replace(self, **changes) -> "IntegralSpec":
        fields = dict(alpha=self.alpha, beta=self.beta, gamma=self.gamma, l=self.l, rho=self.rho, lam=self.lam)
        fields.update(changes)
        return IntegralSpec(**fields)


@dataclass(frozen=True)
class LaplaceSpec:
    alpha: complex
    beta: complex
    gamma: complex
    h: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "h"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def validate(self) -> None:
        if not abs(self.h) > 2:
            raise DomainError(f"Laplace form needs |h| > 2, got |h|={abs(self.h):.6g}")
        if not self.beta.real > -1:
            raise ParameterError("need Re(beta) > -1")


class _Acc:
    """Running sum of c_k * EvalResult with first-order error bookkeeping."""

    def __init__(self):
        self.value = 0j
        self.err = 0.0
        self.terms = 0
        self.converged = True

    def add(self, coef: complex, res: EvalResult) -> None:
        self.value += coef * res.value
        self.err += abs(coef) * res.abs_error_estimate
        self.terms += res.terms_used
        self.converged = self.converged and res.converged

    def result(self, scale: complex = 1.0) -> EvalResult:
        value = self.value * scale
        err = self.err * abs(scale)
        return EvalResult(value, err, self.terms, self.converged)


def _w(a, b, g, d, z, ctl) -> EvalResult:
    return w_eval(WArgs(a, b, g, d, z), ctl)


def _e(upper, lower, z, ctl) -> EvalResult:
    return e_eval(EFunctionSpec(upper, lower, z), ctl)


def integral_closed_l0(spec: IntegralSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """rho^{b+1} [E(a;b;lam/rho) E(a+g,b+1; b,b+2; -lam/rho)
                  + (rho/lam) b W(a,b+2,g,b+1; lam/rho) + (rho/lam)^2 W(a,b+3,g+1,b+1; lam/rho)]"""
    spec.validate()
    if spec.l != 0:
        raise ParameterError("integral_closed_l0 needs l = 0")
    a, b, g, rho, lam = spec.alpha, spec.beta, spec.gamma, spec.rho, spec.lam
    z = lam / rho
    q = rho / lam
    e1 = _e([a], [b], z, ctl)
    e2 = _e([a + g, b + 1], [b, b + 2], -z, ctl)
    acc = _Acc()
    acc.value = e1.value * e2.value
    acc.err = abs(e1.value) * e2.abs_error_estimate + abs(e2.value) * e1.abs_error_estimate
    acc.terms = e1.terms_used + e2.terms_used
    acc.converged = e1.converged and e2.converged
    acc.add(q * b, _w(a, b + 2, g, b + 1, z, ctl))
    acc.add(q * q, _w(a, b + 3, g + 1, b + 1, z, ctl))
    return acc.result(rho ** (b + 1))


def integral_closed_l0_alt(spec: IntegralSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """rho^{b+1} [b W(a-1,b+1,g+1,b; lam/rho) + (rho/lam) W(a-1,b+2,g+2,b; lam/rho)]"""
    spec.validate()
    if spec.l != 0:
        raise ParameterError("integral_closed_l0_alt needs l = 0")
    a, b, g, rho, lam = spec.alpha, spec.beta, spec.gamma, spec.rho, spec.lam
    z = lam / rho
    acc = _Acc()
    acc.add(b, _w(a - 1, b + 1, g + 1, b, z, ctl))
    acc.add(rho / lam, _w(a - 1, b + 2, g + 2, b, z, ctl))
    return acc.result(rho ** (b + 1))


def integral_closed_l1(spec: IntegralSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """The l = 1 case written out:

    rho^{b+2} [b (b+1) W(a-1,b+2,g+1,b) + 2 (b+1)(rho/lam) W(a-1,b+3,g+2,b)
               + (rho/lam)^2 W(a-1,b+4,g+3,b)],   all at lam/rho.
    """
    spec.validate()
    if spec.l != 1:
        raise ParameterError("integral_closed_l1 needs l = 1")
    a, b, g, rho, lam = spec.alpha, spec.beta, spec.gamma, spec.rho, spec.lam
    z = lam / rho
    q = rho / lam
    acc = _Acc()
    acc.add(b * (b + 1), _w(a - 1, b + 2, g + 1, b, z, ctl))
    acc.add(2 * (b + 1) * q, _w(a - 1, b + 3, g + 2, b, z, ctl))
    acc.add(q * q, _w(a - 1, b + 4, g + 3, b, z, ctl))
    return acc.result(rho ** (b + 2))


def integral_closed_general(spec: IntegralSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """rho^{b+l+1} sum_{n=0}^{l+1} (rho/lam)^n Gamma(b+l+1)/Gamma(b+n) C(l+1,n)
                                   W(a-1, b+l+n+1, g+n+1, b; lam/rho)"""
    spec.validate()
    a, b, g, l, rho, lam = spec.alpha, spec.beta, spec.gamma, spec.l, spec.rho, spec.lam
    z = lam / rho
    q = rho / lam
    top = gamma(b + l + 1)
    acc = _Acc()
    for n in range(l + 2):
        coef = q**n * top * reciprocal_gamma(b + n) * binomial(l + 1, n)
        if coef == 0:
            continue
        acc.add(coef, _w(a - 1, b + l + n + 1, g + n + 1, b, z, ctl))
    return acc.result(rho ** (b + l + 1))


def laplace_integral_f2(spec: LaplaceSpec, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """int_0^inf t^b e^{-h t} E(a;b;i/t) E(a+g;b;-i/t) dt
       = b Gamma(a) Gamma(a+g) / (h^{b+1} Gamma(b)) F2(b+1; a, a+g; b, b; i/h, -i/h)"""
    spec.validate()
    a, b, g, h = spec.alpha, spec.beta, spec.gamma, spec.h
    f2 = appell_f2(AppellF2Spec(b + 1, a, a + g, b, b, 1j / h, -1j / h), ctl)
    pre = b * gamma(a) * gamma(a + g) * reciprocal_gamma(b) * cmath.exp(-(b + 1) * cmath.log(h))
    return f2.scaled(pre)


def _cutoff(spec: IntegralSpec, h: complex, abs_tol: float) -> float:
    """Upper limit T with |e^{-hT}| T^{Re b + l + 2} below abs_tol."""
    power = spec.beta.real + spec.l + 2.0
    target = -math.log(abs_tol)
    t = target / h.real
    for _ in range(50):
        t_new = (target + max(power, 0.0) * math.log(max(t, 1.0))) / h.real
        if abs(t_new - t) < 1e-9:
            break
        t = t_new
    return max(t, 1.0)


def _quad(func, lo, hi, abs_tol, rel_tol, limit):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(
            func,
            lo,
            hi,
            complex_func=True,
            epsabs=abs_tol,
            epsrel=rel_tol,
            limit=limit,
            full_output=True,
        )
    return value, abs(err), info["real"][0]["neval"] + info["imag"][0]["neval"]


def quadrature_oracle(
    spec: IntegralSpec,
    weight_h: Optional[complex] = None,
    abs_tol: float = 1e-12,
    rel_tol: float = 1e-12,
    limit: int = 500,
) -> EvalResult:
    """Adaptive Gauss-Kronrod quadrature of the reduced integrand

        t^{b+l} Gamma(a) Gamma(a+g) / Gamma(b)^2 M(a; b; -t/lam) M(a+g; b; t/lam) [e^{-h t}]

    over (0, rho], or (0, T] with an automatic cutoff T when ``weight_h`` is
    given. Near the origin t = c e^{-s} with s in [0, inf): the t^{b+l}
    endpoint factor becomes the decay e^{-(b+l+1) s}, bisection in s is
    geometric refinement in t, and t = 0 is never sampled.
    """
    spec.validate()
    a, b, g, l, lam = spec.alpha, spec.beta, spec.gamma, spec.l, spec.lam
    if weight_h is not None:
        h = complex(weight_h)
        if not h.real > 0:
            raise DomainError("weight_h needs Re(h) > 0")
        upper = _cutoff(spec, h, abs_tol)
        corner = min(1.0, upper)
    else:
        h = None
        upper = corner = spec.rho
    inner = SeriesControl(rel_tol=1e-15)
    pre = gamma(a) * gamma(a + g) * reciprocal_gamma(b) ** 2
    power = b + l
    log_c = math.log(corner)

    def smooth(t):
        value = kummer_m(a, b, -t / lam, inner).value * kummer_m(a + g, b, t / lam, inner).value
        if h is not None:
            value *= cmath.exp(-h * t)
        return value

    def near_origin(s):
        # t^{b+l} dt with t = c e^{-s}
        return cmath.exp((power + 1) * (log_c - s)) * smooth(corner * math.exp(-s))

    def far(t):
        return cmath.exp(power * math.log(t)) * smooth(t)

    scaled_tol = abs_tol / max(abs(pre), 1e-300)
    value, err, evals = _quad(near_origin, 0.0, math.inf, scaled_tol, rel_tol, limit)
    if upper > corner:
        v2, e2, n2 = _quad(far, corner, upper, scaled_tol, rel_tol, limit)
        value, err, evals = value + v2, err + e2, evals + n2
    total = pre * value
    err = abs(pre) * err
    if h is not None:
        err += abs_tol
    if not math.isfinite(abs(total)) or err > max(abs_tol, rel_tol * abs(total)) * 10:
        raise QuadratureFailure(
            f"quadrature error bound {err:.3g} did not reach tolerance (|value|={abs(total):.3g})"
        )
    return EvalResult(total, err, evals, True)


# ---------------------------------------------------------------- golden vectors


def golden_cases() -> list[IntegralSpec]:
    """Fixed specs whose oracle values are frozen into the fixture file."""
    return [
        IntegralSpec(1, 1, 0, 0, 2.0),
        IntegralSpec(1, 1, 0, 1, 2.0),
        IntegralSpec(1.5, 2, 0.5, 0, 1.0),
        IntegralSpec(1.5, 2, 0.5, 1, 1.0),
        IntegralSpec(1.5, 2, 0.5, 2, 2.5),
        IntegralSpec(2 - 0.5j, 4, 1j, 0, 1.0),
        IntegralSpec(2 - 1j, 4, 2j, 1, 1.0),
        IntegralSpec(0.8 + 0.3j, 1.4 - 0.2j, 0.6 + 0.1j, 0, 1.7),
        IntegralSpec(1.2, 0.7, 0.4, 1, 0.8, lam=-1j),
        IntegralSpec(1.1, 1.6, 0.3, 0, 1.3, lam=1.0),
        IntegralSpec(1.3, 2.2, 0.2, 0, 1.5, lam=cmath.exp(1j * math.pi / 3)),
    ]


def _fmt(x: float) -> str:
    return "%.17g" % x


def _fmt_c(z: complex) -> list[str]:
    return [_fmt(z.real), _fmt(z.imag)]


def _record(spec: IntegralSpec, res: EvalResult) -> dict:
    return {
        "params": {
            "alpha": _fmt_c(spec.alpha),
            "beta": _fmt_c(spec.beta),
            "gamma": _fmt_c(spec.gamma),
        },
        "lambda": _fmt_c(spec.lam),
        "l": spec.l,
        "rho": _fmt(spec.rho),
        "value_re": _fmt(res.value.real),
        "value_im": _fmt(res.value.imag),
        "abs_err": _fmt(res.abs_error_estimate),
    }


def _parse_c(pair) -> complex:
    return complex(float(pair[0]), float(pair[1]))


def derive_golden(cases: Optional[list[IntegralSpec]] = None) -> list[dict]:
    """Run the quadrature oracle on every case and return fixture records."""
    return [_record(spec, quadrature_oracle(spec)) for spec in (cases or golden_cases())]


def write_golden(records: list[dict], path: Path = GOLDEN_PATH) -> None:
    Path(path).write_text(json.dumps(records, indent=1) + "\n", encoding="utf-8")


def read_golden(path: Path = GOLDEN_PATH) -> list[tuple[IntegralSpec, complex, float]]:
    """Fixture records as (spec, value, abs_err)."""
    records = json.loads(Path(path).read_text(encoding="utf-8"))
    out = []
    for rec in records:
        p = rec["params"]
        spec = IntegralSpec(
            _parse_c(p["alpha"]),
            _parse_c(p["beta"]),
            _parse_c(p["gamma"]),
            int(rec["l"]),
            float(rec["rho"]),
            _parse_c(rec["lambda"]),
        )
        value = complex(float(rec["value_re"]), float(rec["value_im"]))
        out.append((spec, value, float(rec["abs_err"])))
    return out
