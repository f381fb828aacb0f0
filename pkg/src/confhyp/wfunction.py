"""The function W(alpha, beta, gamma, delta; z) solving

    -z f'(z) + beta f(z) = E(alpha+1; delta; z) E(alpha+gamma; beta; -z).

Three evaluation paths are provided:

* ``w_eval_eseries``: the outer series in z^{-nu} of E-functions,
* ``w_eval_kdf``: the equivalent Kampe de Feriet double series in 1/z,
* ``w_eval_integral``: a finite integral of two Kummer functions over [0, 1],
  valid for Re beta > 0, used when both series lose accuracy near z = 0.
"""

from __future__ import annotations

import cmath
import math
import warnings
from dataclasses import dataclass

from scipy import integrate

from .core import EvalResult, gamma, is_nonpositive_integer, loggamma, reciprocal_gamma
from .doubleseries import KdFSpec, _diagonals, kdf_eval
from .errors import NoConvergence, ParameterError, QuadratureFailure
from .hyperseries import DEFAULT_CONTROL, EPS, ParamList, SeriesControl, kummer_m, pfq
from .macrobert import EFunctionSpec, e_eval

__all__ = [
    "WArgs",
    "w_eval",
    "w_eval_eseries",
    "w_eval_kdf",
    "w_eval_integral",
    "w_asymptotic_infinity",
    "w_asymptotic_zero",
    "ode_residual",
    "tail_estimate",
    "w_inverse_power_coefficients",
    "KDF_BELOW",
]

# default path switch: double series below this |z|, E-series at or above
KDF_BELOW = 4.0


@dataclass(frozen=True)
class WArgs:
    alpha: complex
    beta: complex
    gamma: complex
    delta: complex
    z: complex

    def __post_init__(self):
        for name in ("alpha", "beta", "gamma", "delta", "z"):
            object.__setattr__(self, name, complex(getattr(self, name)))

    def validate(self) -> None:
        if self.z == 0:
            raise ParameterError("W needs z != 0")
        checks = {
            "delta": self.delta,
            "beta": self.beta,
            "alpha+1": self.alpha + 1,
            "alpha+gamma": self.alpha + self.gamma,
        }
        for name, value in checks.items():
            if is_nonpositive_integer(value):
                raise ParameterError(f"{name} = {value} is a nonpositive integer")

    def replace(self, **changes) -> "WArgs":
        fields = dict(alpha=self.alpha, beta=self.beta, gamma=self.gamma, delta=self.delta, z=self.z)
        fields.update(changes)
        return WArgs(**fields)


def w_asymptotic_infinity(args: WArgs) -> complex:
    """Limit of W as z -> infinity: Gamma(a+1) Gamma(a+g) / (Gamma(b+1) Gamma(d))."""
    a, b, g, d = args.alpha, args.beta, args.gamma, args.delta
    return gamma(a + 1) * gamma(a + g) * reciprocal_gamma(b + 1) * reciprocal_gamma(d)


def w_asymptotic_zero(args: WArgs, half_plane: str) -> complex:
    """Leading behaviour as z -> 0 from the given half plane (principal branches).

    negative_re: e^{-1/z} (-z)^{g+d} Gamma(a+g) / Gamma(b-a-g)
    positive_re: e^{1/z} z^{b+2-g} Gamma(a+1) / Gamma(d-a-1)
    A denominator gamma at a pole gives 0.
    """
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    if half_plane == "negative_re":
        if not z.real < 0:
            raise ParameterError("negative_re branch needs Re z < 0")
        coef = reciprocal_gamma(b - a - g)
        if coef == 0:
            return 0j
        return cmath.exp(-1.0 / z + (g + d) * cmath.log(-z)) * gamma(a + g) * coef
    if half_plane == "positive_re":
        if not z.real > 0:
            raise ParameterError("positive_re branch needs Re z > 0")
        coef = reciprocal_gamma(d - a - 1)
        if coef == 0:
            return 0j
        return cmath.exp(1.0 / z + (b + 2 - g) * cmath.log(z)) * gamma(a + 1) * coef
    raise ValueError(f"unknown half_plane {half_plane!r}")


def _kdf_spec(args: WArgs) -> KdFSpec:
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    return KdFSpec(a1=b, b1=a + 1, b2=a + g, c1=b + 1, d1=d, d2=b, z1=-1.0 / z, z2=1.0 / z)


def w_eval_kdf(args: WArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    args.validate()
    pre = w_asymptotic_infinity(args)
    return kdf_eval(_kdf_spec(args), ctl).scaled(pre)


def w_inverse_power_coefficients(args: WArgs, order: int) -> list[complex]:
    """Coefficients c_0..c_order of the expansion W = sum c_N z^{-N} as |z| -> infinity.

    c_N collects the degree-N block of the double series (z1 = -1/z, z2 = 1/z).
    ``args.z`` is ignored.
    """
    if order < 0:
        raise ValueError("order must be nonnegative")
    args.replace(z=1.0).validate()
    a, b, g, d = args.alpha, args.beta, args.gamma, args.delta
    pre = w_asymptotic_infinity(args)
    out = []
    diags = _diagonals(((b,), (b + 1,)), ((a + 1,), (d,)), ((a + g,), (b,)), -1.0, 1.0)
    for _, diag in zip(range(order + 1), diags):
        out.append(complex(pre * diag.sum()))
    return out


def tail_estimate(args: WArgs, nu: int) -> float:
    """Magnitude of the nu-th outer term u_nu (without the Gamma(a+1)/Gamma(d) factor).

        |u_nu| ~ |M(a+1; d; -1/z) z^{-nu}| e^nu nu^{Re(a+g-b)-nu-3/2} / sqrt(2 pi)
    """
    if nu < 10:
        raise ValueError("tail_estimate needs nu >= 10")
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    m = abs(kummer_m(a + 1, d, -1.0 / z).value)
    log_mag = (
        nu * (1.0 - math.log(abs(z)))
        + ((a + g - b).real - nu - 1.5) * math.log(nu)
        - 0.5 * math.log(2.0 * math.pi)
    )
    return m * math.exp(log_mag) if m else 0.0


def w_eval_eseries(args: WArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """Outer series sum_nu z^{-nu} Gamma(a+g+nu)/(nu! Gamma(b+nu)) E(a+1, b+nu; d, b+1+nu; z)."""
    args.validate()
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    w = 1.0 / z
    pre = gamma(a + 1) * reciprocal_gamma(d)
    # coef_nu = z^{-nu} Gamma(a+g+nu) / (nu! Gamma(b+1+nu)); the inner E-function
    # contributes Gamma(a+1) Gamma(b+nu) / (Gamma(d) Gamma(b+1+nu)) times a 2F2
    coef = gamma(a + g) * reciprocal_gamma(b + 1)
    nu_min = max(0.0, -(a + g).real, -b.real)
    total = 0j
    abs_total = 0.0
    inner_err = 0.0
    used = 0
    quiet = 0
    prev = math.inf
    nu = 0
    while True:
        if nu >= ctl.max_terms:
            raise NoConvergence(f"E-series for W did not converge in {ctl.max_terms} terms (z={z!r})")
        inner = pfq(ParamList([a + 1, b + nu]), ParamList([d, b + 1 + nu]), -w, ctl)
        u = coef * inner.value
        total += u
        abs_total += abs(u)
        inner_err += abs(coef) * inner.abs_error_estimate
        used += inner.terms_used
        if not math.isfinite(abs_total):
            raise NoConvergence(f"E-series for W overflowed at nu={nu} (z={z!r})")
        mag = abs(u)
        quiet = quiet + 1 if mag <= ctl.rel_tol * abs(total) else 0
        if quiet >= ctl.stagnation_window and mag < prev and nu > nu_min:
            r = mag / prev
            tail = mag * r / (1.0 - r)
            if nu + 1 >= 10:
                tail = max(tail, tail_estimate(args, nu + 1) / (1.0 - min(r, 0.5)))
            value = pre * total
            err = abs(pre) * (tail + inner_err + EPS * abs_total)
            converged = err <= ctl.rel_tol * max(1.0, abs(value))
            return EvalResult(value, err, used, converged)
        prev = mag
        coef *= w * (a + g + nu) / ((nu + 1) * (b + 1 + nu))
        nu += 1


def _kummer_stable(a: complex, b: complex, x: complex, ctl: SeriesControl) -> complex:
    # Kummer's transformation keeps the series free of cancellation for Re x < 0
    if x.real < 0:
        return cmath.exp(x) * kummer_m(b - a, b, -x, ctl).value
    return kummer_m(a, b, x, ctl).value


def w_eval_integral(args: WArgs, ctl: SeriesControl = DEFAULT_CONTROL) -> EvalResult:
    """W = Gamma(a+1) Gamma(a+g) / (Gamma(d) Gamma(b))
           * int_0^1 u^{b-1} M(a+1; d; -u/z) M(a+g; b; u/z) du,   Re b > 0.

    The integral solves the ODE and has the same limit at z = infinity.
    With u = e^{-s} the endpoint factor u^{b-1} du becomes e^{-b s} ds on
    [0, inf), so u = 0 is never sampled.
    """
    args.validate()
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    if not b.real > 0:
        raise ParameterError("integral path needs Re beta > 0")
    inner = SeriesControl(rel_tol=min(ctl.rel_tol, 1e-14), max_terms=ctl.max_terms)
    w = 1.0 / z

    def integrand(s):
        u = math.exp(-s)
        return cmath.exp(-b * s) * _kummer_stable(a + 1, d, -u * w, inner) * _kummer_stable(a + g, b, u * w, inner)

    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err, info = integrate.quad(
            integrand,
            0.0,
            math.inf,
            complex_func=True,
            epsabs=0.0,
            epsrel=max(ctl.rel_tol, 1e-13),
            limit=500,
            full_output=True,
        )
    pre = gamma(a + 1) * gamma(a + g) * reciprocal_gamma(d) * reciprocal_gamma(b)
    evals = info["real"][0]["neval"] + info["imag"][0]["neval"]
    total = pre * value
    if not math.isfinite(abs(total)):
        raise QuadratureFailure(f"integral path overflowed (z={z!r})")
    err = abs(pre) * (abs(err) + EPS * abs(value))
    return EvalResult(total, err, evals, err <= ctl.rel_tol * max(1.0, abs(total)))


def w_eval(args: WArgs, ctl: SeriesControl = DEFAULT_CONTROL, path: str = "auto") -> EvalResult:
    """Evaluate W by the named path.

    ``auto`` uses the double series for |z| < 4 and the E-series otherwise,
    falling back to the integral path (Re beta > 0) when the series result is
    not converged.
    """
    if path == "kdf":
        return w_eval_kdf(args, ctl)
    if path == "eseries":
        return w_eval_eseries(args, ctl)
    if path == "integral":
        return w_eval_integral(args, ctl)
    if path != "auto":
        raise ValueError(f"unknown path {path!r}")
    args.validate()
    first = w_eval_kdf if abs(args.z) < KDF_BELOW else w_eval_eseries
    try:
        result = first(args, ctl)
    except NoConvergence:
        if not args.beta.real > 0:
            raise
        return w_eval_integral(args, ctl)
    if result.converged or not args.beta.real > 0:
        return result
    try:
        alt = w_eval_integral(args, ctl)
    except (QuadratureFailure, NoConvergence):
        return result
    return alt if alt.abs_error_estimate < result.abs_error_estimate else result


def ode_residual(args: WArgs, ctl: SeriesControl = DEFAULT_CONTROL, scale: float = 1.0) -> float:
    """|-z f' + beta f - E(a+1; d; z) E(a+g; b; -z)| / max(1, |f|).

    f and z f' come from the double series in w = 1/z: the block of total
    degree N carries w^N, so -z f' + beta f weights it by (N + beta).
    ``scale`` multiplies f (a non-solution when != 1).
    """
    args.validate()
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    pre = w_asymptotic_infinity(args)
    spec = _kdf_spec(args)
    f = kdf_eval(spec, ctl).value * pre * scale
    lhs = kdf_eval(spec, ctl, degree_weight=lambda n: n + b).value * pre * scale
    rhs = (
        e_eval(EFunctionSpec([a + 1], [d], z), ctl).value
        * e_eval(EFunctionSpec([a + g], [b], -z), ctl).value
    )
    return abs(lhs - rhs) / max(1.0, abs(f))


def _outer_term(args: WArgs, nu: int, ctl: SeriesControl = DEFAULT_CONTROL) -> complex:
    """u_nu, the nu-th outer term without the Gamma(a+1)/Gamma(d) factor."""
    a, b, g, d, z = args.alpha, args.beta, args.gamma, args.delta, args.z
    log_coef = -nu * cmath.log(z) + loggamma(a + g + nu) - loggamma(nu + 1) - loggamma(b + 1 + nu)
    inner = pfq(ParamList([a + 1, b + nu]), ParamList([d, b + 1 + nu]), -1.0 / z, ctl).value
    return cmath.exp(log_coef) * inner

