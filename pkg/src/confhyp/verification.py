"""Seeded random draws and the identity / oracle batches behind ``confhyp verify``.

Draws come from numpy's PCG64 bit generator seeded with the user's seed, so
a failing draw can be reproduced by any implementation of PCG64.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Iterable, Optional

import numpy as np

from .errors import SpecialFunctionError
from .hyperseries import DEFAULT_CONTROL, SeriesControl
from .identities import recurrence_8, relative_residual, sum_identity_10
from .integrals import (
    GOLDEN_PATH,
    IntegralSpec,
    LaplaceSpec,
    integral_closed_general,
    integral_closed_l0,
    integral_closed_l0_alt,
    laplace_integral_f2,
    quadrature_oracle,
    read_golden,
)
from .wfunction import WArgs, w_asymptotic_infinity, w_asymptotic_zero, w_eval

__all__ = [
    "make_rng",
    "draw_box",
    "draw_w_args",
    "draw_recurrence",
    "draw_integral",
    "draw_laplace",
    "draw_asymptotic",
    "CheckResult",
    "SUITES",
    "DEFAULT_TOL",
    "run_suite",
]

SUITES = ("recurrences", "sums", "asymptotics", "integrals")
DEFAULT_TOL = {
    "recurrence_8": 1e-9,
    "sum_identity_10": 1e-8,
    "integral_vs_oracle": 1e-7,
    "integral_l0_forms": 1e-10,
    "laplace_vs_oracle": 1e-6,
    "golden_integrals": 1e-10,
}
# fixed acceptance bands for the asymptotic regimes
ASYMPTOTIC_VARIATION = 3.0
SMALL_Z_BAND = 0.2
SMALL_Z = -0.02
LAPLACE_H = (2.5, 3.0, 5.0, 10.0)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def draw_box(rng, re=(0.3, 2.0), im=(-0.5, 0.5)) -> complex:
    return complex(rng.uniform(*re), rng.uniform(*im))


def _polar(rng, r_range) -> complex:
    r = rng.uniform(*r_range)
    theta = rng.uniform(-math.pi, math.pi)
    return complex(r * math.cos(theta), r * math.sin(theta))


def draw_w_args(rng, z_range=(1.0, 10.0)) -> WArgs:
    a, b, g, d = (draw_box(rng) for _ in range(4))
    return WArgs(a, b, g, d, _polar(rng, z_range))


def draw_recurrence(rng) -> WArgs:
    return draw_w_args(rng, (1.5, 8.0))


def draw_integral(rng) -> IntegralSpec:
    a = draw_box(rng, (0.5, 2.5))
    b = draw_box(rng, (0.5, 3.0))
    g = draw_box(rng, (0.0, 1.5))
    l = int(rng.integers(0, 3))
    rho = float(rng.uniform(0.5, 3.0))
    return IntegralSpec(a, b, g, l, rho)


def draw_laplace(rng, h: float) -> LaplaceSpec:
    a = draw_box(rng, (0.5, 2.0), (-0.3, 0.3))
    b = draw_box(rng, (0.3, 2.5), (-0.3, 0.3))
    g = draw_box(rng, (-0.3, 0.5), (-0.3, 0.3))
    return LaplaceSpec(a, b, g, h)


def draw_asymptotic(rng) -> WArgs:
    """Parameters with Re(b - a - g) in [0.5, 1.5], away from the zeros of 1/Gamma."""
    a = draw_box(rng, (0.2, 0.8), (-0.1, 0.1))
    g = draw_box(rng, (0.1, 0.4), (-0.1, 0.1))
    b = a + g + draw_box(rng, (0.5, 1.5), (-0.1, 0.1))
    d = draw_box(rng, (1.2, 2.5), (-0.1, 0.1))
    return WArgs(a, b, g, d, 1.0)


@dataclass
class CheckResult:
    name: str
    count: int
    max_residual: float
    tol: float
    passed: bool
    worst: Optional[dict] = None
    failures: list = field(default_factory=list)


def _batch(name: str, items: Iterable, residual: Callable, tol: float, passes=None) -> CheckResult:
    """Evaluate ``residual(item) -> (value, params)`` for every item.

    Exceptions count as an infinite residual. ``passes`` overrides the
    default ``value <= tol`` test.
    """
    passes = passes or (lambda r: r <= tol)
    worst_val = 0.0
    worst = None
    failures = []
    count = 0
    for item in items:
        count += 1
        try:
            value, params = residual(item)
        except (SpecialFunctionError, ArithmeticError, ValueError) as exc:
            value, params = math.inf, {"draw": repr(item), "error": f"{type(exc).__name__}: {exc}"}
        if not (value <= worst_val) or worst is None:
            worst_val, worst = value, params
        if not passes(value):
            failures.append(params)
    if count == 0:
        return CheckResult(name, 0, 0.0, tol, True)
    return CheckResult(name, count, worst_val, tol, not failures, worst, failures)


def _spec_params(spec) -> dict:
    return dict(vars(spec))


# ---------------------------------------------------------------- suites


def suite_recurrences(draws: int, seed: int, tol: Optional[float], ctl: SeriesControl) -> list[CheckResult]:
    tol = tol if tol is not None else DEFAULT_TOL["recurrence_8"]
    rng = make_rng(seed)
    args = [draw_recurrence(rng) for _ in range(draws)]
    out = []
    for which in "abc":
        def residual(w, which=which):
            rep = recurrence_8(which, w.alpha, w.beta, w.gamma, w.delta, w.z, ctl)
            return rep.residual, rep.params

        out.append(_batch(f"recurrence_8{which}", args, residual, tol))
    return out


def suite_sums(draws: int, seed: int, tol: Optional[float], ctl: SeriesControl) -> list[CheckResult]:
    """Partial sums at s = 60 must meet tol and shrink further by s = 120."""
    tol = tol if tol is not None else DEFAULT_TOL["sum_identity_10"]
    rng = make_rng(seed + 1)
    items = []
    for _ in range(draws):
        a, b, g = (draw_box(rng) for _ in range(3))
        z = _polar(rng, (1.5, 8.0))
        r = int(rng.integers(0, 3))
        items.append((dict(alpha=a, beta=b, gamma=g), z, r))
    out = []
    for which in "abc":
        def residual(item, which=which):
            params, z, r = item
            r60 = sum_identity_10(which, params, z, r, 60, ctl).residual
            r120 = sum_identity_10(which, params, z, r, 120, ctl).residual
            record = dict(params, z=z, r=r, residual_60=r60, residual_120=r120)
            # a residual within tol at s = 60 that does not shrink by s = 120 still fails
            if r60 <= tol and not (r120 < r60 or r60 == 0):
                return math.inf, record
            return r60, record

        out.append(_batch(f"sum_identity_10{which}", items, residual, tol))
    return out


def suite_asymptotics(draws: int, seed: int, tol: Optional[float], ctl: SeriesControl) -> list[CheckResult]:
    rng = make_rng(seed + 2)
    far = [draw_asymptotic(rng) for _ in range(draws)]
    thetas = [float(rng.uniform(-math.pi / 2, math.pi / 2)) for _ in range(draws)]

    def variation(item):
        w, theta = item
        limit = w_asymptotic_infinity(w)
        scaled = []
        for r in (10.0, 100.0, 1000.0):
            z = r * complex(math.cos(theta), math.sin(theta))
            scaled.append(abs(w_eval(w.replace(z=z), ctl).value - limit) * r)
        var = max(scaled) / min(scaled) if min(scaled) > 0 else math.inf
        return var, dict(_spec_params(w), theta=theta, scaled=scaled)

    def small_z(w):
        at = w.replace(z=SMALL_Z)
        ratio = w_eval(at, ctl).value / w_asymptotic_zero(at, "negative_re")
        return abs(ratio - 1.0), dict(_spec_params(at), ratio=ratio)

    return [
        _batch(
            "asymptotic_infinity_variation",
            list(zip(far, thetas)),
            variation,
            ASYMPTOTIC_VARIATION,
        ),
        _batch("asymptotic_zero_ratio", far, small_z, SMALL_Z_BAND),
    ]


def suite_golden(tol: Optional[float], ctl: SeriesControl, path=GOLDEN_PATH) -> CheckResult:
    tol = tol if tol is not None else DEFAULT_TOL["golden_integrals"]

    def residual(item):
        spec, value, _ = item
        closed = integral_closed_general(spec, ctl).value
        return relative_residual(closed, value), dict(_spec_params(spec), fixture=value, closed=closed)

    return _batch("golden_integrals", read_golden(path), residual, tol)


def suite_integrals(draws: int, seed: int, tol: Optional[float], ctl: SeriesControl) -> list[CheckResult]:
    rng = make_rng(seed + 3)
    specs = [draw_integral(rng) for _ in range(draws)]
    tol_oracle = tol if tol is not None else DEFAULT_TOL["integral_vs_oracle"]
    tol_forms = tol if tol is not None else DEFAULT_TOL["integral_l0_forms"]
    tol_laplace = tol if tol is not None else DEFAULT_TOL["laplace_vs_oracle"]

    def vs_oracle(spec):
        closed = integral_closed_general(spec, ctl).value
        oracle = quadrature_oracle(spec).value
        return abs(closed - oracle) / max(1.0, abs(oracle)), dict(_spec_params(spec), closed=closed, oracle=oracle)

    def forms(spec):
        s0 = spec.replace(l=0)
        v1 = integral_closed_l0(s0, ctl).value
        v2 = integral_closed_l0_alt(s0, ctl).value
        v3 = integral_closed_general(s0, ctl).value
        res = max(relative_residual(v1, v2), relative_residual(v1, v3), relative_residual(v2, v3))
        return res, dict(_spec_params(s0), forms=(v1, v2, v3))

    laplace_items = []
    per_h = max(1, math.ceil(draws / len(LAPLACE_H))) if draws else 0
    for h in LAPLACE_H:
        laplace_items.extend(draw_laplace(rng, h) for _ in range(per_h))

    def laplace(spec):
        closed = laplace_integral_f2(spec, ctl).value
        quad = quadrature_oracle(IntegralSpec(spec.alpha, spec.beta, spec.gamma, 0, 1.0), weight_h=spec.h).value
        return relative_residual(closed, quad), dict(_spec_params(spec), closed=closed, oracle=quad)

    return [
        _batch("integral_vs_oracle", specs, vs_oracle, tol_oracle),
        _batch("integral_l0_forms", specs, forms, tol_forms),
        _batch("laplace_vs_oracle", laplace_items, laplace, tol_laplace),
    ]


_RUNNERS = {
    "recurrences": suite_recurrences,
    "sums": suite_sums,
    "asymptotics": suite_asymptotics,
    "integrals": suite_integrals,
}


def run_suite(
    suite: str,
    draws: int,
    seed: int,
    tol: Optional[float] = None,
    ctl: SeriesControl = DEFAULT_CONTROL,
) -> list[CheckResult]:
    """Run one named suite (or ``all``); golden fixtures are always compared
    for ``integrals`` and ``all``, even with zero random draws."""
    names = SUITES if suite == "all" else (suite,)
    out: list[CheckResult] = []
    for name in names:
        if name not in _RUNNERS:
            raise ValueError(f"unknown suite {name!r}")
        out.extend(_RUNNERS[name](draws, seed, tol, ctl))
        if name == "integrals":
            out.append(suite_golden(tol, ctl))
    return out
