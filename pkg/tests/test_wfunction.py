import math

import mpmath as mp
import pytest

from confhyp.errors import ParameterError
from confhyp.wfunction import (
    WArgs,
    _outer_term,
    ode_residual,
    tail_estimate,
    w_asymptotic_infinity,
    w_asymptotic_zero,
    w_eval,
    w_eval_eseries,
    w_eval_integral,
    w_eval_kdf,
    w_inverse_power_coefficients,
)

from conftest import box, mp_w, mp_w_integral, polar, rel

HALF = WArgs(0.5, 1.5, 0.5, 2, 2 + 1j)


@pytest.mark.parametrize("path", [w_eval_eseries, w_eval_kdf])
def test_large_z_limit(path):
    assert abs(path(WArgs(1, 2, 1, 3, 1e6)).value - 0.25) < 1e-6
    assert abs(path(WArgs(1, 1, 0, 1, 1e6)).value - 1.0) < 1e-5


def test_asymptotic_infinity_values():
    assert w_asymptotic_infinity(WArgs(1, 2, 1, 3, 1)) == pytest.approx(0.25, rel=1e-14)
    assert w_asymptotic_infinity(WArgs(1, 1, 0, 1, 1)) == pytest.approx(1.0, rel=1e-14)
    assert w_asymptotic_infinity(WArgs(0.5, 1.5, 0.5, 2, 1)) == pytest.approx(2 / 3, rel=1e-14)


@pytest.mark.parametrize("path", [w_eval_eseries, w_eval_kdf, w_eval_integral])
def test_against_extended_precision(path):
    ref = mp_w(0.5, 1.5, 0.5, 2, 2 + 1j)
    assert rel(mp_w_integral(0.5, 1.5, 0.5, 2, 2 + 1j), ref) < 1e-25
    res = path(HALF)
    assert res.converged
    assert rel(res.value, ref) < 1e-13


def test_paths_agree_at_three():
    args = HALF.replace(z=3)
    assert rel(w_eval_eseries(args).value, w_eval_kdf(args).value) < 1e-10


def test_cross_path_random(rng):
    worst = 0.0
    for _ in range(100):
        a, b, g, d = (box(rng) for _ in range(4))
        args = WArgs(a, b, g, d, polar(rng, 1, 10))
        worst = max(worst, rel(w_eval_eseries(args).value, w_eval_kdf(args).value))
    assert worst <= 1e-9


def test_ode_residual_random(rng):
    worst = 0.0
    for _ in range(100):
        a, b, g, d = (box(rng) for _ in range(4))
        worst = max(worst, ode_residual(WArgs(a, b, g, d, polar(rng, 1, 10))))
    assert worst <= 1e-8


def test_ode_residual_examples():
    assert ode_residual(WArgs(1, 2, 1, 3, 2)) <= 1e-8
    assert ode_residual(HALF) <= 1e-8
    assert ode_residual(WArgs(1, 2, 1, 3, 2), scale=1.01) >= 1e-3


def test_leading_term_rate(rng):
    for _ in range(10):
        a, b, g, d = (box(rng) for _ in range(4))
        theta = rng.uniform(-math.pi, math.pi)
        base = WArgs(a, b, g, d, 1)
        limit = w_asymptotic_infinity(base)
        scaled = []
        for r in (10, 100, 1000):
            z = r * complex(math.cos(theta), math.sin(theta))
            scaled.append(abs(w_eval(base.replace(z=z)).value - limit) * r)
        assert max(scaled) / min(scaled) < 3


def test_inverse_power_coefficients():
    args = WArgs(0.7 + 0.1j, 1.9, 0.4, 2.3, 1)
    coefs = w_inverse_power_coefficients(args, 4)
    assert coefs[0] == pytest.approx(w_asymptotic_infinity(args), rel=1e-14)
    z = 80.0
    partial = sum(c / z**k for k, c in enumerate(coefs))
    assert rel(partial, w_eval(args.replace(z=z)).value) < 1e-9
    # c1 = Gamma(a+1)Gamma(a+g) (b (a+g) - b (a+1) ... ) from the degree-one block
    a, b, g, d = args.alpha, args.beta, args.gamma, args.delta
    c1 = w_asymptotic_infinity(args) * (b / (b + 1)) * ((a + g) / b - (a + 1) / d)
    assert rel(coefs[1], c1) < 1e-13


def test_asymptotic_zero_pole_gives_zero():
    assert w_asymptotic_zero(WArgs(1, 2, 1, 3, -0.01), "negative_re") == 0


def test_asymptotic_zero_formula():
    args = WArgs(0.3, 1.1, 0.2, 1.7, -0.05)
    want = mp.exp(20) * mp.mpf(0.05) ** 1.9 * mp.gamma(0.5) / mp.gamma(0.6)
    assert rel(w_asymptotic_zero(args, "negative_re"), want) < 1e-13
    pos = args.replace(z=0.05)
    want = mp.exp(20) * mp.mpf(0.05) ** 2.9 * mp.gamma(1.3) / mp.gamma(0.4)
    assert rel(w_asymptotic_zero(pos, "positive_re"), want) < 1e-13
    with pytest.raises(ParameterError):
        w_asymptotic_zero(pos, "negative_re")


def test_small_z_ratio():
    args = WArgs(0.3, 1.1, 0.2, 1.7, -0.02)
    ratio = w_eval(args).value / w_asymptotic_zero(args, "negative_re")
    assert abs(ratio - 1) <= 0.2


def test_small_z_double_series_reports_failure():
    res = w_eval_kdf(WArgs(0.3, 1.1, 0.2, 1.7, -0.02))
    assert not res.converged


def test_tail_estimate():
    args = WArgs(1, 2, 1, 3, 2)
    ratio = tail_estimate(args, 50) / abs(_outer_term(args, 50))
    assert 0.5 <= ratio <= 2
    values = [tail_estimate(args, nu) for nu in range(10, 150, 10)]
    assert all(x > y for x, y in zip(values, values[1:]))
    assert values[-1] < 1e-100
    assert tail_estimate(args.replace(z=1), 30) >= tail_estimate(args.replace(z=2), 30)
    with pytest.raises(ValueError):
        tail_estimate(args, 5)


def test_validation():
    for bad in (dict(z=0), dict(delta=-1), dict(beta=-2), dict(alpha=-1), dict(alpha=0.5, gamma=-0.5)):
        with pytest.raises(ParameterError):
            w_eval(HALF.replace(**bad))


def test_second_coefficient_against_extended_precision():
    c = w_inverse_power_coefficients(WArgs(1, 2, 1, 3, 1), 2)
    z = mp.mpf(10) ** 4
    estimate = (mp_w(1, 2, 1, 3, z) - mp.mpf(1) / 4 - mp.mpf(1) / (18 * z)) * z**2
    assert abs(c[2] - 1 / 96) < 1e-15
    assert abs(complex(estimate) - c[2]) < 1e-5
