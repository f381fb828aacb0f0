import cmath
import math

import mpmath as mp
import numpy as np
import pytest

from confhyp.core import pochhammer
from confhyp.errors import NoConvergence, ParameterError
from confhyp.hyperseries import ParamList, SeriesControl, cancel_common, kummer_m, pfq, pfq_zderiv

from conftest import mp_pfq_direct, rel


def test_paramlist_expansion_and_merging():
    p = ParamList([1.5, (2, 3), 2, (4, 0)])
    assert p.expanded() == (1.5, 2, 2, 2, 2)
    assert len(p) == 5
    assert p.entries == ((1.5, 1), (2, 4))
    assert len(ParamList()) == 0
    assert ParamList.repeated(3, 0) == ParamList()
    with pytest.raises(ValueError):
        ParamList([(1, -1)])


def test_cancel_common():
    up, low = cancel_common(ParamList([1, (2, 3)]), ParamList([(2, 2), 5]))
    assert up.expanded() == (1, 2) and low.expanded() == (5,)


def test_pfq_examples():
    assert pfq([1], [1], 0.5).value == pytest.approx(math.exp(0.5), rel=1e-14)
    assert pfq([0.3 + 1j], [2.2], 0).value == 1
    ref = mp_pfq_direct([1.5, 2.0], [2.5, 3.0], -0.8)
    res = pfq([1.5, 2.0], [2.5, 3.0], -0.8)
    assert rel(res.value, ref) < 1e-14
    assert res.converged and res.abs_error_estimate <= 1e-12


def test_kummer_examples():
    assert kummer_m(1, 2, 1).value == pytest.approx(math.e - 1, rel=1e-14)
    assert kummer_m(0.4, 1.7, 0).value == 1
    ref = mp.hyp1f1(mp.mpc(0.5, 0.5), 1.5, mp.mpc(0, 2))
    assert rel(kummer_m(0.5 + 0.5j, 1.5, 2j).value, ref) < 1e-14


def test_terminating_series():
    # 1F1(-3; 2; x) is a cubic
    x = 0.7 - 0.2j
    expected = sum(pochhammer(-3, k) / pochhammer(2, k) * x**k / math.factorial(k) for k in range(4))
    assert rel(pfq([-3], [2], x).value, expected) < 1e-15


def test_parameter_errors():
    with pytest.raises(ParameterError):
        pfq([1, 2, 3], [4, 5], 0.1)
    with pytest.raises(ParameterError):
        pfq([1], [-2], 0.1)


def test_max_terms():
    with pytest.raises(NoConvergence):
        pfq([1], [1], 50.0, SeriesControl(max_terms=20))


def test_converged_flag_honours_tolerance():
    res = pfq([0.5], [1.5], 3 + 2j, SeriesControl(rel_tol=1e-6))
    assert res.converged
    assert res.abs_error_estimate <= 1e-6 * max(1, abs(res.value))
    assert res.terms_used <= 100000


def test_kummer_transformation(rng):
    worst = 0.0
    for _ in range(200):
        a = complex(rng.uniform(-3, 3), rng.uniform(-2, 2))
        b = complex(rng.uniform(0.2, 4), rng.uniform(-2, 2))
        r = rng.uniform(0, 5)
        t = rng.uniform(-np.pi, np.pi)
        x = r * cmath.exp(1j * t)
        lhs = kummer_m(a, b, x).value
        rhs = cmath.exp(x) * kummer_m(b - a, b, -x).value
        worst = max(worst, abs(lhs - rhs) / max(abs(lhs), abs(rhs), 1e-300))
    assert worst <= 1e-10


def test_cancellation_property(rng):
    for _ in range(50):
        a, b, c = (complex(rng.uniform(0.2, 3), rng.uniform(-1, 1)) for _ in range(3))
        x = complex(rng.uniform(-3, 3), rng.uniform(-3, 3))
        full = pfq([a, c], [b, c], x).value
        reduced = pfq([a], [b], x).value
        assert abs(full - reduced) <= 1e-12 * max(1, abs(reduced))


def test_repeated_blocks():
    res = pfq(ParamList([1.2, (2.5, 30)]), ParamList([0.8, (3.5, 30)]), -0.7 + 0.3j)
    ref = mp_pfq_direct([1.2] + [2.5] * 30, [0.8] + [3.5] * 30, -0.7 + 0.3j)
    assert rel(res.value, ref) < 1e-13


def test_long_blocks_stay_finite_and_error_estimate_covers():
    # [2]_{200} over [1]_{200}: the k-th term carries (k+1)^200, so the sum cancels heavily
    res = pfq(ParamList([(2, 200)]), ParamList([(1, 200)]), -1e-3)
    ref = mp_pfq_direct([2] * 200, [1] * 200, -1e-3, terms=100)
    assert math.isfinite(abs(res.value))
    assert abs(res.value - complex(ref)) <= res.abs_error_estimate


def test_term_recurrence_matches_pochhammer_terms():
    from confhyp.hyperseries import _terms

    upper, lower, x = [0.7 + 0.2j, 1.9], [2.3 - 0.1j, 0.6], 1.3 - 0.4j
    gen = _terms(ParamList(upper), ParamList(lower), x)
    for k in range(30):
        term = pochhammer(upper[0], k) * pochhammer(upper[1], k) / (
            pochhammer(lower[0], k) * pochhammer(lower[1], k)
        ) * x**k / math.factorial(k)
        assert rel(next(gen)[0], term) < 1e-13


def test_zderiv():
    x = 0.8 - 1.1j
    d = pfq_zderiv([1.2], [2.1], x).value
    # x d/dx M(a;b;x) = x a/b M(a+1;b+1;x)
    assert rel(d, x * 1.2 / 2.1 * kummer_m(2.2, 3.1, x).value) < 1e-13
