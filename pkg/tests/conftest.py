"""Independent extended-precision oracles built on mpmath."""

import mpmath as mp
import numpy as np
import pytest

from confhyp.verification import make_rng

mp.mp.dps = 40


def rel(a, b):
    return abs(complex(a) - complex(b)) / max(abs(complex(b)), 1e-300)


def mp_pfq_direct(upper, lower, x, terms=400):
    """Term-by-term sum with mpmath Pochhammer symbols."""
    x = mp.mpc(x)
    total = mp.mpc(0)
    for k in range(terms):
        t = x**k / mp.factorial(k)
        for a in upper:
            t *= mp.rf(mp.mpc(a), k)
        for b in lower:
            t /= mp.rf(mp.mpc(b), k)
        total += t
        if k > 20 and abs(t) < mp.mpf(10) ** (-35) * abs(total):
            break
    return total


def mp_efun(upper, lower, z):
    pre = mp.mpf(1)
    for a in upper:
        pre *= mp.gamma(mp.mpc(a))
    for b in lower:
        pre /= mp.gamma(mp.mpc(b))
    return pre * mp_pfq_direct(upper, lower, -1 / mp.mpc(z))


def mp_double(a1, c1, b1, d1, b2, d2, x, y, n_max=300):
    """Brute-force double sum over a triangle m1 + m2 <= n_max."""
    a1, c1, b1, d1, b2, d2, x, y = (mp.mpc(v) for v in (a1, c1, b1, d1, b2, d2, x, y))
    total = mp.mpc(0)
    for n in range(n_max + 1):
        block = mp.mpc(0)
        for m1 in range(n + 1):
            m2 = n - m1
            t = mp.rf(a1, n) / mp.rf(c1, n) if c1 is not None else mp.rf(a1, n)
            t *= mp.rf(b1, m1) / mp.rf(d1, m1) * mp.rf(b2, m2) / mp.rf(d2, m2)
            t *= x**m1 * y**m2 / (mp.factorial(m1) * mp.factorial(m2))
            block += t
        total += block
        if n > 10 and abs(block) < mp.mpf(10) ** (-32) * abs(total):
            break
    return total


def mp_w(a, b, g, d, z):
    """W through its double series in 1/z, at 40 digits."""
    a, b, g, d, z = (mp.mpc(v) for v in (a, b, g, d, z))
    pre = mp.gamma(a + 1) * mp.gamma(a + g) / (mp.gamma(b + 1) * mp.gamma(d))
    return pre * mp_double(b, b + 1, a + 1, d, a + g, b, -1 / z, 1 / z)


def mp_w_integral(a, b, g, d, z):
    """W through its integral over [0, 1] (Re b > 0); independent of the series."""
    a, b, g, d, z = (mp.mpc(v) for v in (a, b, g, d, z))
    pre = mp.gamma(a + 1) * mp.gamma(a + g) / (mp.gamma(d) * mp.gamma(b))
    f = lambda u: u ** (b - 1) * mp.hyp1f1(a + 1, d, -u / z) * mp.hyp1f1(a + g, b, u / z)
    return pre * mp.quad(f, [0, 0.5, 1])


@pytest.fixture
def rng():
    return make_rng(20240601)


def box(rng, re=(0.3, 2.0), im=(-0.5, 0.5)):
    return complex(rng.uniform(*re), rng.uniform(*im))


def polar(rng, lo, hi):
    r = rng.uniform(lo, hi)
    t = rng.uniform(-np.pi, np.pi)
    return complex(r * np.cos(t), r * np.sin(t))


_CRITERIA = {}


@pytest.fixture
def criterion():
    """Record one acceptance line: criterion(number, ok, detail)."""

    def record(number, ok, detail):
        line = f"criterion {number:>2}: {'PASS' if ok else 'FAIL'}  {detail}"
        _CRITERIA[number] = line
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for number in sorted(_CRITERIA):
            terminalreporter.write_line(_CRITERIA[number])
