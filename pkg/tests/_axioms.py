"""Randomized operator-axiom cases shared by the unit and acceptance suites.

Each ``*_case(rng)`` draws one random instance and returns its error, measured
the way the corresponding tolerance is stated.
"""
import math

import numpy as np

from cxorder.fracop import GenPowerSeries, deriv_series, eval_series, power_rule
from cxorder.specfun import gamma, recip_gamma


def _ccoeffs(rng, n):
    return rng.normal(size=n) + 1j * rng.normal(size=n)


def _rel_vec(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def scaling_case(rng):
    """D^p[f(c z)] vs c^p (D^p f)(c z) at a random point."""
    q = complex(rng.uniform(-0.9, 2.0), rng.uniform(-1, 1))
    p = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
    s = GenPowerSeries(q, _ccoeffs(rng, int(rng.integers(1, 16))))
    c = rng.uniform(0.2, 2.0)
    z = complex(rng.uniform(0.1, 1.5), rng.uniform(-1, 1))
    lhs = eval_series(deriv_series(s.compose_scale(c), p), z).value
    rhs = c ** p * eval_series(deriv_series(s, p), c * z).value
    return abs(lhs - rhs) / abs(rhs)


def linearity_case(rng):
    q = complex(rng.uniform(-0.9, 2.0), rng.uniform(-1, 1))
    p = complex(rng.uniform(-3, 3), rng.uniform(-1, 1))
    n = int(rng.integers(1, 30))
    s1 = GenPowerSeries(q, _ccoeffs(rng, n))
    s2 = GenPowerSeries(q, _ccoeffs(rng, n))
    a, b = _ccoeffs(rng, 2)
    lhs = deriv_series(s1.scaled(a) + s2.scaled(b), p)
    rhs = deriv_series(s1, p).scaled(a) + deriv_series(s2, p).scaled(b)
    assert lhs.offset == rhs.offset
    return _rel_vec(lhs.values(), rhs.values())


def correspondence_case(rng):
    """Integer orders 1..3 on polynomials reproduce the ordinary derivative."""
    p = int(rng.integers(1, 4))
    deg = int(rng.integers(0, 13))
    a = _ccoeffs(rng, deg + 1)
    got = deriv_series(GenPowerSeries(0, a), p)
    assert got.offset == -p
    want = np.zeros(deg + 1, dtype=complex)
    for m in range(p, deg + 1):
        want[m] = a[m] * math.factorial(m) / math.factorial(m - p)
    return _rel_vec(got.values(), want) if deg >= p else float(np.max(np.abs(got.values())))


def inverse_case(rng):
    """D^p D^-p s = s for Re(offset) > -1 and 0 < Re p < 1."""
    q = complex(rng.uniform(-0.9, 2.0), rng.uniform(-1, 1))
    p = complex(rng.uniform(0.01, 0.99), rng.uniform(-1, 1))
    s = GenPowerSeries(q, _ccoeffs(rng, int(rng.integers(1, 30))))
    back = deriv_series(deriv_series(s, -p), p)
    assert abs(back.offset - s.offset) < 1e-14
    return _rel_vec(back.values(), s.values())


def semigroup_case(rng):
    q = complex(rng.uniform(-0.9, 3), rng.uniform(-1, 1))
    p1 = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
    p2 = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
    z = complex(rng.uniform(0.1, 3), rng.uniform(-2, 2))
    first = gamma(1 + q) * recip_gamma(1 + q - p1)
    two_step = first * power_rule(p2, q - p1, 0, z)
    one_step = power_rule(p1 + p2, q, 0, z)
    return abs(two_step - one_step) / abs(one_step)


def run(case, n, seed):
    rng = np.random.default_rng(seed)
    return [case(rng) for _ in range(n)]
