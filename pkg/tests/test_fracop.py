import cmath
import math

import mpmath
import numpy as np
import pytest
from hypothesis import given, strategies as st

import _axioms
from cxorder.errors import DomainError, PoleError, PrecisionError
from cxorder.fracop import (
    GaugeBasis,
    GenPowerSeries,
    cos_deriv_continued,
    cos_series,
    deriv_constant,
    deriv_cos_closed,
    deriv_cos_series,
    deriv_series,
    deriv_sin_closed,
    deriv_sin_series,
    eval_series,
    exp_series,
    gauge_basis,
    power_rule,
    sin_series,
)

seeds = st.integers(0, 2**32 - 1)


def test_power_rule_examples():
    assert abs(power_rule(0.5, 1, 0, 1) - 2 / math.sqrt(math.pi)) < 1e-14
    # shifted base
    assert abs(power_rule(1, 3, 2, 1) - 27) < 1e-12
    # 1+q-p a nonpositive integer: exactly zero
    assert power_rule(3, 1, 0, 2.0) == 0
    with pytest.raises(PoleError):
        power_rule(0.5, -1, 0, 1)
    with pytest.raises(DomainError):
        power_rule(1.5, 1, 0, 0)


def test_power_rule_against_mpmath():
    mpmath.mp.dps = 30
    rng = np.random.default_rng(3)
    for _ in range(200):
        p, q = complex(*rng.uniform(-2, 2, 2)), complex(*rng.uniform(-0.9, 3, 2))
        z = complex(rng.uniform(0.1, 4), rng.uniform(-3, 3))
        ref = mpmath.gamma(1 + q) * mpmath.rgamma(1 + q - p) * mpmath.power(z, q - p)
        assert abs(power_rule(p, q, 0, z) - complex(ref)) <= 1e-12 * abs(complex(ref))


def test_deriv_constant():
    assert abs(deriv_constant(0.5, 1, 4) - 1 / math.sqrt(4 * math.pi)) < 1e-14
    assert deriv_constant(0, 3.5, 2) == 3.5
    assert deriv_constant(2, 3.5, 2) == 0
    # D^-1 of a constant c is c z
    assert abs(deriv_constant(-1, 2.0, 3.0) - 6.0) < 1e-13


def test_deriv_series_identity_and_sin():
    s = sin_series(40)
    assert deriv_series(s, 0) is s
    d = deriv_series(s, 1)
    assert abs(eval_series(d, 1.0).value - math.cos(1)) < 1e-12


def test_deriv_series_pole_reports_index():
    s = GenPowerSeries(-3, [0, 0, 1.0, 2.0])
    with pytest.raises(PoleError) as err:
        deriv_series(s, 0.5)
    assert err.value.index == 2
    # zero coefficients at the poles are fine
    t = GenPowerSeries(-3, [0, 0, 0, 2.0])
    assert deriv_series(t, 0.5).offset == -3.5


def test_deriv_series_matches_power_rule():
    rng = np.random.default_rng(5)
    for _ in range(50):
        q = complex(rng.uniform(-0.9, 2), rng.uniform(-1, 1))
        p = complex(rng.uniform(-2, 2), rng.uniform(-1, 1))
        a = rng.normal(size=6) + 1j * rng.normal(size=6)
        z = complex(rng.uniform(0.2, 2), rng.uniform(-1, 1))
        got = eval_series(deriv_series(GenPowerSeries(q, a), p), z).value
        want = sum(a[m] * power_rule(p, q + m, 0, z) for m in range(6))
        assert abs(got - want) <= 1e-12 * max(abs(want), 1)


def test_eval_series_examples():
    r = eval_series(exp_series(30), 1.0)
    assert abs(r.value - math.e) < 1e-12 and r.converged
    s = GenPowerSeries(0.37 + 2j, [1, 2j, -3])
    assert abs(eval_series(s, 1.0).value - (1 + 2j - 3)) < 1e-15
    with pytest.raises(PrecisionError):
        eval_series(cos_series(40), 30.0)
    with pytest.raises(DomainError):
        eval_series(GenPowerSeries(-0.5, [1.0]), 0.0)
    assert eval_series(GenPowerSeries(0.5, [1.0]), 0.0).value == 0
    assert eval_series(GenPowerSeries(0, [2.0, 1.0]), 0.0).value == 2


def test_eval_series_vectorized_and_bound():
    w = np.linspace(-2, 2, 40) + 0.3j
    r = eval_series(exp_series(), w)
    np.testing.assert_allclose(r.value, np.exp(w), rtol=1e-15)
    assert np.all(r.error_bound <= 1e-14 * np.abs(np.exp(w)))
    short = eval_series(exp_series(8), 2.0)
    assert not short.converged
    assert abs(short.value - math.exp(2)) <= 2 * short.error_bound * math.exp(2)


def test_deriv_series_of_cos_against_mpmath():
    mpmath.mp.dps = 40
    for p in (-1.21, -0.5, 0.3, 1.7, 0.4 + 0.6j):
        d = deriv_cos_series(p, 60)
        for x in (0.3, 1.0, 5.0, 10.0):
            ref = mpmath.nsum(lambda m: (-1) ** m * mpmath.power(x, 2 * m - p)
                              * mpmath.rgamma(2 * m + 1 - p), [0, mpmath.inf])
            got = eval_series(d, x).value
            assert abs(got - complex(ref)) <= 1e-13 * max(1, abs(complex(ref)))


@pytest.mark.parametrize("q", [-3.7, -2.0, -1.21, -0.5, 0.0, 0.3, 1.5, 2.2])
def test_cos_continuation_against_mpmath(q):
    mpmath.mp.dps = 80
    x = np.array([6.0, 12.0, 25.0, 60.0])
    got = cos_deriv_continued(x, q)
    for xi, g in zip(x, got):
        ref = mpmath.nsum(lambda m: (-1) ** m * mpmath.power(xi, 2 * m - q)
                          * mpmath.rgamma(2 * m + 1 - q), [0, mpmath.inf])
        assert abs(g - float(ref)) < 1e-13 * max(1.0, abs(float(ref)))


def test_closed_forms():
    assert abs(deriv_sin_closed(1, 1, 0, 0.7) - math.cos(0.7)) < 1e-15
    assert abs(deriv_sin_closed(0, 2, 0.3, 0.7) - math.sin(1.4 - 0.3)) < 1e-15
    assert abs(deriv_cos_closed(2, 3, 0, 0.4) + 9 * math.cos(1.2)) < 1e-13
    z = deriv_sin_closed(0.5j, 1, 0, 1)
    assert isinstance(z, complex)
    # large argument: closed form vs series within 0.01
    closed = deriv_sin_closed(0.5, 1, 0, 20)
    series = eval_series(deriv_sin_series(0.5, 60), 20.0, max_cancellation=1e16).value
    assert abs(closed - math.sin(20 + math.pi / 4)) < 1e-15
    assert abs(series - closed) < 0.01


def test_gauge_basis():
    assert gauge_basis(-0.5).exponents == ()
    assert gauge_basis(0.3).exponents == ()
    assert gauge_basis(-2).exponents == (1, 0)
    b = gauge_basis(-3.4 + 1j)
    assert len(b.exponents) == 3
    assert isinstance(b, GaugeBasis)
    # D^{-p} annihilates every gauge function
    for p in (-2.3, -3.4 + 1j, -1.0):
        for e in gauge_basis(p).exponents:
            assert power_rule(-p, e, 0, 1.7) == 0


def test_series_immutable():
    s = exp_series(5)
    with pytest.raises(AttributeError):
        s.offset = 1
    with pytest.raises(ValueError):
        s.coeffs[0] = 2
    with pytest.raises(ValueError):
        GenPowerSeries(0, [])
    with pytest.raises(ValueError):
        GenPowerSeries(0, [np.inf])


def test_series_algebra():
    a = GenPowerSeries(0.5, [1, 2])
    b = GenPowerSeries(1.5, [3])
    c = a + b
    assert c.offset == 0.5 and list(c.values()) == [1, 5]
    assert list((a - a).values()) == [0, 0]
    with pytest.raises(ValueError):
        a + GenPowerSeries(0.7, [1])
    assert GenPowerSeries(0, [0, 0, 2]).normalized().offset == 2
    sc = exp_series(40).compose_scale(2.0)
    assert abs(eval_series(sc, 0.5).value - math.e) < 1e-14


@given(seeds)
def test_scaling_property(seed):
    assert _axioms.scaling_case(np.random.default_rng(seed)) <= 1e-10


@given(seeds)
def test_linearity_property(seed):
    assert _axioms.linearity_case(np.random.default_rng(seed)) <= 1e-12


@given(seeds)
def test_correspondence_property(seed):
    assert _axioms.correspondence_case(np.random.default_rng(seed)) <= 1e-13


@given(seeds)
def test_inverse_property(seed):
    assert _axioms.inverse_case(np.random.default_rng(seed)) <= 1e-10


@given(seeds)
def test_semigroup_property(seed):
    assert _axioms.semigroup_case(np.random.default_rng(seed)) <= 1e-10
