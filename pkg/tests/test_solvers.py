import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from cxorder.errors import DomainError, PoleError, SpecError
from cxorder.solvers import (
    AbelSpec,
    BesselSpec,
    OdeSpec,
    OscillatorSpec,
    PowerMap,
    abel_ode,
    bessel_ode,
    eval_ode_residual,
    gen_oscillator_ode,
    solve_abel,
    solve_bessel,
    solve_oscillator,
    transform_ode,
)
from cxorder.specfun import bessel_j0, gamma
from cxorder.validate import RkConfig, rk_integrate

FIG_OSC = OscillatorSpec(-1.21, 7.1, -1.5, 3.5)


def test_abel_constant_coefficients():
    sol = solve_abel(AbelSpec(0, 0, 1, 0))
    t = np.linspace(0, 5, 51)
    np.testing.assert_allclose(sol(t).real, 1 - np.exp(-t), atol=1e-14)


def test_abel_linear_forcing():
    sol = solve_abel(AbelSpec(0, 1, 1, 0))
    t = np.linspace(0, 5, 51)
    np.testing.assert_allclose(sol(t).real, t - 1 + np.exp(-t), atol=1e-13)


def test_abel_initial_value_and_p():
    spec = AbelSpec(3.1, 0.8, 0.7, 0.5)
    assert abs(spec.p - 2.3 / 4.1) < 1e-15
    sol = solve_abel(spec)
    assert sol(0.0) == 0.5
    assert abs(sol(1e-9) - 0.5) < 1e-6


def test_abel_errors():
    with pytest.raises(SpecError, match="a must differ from -1"):
        AbelSpec(-1, 0, 1)
    with pytest.raises(SpecError):
        AbelSpec(1, 0, 0)
    with pytest.raises(SpecError):
        solve_abel(AbelSpec(0, -1.5, 1))  # p = 1.5
    with pytest.raises(PoleError):
        solve_abel(AbelSpec(1, -1, 1))  # p = 1


def test_bessel_reduces_to_j0():
    sol = solve_bessel(BesselSpec(1, 1, 1, 1))
    t = np.linspace(0, 20, 2001)
    ref = np.array([bessel_j0(x) for x in t])
    assert np.max(np.abs(sol(t) - ref)) < 1e-10


def test_bessel_origin_and_errors():
    spec = BesselSpec(0.7, math.sqrt(6.3), 1.3, 1)
    assert abs(spec.p - 0.3 / 2.6) < 1e-15
    for f0 in (1, 2.5, 0.3 - 1j):
        assert solve_bessel(BesselSpec(0.7, 2, 1.3, f0))(0.0) == f0
    with pytest.raises(SpecError):
        BesselSpec(1, 0, 1)
    with pytest.raises(SpecError):
        BesselSpec(1, 1, 0)
    with pytest.raises(PoleError):
        solve_bessel(BesselSpec(-1, 1, 1))  # p = 1


def test_bessel_against_series_oracle():
    # F = F0 Gamma(1-p) sum (-1)^m w^m / (m! Gamma(m+1-p)), summed directly in mpmath
    import mpmath
    mpmath.mp.dps = 40
    spec = BesselSpec(0.7, math.sqrt(6.3), 1.3, 1)
    sol = solve_bessel(spec)
    p = spec.p.real
    for t in (0.5, 1.5, 3.0):
        w = (math.sqrt(6.3) * t ** 1.3 / 2.6) ** 2
        ref = mpmath.gamma(1 - p) * mpmath.nsum(
            lambda m: (-1) ** m * mpmath.power(w, m) / (mpmath.factorial(m) * mpmath.gamma(m + 1 - p)),
            [0, mpmath.inf])
        assert abs(sol(t) - float(ref)) < 1e-13


def test_oscillator_identity_and_correspondence():
    w = np.linspace(0.01, 20, 300)
    sol = solve_oscillator(OscillatorSpec(0, 2.0, 1.5, -0.5))
    np.testing.assert_allclose(sol(w).real, 1.5 * np.cos(2 * w) - 0.5 * np.sin(2 * w), atol=1e-12)
    sol = solve_oscillator(OscillatorSpec(1, 2, 1, 0))
    np.testing.assert_allclose(sol(w).real, -2 * np.sin(2 * w), atol=1e-12)


def test_oscillator_continuation_matches_series():
    sol = solve_oscillator(FIG_OSC)
    # just below and above the switch point in u = n w
    w = np.array([11.9, 11.99, 12.0, 12.1]) / 7.1
    u = 7.1 * w
    direct = solve_oscillator(FIG_OSC).at_w(w)
    from cxorder.fracop import eval_series
    ser = eval_series(sol.series, u, max_cancellation=1e16).value
    np.testing.assert_allclose(direct, ser, rtol=1e-12)


def test_oscillator_generated_forcing():
    ode = gen_oscillator_ode(FIG_OSC)
    (f1, f2) = ode.forcing
    assert abs(f1.coef - 1.5 * (1 - 1.21) / gamma(1.21)) < 1e-13
    assert abs(f1.coef + 0.344) < 5e-4 and abs(f2.coef - 27.14) < 5e-3
    assert abs(f1.exponent + 0.79) < 1e-14 and abs(f2.exponent - 0.21) < 1e-14
    assert ode.stiffness[0].coef == 7.1 ** 2
    assert ode.singular_points == {0.0}


def test_oscillator_integer_order_is_homogeneous():
    ode = gen_oscillator_ode(OscillatorSpec(0, 3, 1, 1))
    assert ode.forcing == () and ode.singular_points == frozenset()
    ode = gen_oscillator_ode(OscillatorSpec(2, 3, 1, 1))
    assert ode.forcing == ()


def test_oscillator_minus_two_constant_forcing():
    spec = OscillatorSpec(-2, 1, 1, 0)
    ode = gen_oscillator_ode(spec)
    assert len(ode.forcing) == 1
    assert abs(ode.forcing[0].coef - 1) < 1e-14 and ode.forcing[0].exponent == 0
    # RK oracle from w = 0: F(0) = F'(0) = 0
    traj = rk_integrate(ode, (0, 0), RkConfig(0, 6, h=1e-3, n_grid=61))
    sol = solve_oscillator(spec)
    np.testing.assert_allclose(traj.F, sol(traj.t), atol=1e-10)
    np.testing.assert_allclose(traj.F.real, 1 - np.cos(traj.t), atol=1e-10)


def test_transform_identity_matches_generator():
    fam = transform_ode(FIG_OSC, 1, 1)
    base = gen_oscillator_ode(FIG_OSC)
    t = np.linspace(0.1, 5, 50)
    for name in ("damping_at", "stiffness_at", "forcing_at"):
        a, b = getattr(fam.ode, name)(t), getattr(base, name)(t)
        assert np.max(np.abs(a - b)) <= 1e-13 * max(1, np.max(np.abs(b)))


def test_transform_quadratic_chirp():
    spec = OscillatorSpec(0, 1.5, 1, 0.5)
    fam = transform_ode(spec, 1, 2)
    t = np.linspace(0.0, 3, 31)
    np.testing.assert_allclose(fam.solution(t).real,
                               np.cos(1.5 * t ** 2) + 0.5 * np.sin(1.5 * t ** 2), atol=1e-12)
    d = fam.ode.damping[0]
    assert d.coef == -1 and d.exponent == -1
    assert abs(fam.ode.stiffness[0].coef - 4 * 1.5 ** 2) < 1e-14
    traj = rk_integrate(fam.ode, (fam.solution(0.2), fam.solution.derivative(0.2)),
                        RkConfig(0.2, 3, h=1e-4, n_grid=57))
    np.testing.assert_allclose(traj.F, fam.solution(traj.t), atol=1e-8)


def test_transform_errors():
    with pytest.raises(SpecError):
        transform_ode(FIG_OSC, 0, 1)
    with pytest.raises(SpecError):
        transform_ode(FIG_OSC, 1, 0)
    with pytest.raises(SpecError):
        OscillatorSpec(0.5, 0, 1, 1)


def test_residual_examples():
    assert eval_ode_residual(gen_oscillator_ode(FIG_OSC), solve_oscillator(FIG_OSC), 1.0) <= 1e-6
    p0 = OscillatorSpec(0, 2, 1, 1)
    assert eval_ode_residual(gen_oscillator_ode(p0), solve_oscillator(p0), 2.0) <= 1e-8
    other = OscillatorSpec(-0.7, 7.1, -1.5, 3.5)
    assert eval_ode_residual(gen_oscillator_ode(FIG_OSC), solve_oscillator(other), 1.0) > 1e-2
    with pytest.raises(DomainError):
        eval_ode_residual(gen_oscillator_ode(FIG_OSC), solve_oscillator(FIG_OSC), 0.0)


def test_derivative_consistent_with_finite_difference():
    cases = [
        (solve_abel(AbelSpec(3.1, 0.8, 0.7, 0.5)), (0.3, 1.0, 1.9)),
        (solve_bessel(BesselSpec(0.7, math.sqrt(6.3), 1.3, 1)), (0.05, 1.0, 2.9)),
        (solve_oscillator(FIG_OSC), (0.1, 1.0, 1.69, 9.0)),
        (transform_ode(FIG_OSC, 1.3, 0.8).solution, (0.2, 2.0)),
    ]
    h = 1e-5
    for sol, ts in cases:
        for t in ts:
            fd = (sol(t + h) - sol(t - h)) / (2 * h)
            d = sol.derivative(t)
            assert abs(d - fd) <= 1e-6 * max(abs(d), 1e-3)


def test_evaluator_is_deterministic_and_vectorized():
    sol = solve_oscillator(FIG_OSC)
    t = np.linspace(0.05, 10, 101)
    v = sol(t)
    np.testing.assert_array_equal(v, sol(t))
    assert sol(t[7]) == v[7]


def test_power_map():
    m = PowerMap(2.0, 1.5)
    assert abs(m(4.0) - 16) < 1e-13
    assert abs(m.derivative(4.0) - 6) < 1e-13
    with pytest.raises(DomainError):
        m(-1.0)


def test_ode_spec_validation():
    with pytest.raises(ValueError):
        OdeSpec(3)
    with pytest.raises(ValueError):
        OdeSpec(1, damping=[(1, 0)])
    ode = OdeSpec(2, damping=[(0, -1)], stiffness=[(1, 0)])
    assert ode.damping == () and ode.singular_points == frozenset()
    assert OdeSpec(1, stiffness=[(1, 0.5j)]).singular_points == {0.0}


initial = st.floats(0.1, 2) | st.floats(-2, -0.1)
abel_params = st.tuples(st.floats(0.01, 4), st.floats(0.01, 2), st.floats(0.2, 2), initial)
bessel_params = st.tuples(st.floats(0, 2), st.floats(0.5, 3), st.floats(0.5, 2), initial)


@settings(max_examples=25)
@given(abel_params)
def test_abel_residual(params):
    a, b, c, f0 = params
    spec = AbelSpec(a, b, c, f0)
    sol, ode = solve_abel(spec), abel_ode(spec)
    for t in np.linspace(0.2, 2, 10):
        assert eval_ode_residual(ode, sol, t) <= 1e-6


@settings(max_examples=25)
@given(bessel_params)
def test_bessel_residual(params):
    a, b, c, f0 = params
    spec = BesselSpec(a, b, c, f0)
    if abs(spec.p - round(spec.p.real)) < 1e-6 and spec.p.real >= 1:
        return
    sol, ode = solve_bessel(spec), bessel_ode(spec)
    for t in np.linspace(0.2, 2, 10):
        assert eval_ode_residual(ode, sol, t) <= 1e-6
