import numpy as np
import pytest

from cxorder import kernels
from cxorder.fracop import cos_series, exp_series
from cxorder.solvers import AbelSpec, OscillatorSpec, abel_ode, gen_oscillator_ode

both = pytest.mark.skipif(len(kernels.available_backends()) < 2,
                          reason="compiled kernels not built")


def test_backend_selection():
    assert kernels.BACKEND in kernels.available_backends()
    assert kernels.get_backend("python").__name__.endswith("_pykernels")
    with pytest.raises(ValueError):
        kernels.get_backend("fortran")


@pytest.mark.parametrize("n_points", [1, 5, 23, 24, 100])
def test_series_sum_exp(backend, n_points):
    s = exp_series(60)
    w = np.linspace(-3, 3, n_points) + 0.5j
    hi, lo, max_term, used, last, conv = kernels.series_sum(s.coeffs, s.coeffs_lo, w,
                                                            backend=backend)
    np.testing.assert_allclose(hi + lo, np.exp(w), rtol=1e-15)
    assert np.all(conv) and np.all(used <= 60)
    assert np.all(max_term >= np.abs(hi) * 0.999 / np.exp(2 * np.abs(w)))


@both
@pytest.mark.parametrize("n_points", [5, 100])
def test_series_backends_bitwise_equal(n_points):
    s = cos_series(60)
    w = np.linspace(0.1, 25, n_points).astype(complex)
    a = kernels.series_sum(s.coeffs, s.coeffs_lo, w, backend="python")
    b = kernels.series_sum(s.coeffs, s.coeffs_lo, w, backend="cython")
    for x, y in zip(a, b):
        np.testing.assert_array_equal(x, y)


def test_rk4_exponential_decay(backend):
    # F' = -F
    F, dF, status, done = kernels.rk4_power_law(
        1, ([], []), ([1.0], [0.0]), ([], []), 1.0, 0.0, 0.0, 1e-3, 1000, 1000, backend=backend)
    assert status == 0 and done == 1000
    assert abs(F[-1] - np.exp(-1)) < 1e-10


def test_rk4_harmonic(backend):
    n = 10000
    h = 2 * np.pi / n
    F, dF, status, _ = kernels.rk4_power_law(
        2, ([], []), ([1.0], [0.0]), ([], []), 1.0, 0.0, 0.0, h, n, n, backend=backend)
    assert status == 0
    assert abs(F[-1] - 1) < 1e-8 and abs(dF[-1]) < 1e-8


def test_rk4_reports_singular_start(backend):
    args = ([1.0], [-1.0])
    _, _, status, done = kernels.rk4_power_law(2, args, ([1.0], [0.0]), ([], []), 1, 0, 0.0,
                                               1e-3, 10, 1, backend=backend)
    assert status == 1 and done == 0


def test_rk4_reports_overflow(backend):
    # F' = 1e3 F blows up
    _, _, status, _ = kernels.rk4_power_law(1, ([], []), ([-1e3], [0.0]), ([], []), 1, 0, 0.0,
                                            0.01, 100000, 1000, backend=backend)
    assert status == 2


@both
def test_rk4_backends_agree():
    for ode, y0, dy0, t0 in ((abel_ode(AbelSpec(3.1, 0.8, 0.7, 0.5)), 0.5, 0, 0.0),
                             (gen_oscillator_ode(OscillatorSpec(-1.21, 7.1, -1.5, 3.5)),
                              0.1, 0.2, 0.05)):
        d, s, f = ode.kernel_args()
        a = kernels.rk4_power_law(ode.order, d, s, f, y0, dy0, t0, 1e-3, 2000, 100,
                                  backend="python")
        b = kernels.rk4_power_law(ode.order, d, s, f, y0, dy0, t0, 1e-3, 2000, 100,
                                  backend="cython")
        np.testing.assert_allclose(a[0], b[0], rtol=1e-12, atol=1e-14)
        assert a[2] == b[2] == 0
