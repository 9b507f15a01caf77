"""Complex special functions: gamma, reciprocal gamma, log-gamma, principal
powers and the Bessel function J0.

Everything here is a pure function of its arguments. Complex scalars are
plain Python ``complex`` values.
"""
import cmath
import math

from .errors import DomainError, PoleError

__all__ = [
    "POLE_TOL",
    "pole_index",
    "is_pole",
    "gamma",
    "recip_gamma",
    "lgamma",
    "cpow",
    "bessel_j0",
]

POLE_TOL = 1e-9

# Lanczos approximation, g = 7, n = 9.
_LANCZOS_G = 7.0
_LANCZOS = (
    0.99999999999980993,
    676.5203681218851,
    -1259.1392167224028,
    771.32342877765313,
    -176.61502916214059,
    12.507343278686905,
    -0.13857109526572012,
    9.9843695780195716e-6,
    1.5056327351493116e-7,
)
_LOG_SQRT_2PI = 0.5 * math.log(2.0 * math.pi)


def pole_index(z):
    """Return m if ``z`` lies within ``POLE_TOL`` of the pole -m, else None."""
    z = complex(z)
    n = round(z.real)
    if n > 0:
        return None
    if abs(z - n) < POLE_TOL:
        return -n
    return None


def is_pole(z):
    return pole_index(z) is not None


def _lanczos_log(z):
    # log Gamma(z) for Re(z) >= 0.5; branch follows the principal logs used.
    z = z - 1.0
    acc = _LANCZOS[0]
    for i in range(1, len(_LANCZOS)):
        acc += _LANCZOS[i] / (z + i)
    t = z + _LANCZOS_G + 0.5
    return _LOG_SQRT_2PI + (z + 0.5) * cmath.log(t) - t + cmath.log(acc)


def _sinpi(z):
    # sin(pi z) with exact reduction of the real part.
    n = round(z.real)
    f = complex(z.real - n, z.imag)
    s = cmath.sin(math.pi * f)
    return -s if n % 2 else s


def _as_result(w, z):
    return complex(w.real, 0.0) if z.imag == 0.0 else w


def gamma(z):
    """Gamma function of a complex argument.

    Uses the Lanczos approximation for ``Re(z) >= 0.5`` and the reflection
    formula below that. Raises :class:`PoleError` within ``POLE_TOL`` of a
    nonpositive integer.
    """
    z = complex(z)
    m = pole_index(z)
    if m is not None:
        raise PoleError(f"gamma has a pole at z = {-m}")
    if z.real < 0.5:
        return _as_result(math.pi / (_sinpi(z) * cmath.exp(_lanczos_log(1.0 - z))), z)
    return _as_result(cmath.exp(_lanczos_log(z)), z)


def recip_gamma(z):
    """1/Gamma(z); entire, and exactly zero at the poles of Gamma."""
    z = complex(z)
    if is_pole(z):
        return 0j
    if z.real < 0.5:
        return _as_result(_sinpi(z) * cmath.exp(_lanczos_log(1.0 - z)) / math.pi, z)
    return _as_result(cmath.exp(-_lanczos_log(z)), z)


def lgamma(z):
    """Logarithm of Gamma(z).

    The real part is log|Gamma(z)|. The imaginary part is some determination
    of arg Gamma(z) and is not continued across the negative real axis.
    """
    z = complex(z)
    m = pole_index(z)
    if m is not None:
        raise PoleError(f"gamma has a pole at z = {-m}")
    if z.real < 0.5:
        return math.log(math.pi) - cmath.log(_sinpi(z)) - _lanczos_log(1.0 - z)
    return _lanczos_log(z)


def _principal_log(w):
    lw = cmath.log(w)
    if w.imag == 0.0 and w.real < 0.0:
        # (-pi, pi]: a negative zero imaginary part must not select -pi.
        lw = complex(lw.real, math.pi)
    return lw


def cpow(w, q):
    """Principal-branch power ``w**q = exp(q Log w)``.

    ``Log`` has imaginary part in (-pi, pi]. ``cpow(0, q)`` is 0 when
    ``Re(q) > 0`` and a :class:`DomainError` otherwise.
    """
    w = complex(w)
    q = complex(q)
    if q == 0:
        return 1 + 0j
    if w == 0:
        if q.real > 0:
            return 0j
        raise DomainError("0 raised to a power with nonpositive real part")
    if w.imag == 0.0 and w.real > 0.0 and q.imag == 0.0:
        return complex(math.pow(w.real, q.real), 0.0)
    return cmath.exp(q * _principal_log(w))


# J0 -------------------------------------------------------------------------

_J0_SERIES_MAX = 6.0
_J0_ASYMPTOTIC_MIN = 25.0


def _j0_series(x):
    # Neumaier-compensated Maclaurin sum; terms stay below ~25 for |x| <= 6.
    y = -0.25 * x * x
    term = 1.0
    s = 1.0
    comp = 0.0
    k = 0
    while True:
        k += 1
        term *= y / (k * k)
        t = s + term
        if abs(s) >= abs(term):
            comp += (s - t) + term
        else:
            comp += (term - t) + s
        s = t
        if abs(term) < 1e-18 * abs(s) and k > 4:
            break
    return s + comp


def _j0_quadrature(x):
    # Trapezoid rule on J0(x) = (1/pi) int_0^pi cos(x sin t) dt; the
    # integrand is periodic and analytic, so the error decays like J_2N(x).
    n = int(x) + 40
    h = math.pi / n
    acc = 0.5 * (1.0 + math.cos(x * math.sin(math.pi)))
    for k in range(1, n):
        acc += math.cos(x * math.sin(k * h))
    return acc / n


def _j0_asymptotic(x):
    # Hankel expansion truncated at the smallest term.
    mu = 0.0
    p = 1.0
    q = 0.0
    term = 1.0
    k = 1
    z8 = 8.0 * x
    prev = math.inf
    while k < 60:
        term *= (mu - (2 * k - 1) ** 2) / (k * z8)
        if abs(term) > prev:
            break
        prev = abs(term)
        if k % 2:
            q += term if (k // 2) % 2 == 0 else -term
        else:
            p += -term if (k // 2) % 2 else term
        k += 1
    chi = x - 0.25 * math.pi
    return math.sqrt(2.0 / (math.pi * x)) * (p * math.cos(chi) - q * math.sin(chi))


def bessel_j0(x):
    """Bessel function of the first kind of order zero for real ``x``."""
    x = abs(float(x))
    if x <= _J0_SERIES_MAX:
        return _j0_series(x)
    if x < _J0_ASYMPTOTIC_MIN:
        return _j0_quadrature(x)
    return _j0_asymptotic(x)
