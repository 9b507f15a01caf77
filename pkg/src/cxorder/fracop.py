"""The complex-order derivative operator on power terms and generalized
power series.

A generalized power series is ``w**q * sum_m c[m] w**m`` with a complex
offset exponent ``q``. Coefficients are stored as double-double pairs
(``coeffs`` + ``coeffs_lo``) so that alternating series with large
intermediate terms keep their digits; building them through ``DDC``
recurrences keeps term-to-term rounding far below double precision.
"""
import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.special import roots_genlaguerre

from . import kernels
from ._dd import DDC
from .errors import DomainError, PoleError, PrecisionError
from .specfun import cpow, gamma, is_pole, recip_gamma

__all__ = [
    "M_MAX",
    "MAX_CANCELLATION",
    "GenPowerSeries",
    "SeriesEval",
    "GaugeBasis",
    "power_rule",
    "deriv_constant",
    "deriv_series",
    "eval_series",
    "deriv_sin_closed",
    "deriv_cos_closed",
    "gauge_basis",
    "exp_series",
    "sin_series",
    "cos_series",
    "deriv_cos_series",
    "deriv_sin_series",
    "cos_deriv_continued",
    "principal_power",
]

M_MAX = 200
MAX_CANCELLATION = 1e12
TRUNCATION_REL = 1e-16
TRUNCATION_PATIENCE = 3


def _is_integer(z, tol=0.0):
    z = complex(z)
    return z.imag == 0.0 and abs(z.real - round(z.real)) <= tol


class GenPowerSeries:
    """``f(w) = sum_m coeffs[m] * w**(offset + m)``, immutable."""

    __slots__ = ("offset", "coeffs", "coeffs_lo")

    def __init__(self, offset, coeffs, coeffs_lo=None):
        hi = np.array(coeffs, dtype=np.complex128).ravel()
        if hi.size == 0:
            raise ValueError("a series needs at least one coefficient")
        lo = np.zeros_like(hi) if coeffs_lo is None else np.array(coeffs_lo, dtype=np.complex128).ravel()
        if lo.shape != hi.shape:
            raise ValueError("coeffs and coeffs_lo must have the same length")
        if not (np.all(np.isfinite(hi)) and np.all(np.isfinite(lo))):
            raise ValueError("series coefficients must be finite")
        offset = complex(offset)
        if not (math.isfinite(offset.real) and math.isfinite(offset.imag)):
            raise ValueError("series offset must be finite")
        hi.flags.writeable = False
        lo.flags.writeable = False
        object.__setattr__(self, "offset", offset)
        object.__setattr__(self, "coeffs", hi)
        object.__setattr__(self, "coeffs_lo", lo)

    def __setattr__(self, name, value):
        raise AttributeError("GenPowerSeries is immutable")

    @classmethod
    def from_dd(cls, offset, terms):
        terms = [DDC.of(t) for t in terms]
        return cls(offset, [t.hi() for t in terms], [t.lo() for t in terms])

    @classmethod
    def from_recurrence(cls, offset, first, ratio, n_terms, start=0):
        """Coefficients ``c[start] = first`` and ``c[m+1] = c[m] * ratio(m)``.

        ``ratio`` should return a ``DDC`` built from exact inputs so that
        each step rounds at double-double level.
        """
        terms = [DDC()] * start
        c = DDC.of(first)
        terms.append(c)
        for m in range(start, n_terms - 1):
            c = c * ratio(m)
            terms.append(c)
        return cls.from_dd(offset, terms)

    def __len__(self):
        return self.coeffs.size

    @property
    def terms(self):
        return self.coeffs.size

    def dd(self, m):
        return DDC.from_parts(complex(self.coeffs[m]), complex(self.coeffs_lo[m]))

    def dd_terms(self):
        return [self.dd(m) for m in range(len(self))]

    def values(self):
        """Coefficients rounded to plain complex doubles."""
        return self.coeffs + self.coeffs_lo

    def __repr__(self):
        return f"GenPowerSeries(offset={self.offset!r}, terms={len(self)})"

    def scaled(self, a):
        if isinstance(a, DDC):
            return GenPowerSeries.from_dd(self.offset, [t * a for t in self.dd_terms()])
        a = complex(a)
        return GenPowerSeries.from_dd(self.offset, [t * a for t in self.dd_terms()])

    def __mul__(self, a):
        return self.scaled(a)

    __rmul__ = __mul__

    def __neg__(self):
        return GenPowerSeries(self.offset, -self.coeffs, -self.coeffs_lo)

    def __add__(self, other):
        if not isinstance(other, GenPowerSeries):
            return NotImplemented
        d = other.offset - self.offset
        if not _is_integer(d, 1e-12):
            raise ValueError("offsets must differ by an integer to add series")
        shift = int(round(d.real))
        if shift < 0:
            return other + self
        a = self.dd_terms()
        b = [DDC()] * shift + other.dd_terms()
        n = max(len(a), len(b))
        a += [DDC()] * (n - len(a))
        b += [DDC()] * (n - len(b))
        return GenPowerSeries.from_dd(self.offset, [x + y for x, y in zip(a, b)])

    def __sub__(self, other):
        return self + (-other)

    def shift_offset(self, d):
        """Multiply by ``w**d``."""
        return GenPowerSeries(self.offset + complex(d), self.coeffs, self.coeffs_lo)

    def compose_scale(self, c):
        """Series of ``f(c w)``; principal branch for ``c**(offset + m)``."""
        c = complex(c)
        head = cpow(c, self.offset) if self.offset != 0 else 1 + 0j
        out = []
        pw = DDC.of(head)
        for t in self.dd_terms():
            out.append(t * pw)
            pw = pw * c
        return GenPowerSeries.from_dd(self.offset, out)

    def normalized(self):
        """Drop leading zero coefficients, raising the offset to match."""
        nz = np.flatnonzero((self.coeffs != 0) | (self.coeffs_lo != 0))
        if nz.size == 0 or nz[0] == 0:
            return self
        k = int(nz[0])
        return GenPowerSeries(self.offset + k, self.coeffs[k:], self.coeffs_lo[k:])

    def truncated(self, n):
        return GenPowerSeries(self.offset, self.coeffs[:n], self.coeffs_lo[:n])

    def __call__(self, w):
        return eval_series(self, w).value


class SeriesEval(NamedTuple):
    value: object
    error_bound: object
    cancellation: object
    terms: object
    converged: object


def principal_power(w, q):
    """Vectorized principal-branch ``w**q``; ``w`` must be nonzero."""
    w = np.asarray(w, dtype=np.complex128)
    q = complex(q)
    if q == 0:
        return np.ones_like(w)
    if q.imag == 0.0 and np.all((w.imag == 0.0) & (w.real > 0.0)):
        return np.power(w.real, q.real).astype(np.complex128)
    lw = np.log(w)
    neg = (w.imag == 0.0) & (w.real < 0.0)
    if np.any(neg):
        lw = np.where(neg, lw.real + 1j * math.pi, lw)
    return np.exp(q * lw)


def _value_at_zero(s):
    nz = np.flatnonzero((s.coeffs != 0) | (s.coeffs_lo != 0))
    if nz.size == 0:
        return 0j
    j = int(nz[0])
    e = s.offset + j
    if e == 0:
        return complex(s.coeffs[j] + s.coeffs_lo[j])
    if e.real > 0:
        return 0j
    raise DomainError("series with nonpositive leading exponent evaluated at w = 0")


def eval_series(s, w, max_cancellation=MAX_CANCELLATION):
    """Evaluate a series at ``w`` (scalar or array).

    Sums in double-double with the adaptive truncation rule: stop after three
    consecutive terms below 1e-16 of the running sum, using at most ``M_MAX``
    coefficients. ``error_bound`` estimates the truncation error from the
    trailing terms (scaled by the offset power); ``cancellation`` is the
    largest term over the magnitude of the sum.

    Raises :class:`PrecisionError` when the cancellation exceeds
    ``max_cancellation`` and :class:`DomainError` at ``w = 0`` when the
    leading exponent has nonpositive real part.
    """
    scalar = np.ndim(w) == 0
    wa = np.atleast_1d(np.asarray(w, dtype=np.complex128))
    n = wa.size
    value = np.zeros(n, dtype=np.complex128)
    bound = np.zeros(n)
    canc = np.zeros(n)
    used = np.zeros(n, dtype=np.int64)
    conv = np.ones(n, dtype=bool)

    zero = wa == 0
    if np.any(zero):
        value[zero] = _value_at_zero(s)
    nz = ~zero
    if np.any(nz):
        wn = wa[nz]
        M = min(len(s), M_MAX)
        hi, lo, max_term, u, last, cv = kernels.series_sum(
            s.coeffs[:M], s.coeffs_lo[:M], wn, TRUNCATION_REL, TRUNCATION_PATIENCE)
        total = hi + lo
        mag = np.abs(total)
        with np.errstate(divide="ignore", invalid="ignore"):
            ratio = np.where(max_term == 0.0, 0.0, max_term / mag)
        bad = ratio > max_cancellation
        if np.any(bad):
            k = int(np.flatnonzero(bad)[0])
            raise PrecisionError(
                f"cancellation {ratio[k]:.3g} exceeds {max_cancellation:.3g} at w = {wn[k]!r}")
        pref = principal_power(wn, s.offset)
        value[nz] = pref * total
        tail = np.where(cv, np.maximum(last, TRUNCATION_REL * mag), last)
        bound[nz] = np.abs(pref) * tail
        canc[nz] = ratio
        used[nz] = u
        conv[nz] = cv
    if scalar:
        return SeriesEval(complex(value[0]), float(bound[0]), float(canc[0]), int(used[0]),
                          bool(conv[0]))
    return SeriesEval(value, bound, canc, used, conv)


# operator ------------------------------------------------------------------

def power_rule(p, q, c_shift, z):
    """Order-``p`` derivative of ``(z + c)**q`` evaluated at ``z``."""
    p, q, c_shift, z = complex(p), complex(q), complex(c_shift), complex(z)
    if is_pole(1 + q):
        raise PoleError(f"Gamma(1+q) is infinite for q = {q!r}")
    rg = recip_gamma(1 + q - p)
    if rg == 0:
        return 0j
    return gamma(1 + q) * rg * cpow(z + c_shift, q - p)


def deriv_constant(p, const_c, z):
    """Order-``p`` derivative of the constant ``const_c``."""
    p = complex(p)
    if _is_integer(p) and p.real >= 1:
        return 0j
    if p == 0:
        return complex(const_c)
    return complex(const_c) * cpow(z, -p) * recip_gamma(1 - p)


def deriv_series(s, p):
    """Apply the order-``p`` operator termwise.

    The result has offset ``offset - p`` and coefficients
    ``c[m] * Gamma(1+q+m) / Gamma(1+q+m-p)``. Consecutive gamma ratios are
    generated by a double-double recurrence, so only the first ratio carries
    a double-precision rounding error and that error is common to all terms.
    """
    p = complex(p)
    if p == 0:
        return s
    q = s.offset
    qd = DDC.of(q)
    pd = DDC.of(p)
    out = []
    fac = None
    for m in range(len(s)):
        c = s.dd(m)
        k = 1 + q + m
        if is_pole(k):
            if not c.is_zero():
                raise PoleError(f"Gamma(1+q+m) is infinite for term m = {m}", index=m)
            out.append(DDC())
            fac = None
            continue
        if is_pole(k - p):
            out.append(DDC())
            fac = None
            continue
        if fac is None:
            fac = DDC.of(gamma(k) * recip_gamma(k - p))
        else:
            base = qd + m
            fac = fac * base / (base - pd)
        out.append(c * fac)
    return GenPowerSeries.from_dd(q - p, out)


def deriv_sin_closed(p, omega, phase, t):
    """``omega**p * sin(omega t - phase + p pi/2)``; complex when ``p`` is."""
    p = complex(p)
    if p.imag == 0.0:
        pr = p.real
        return omega ** pr * math.sin(omega * t - phase + pr * math.pi / 2)
    return cpow(omega, p) * _csin(omega * t - phase + p * math.pi / 2)


def deriv_cos_closed(p, omega, phase, t):
    """``omega**p * cos(omega t - phase + p pi/2)``; complex when ``p`` is."""
    p = complex(p)
    if p.imag == 0.0:
        pr = p.real
        return omega ** pr * math.cos(omega * t - phase + pr * math.pi / 2)
    return cpow(omega, p) * _ccos(omega * t - phase + p * math.pi / 2)


def _csin(z):
    import cmath
    return cmath.sin(z)


def _ccos(z):
    import cmath
    return cmath.cos(z)


@dataclass(frozen=True)
class GaugeBasis:
    """Powers ``z**e`` annihilated by the inverse of an antiderivative."""

    exponents: tuple

    def __len__(self):
        return len(self.exponents)

    def evaluate(self, coefficients, z):
        if len(coefficients) != len(self.exponents):
            raise ValueError("one coefficient per basis exponent is required")
        return sum(complex(c) * cpow(z, e) for c, e in zip(coefficients, self.exponents))


def gauge_basis(p):
    """Basis exponents ``-p-1, ..., -p-k`` with ``k = floor(-Re p)``."""
    p = complex(p)
    if p.real > -1:
        return GaugeBasis(())
    k = math.floor(-p.real)
    return GaugeBasis(tuple(-p - j for j in range(1, k + 1)))


# Maclaurin series of elementary functions ----------------------------------

def exp_series(n_terms=M_MAX, sign=1):
    """Maclaurin series of ``exp(sign * w)``."""
    return GenPowerSeries.from_recurrence(0, 1, lambda m: DDC.of(sign) / (m + 1), n_terms)


def _alternating_factorial(n_terms, parity):
    # (-1)^k / (2k+parity)! at index 2k+parity, zeros in between
    terms = [DDC()] * (2 * n_terms - 1 + parity)
    c = DDC.of(1)
    for k in range(n_terms):
        idx = 2 * k + parity
        terms[idx] = c
        c = c / DDC.of(-(idx + 1) * (idx + 2))
    return terms


def sin_series(n_terms=M_MAX // 2):
    """Maclaurin series of sin with ``n_terms`` nonzero terms."""
    return GenPowerSeries.from_dd(0, _alternating_factorial(n_terms, 1))


def cos_series(n_terms=M_MAX // 2):
    """Maclaurin series of cos with ``n_terms`` nonzero terms."""
    return GenPowerSeries.from_dd(0, _alternating_factorial(n_terms, 0))


def deriv_cos_series(p, n_terms=M_MAX // 2):
    """Termwise order-``p`` derivative of the Maclaurin series of cos."""
    return deriv_series(cos_series(n_terms), p)


def deriv_sin_series(p, n_terms=M_MAX // 2):
    """Termwise order-``p`` derivative of the Maclaurin series of sin."""
    return deriv_series(sin_series(n_terms), p)


# large-argument continuation of the termwise cosine derivative ------------

_LAGUERRE_NODES = 64


def _laplace_tail(x, beta):
    # int_0^inf exp(-r x) r**beta / (1 + r**2) dr via generalized
    # Gauss-Laguerre after r = u/x; accurate for x >~ 5.
    u, wt = roots_genlaguerre(_LAGUERRE_NODES, beta)
    x = np.asarray(x, dtype=float)
    acc = (wt[None, :] / (1.0 + (u[None, :] / x[:, None]) ** 2)).sum(axis=1)
    return x ** (-beta - 1.0) * acc


def cos_deriv_continued(x, q):
    """Value of ``sum_m (-1)^m x**(2m-q) / Gamma(2m+1-q)`` for large real x.

    For ``-2 < q <= 0`` the series equals the phase-shifted cosine
    ``cos(x + q pi/2)`` plus the branch-cut contribution
    ``sin(pi q)/pi * int_0^inf exp(-r x) r**(q+1) / (1 + r**2) dr``.
    Other real orders are reduced into that strip with
    ``S(q) = x**(-q) / Gamma(1-q) - S(q-2)``. Needs real ``q`` and ``x > 0``;
    used where the alternating series loses too many digits.
    """
    q = float(q)
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any(x <= 0):
        raise DomainError("continuation needs positive real arguments")
    if q <= -2.0:
        return x ** (-q - 2.0) * recip_gamma(-1.0 - q).real - cos_deriv_continued(x, q + 2.0)
    if q > 0.0:
        return x ** (-q) * recip_gamma(1.0 - q).real - cos_deriv_continued(x, q - 2.0)
    out = np.cos(x + q * math.pi / 2)
    s = math.sin(math.pi * q)
    if s != 0.0 and not _is_integer(q):
        out = out + (s / math.pi) * _laplace_tail(x, q + 1.0)
    return out
