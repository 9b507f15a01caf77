"""Closed-form solutions of three ODE families and the inverse process that
generates ODEs from a chosen solution.

Every family maps real ``t > 0`` to a transformed variable ``w = scale *
t**power`` and writes the solution as a generalized power series in ``w``
(plus ``F0 exp(-w)`` for the Abel family). All constructed objects are
immutable.
"""
import math
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from ._dd import DDC
from .errors import DomainError, PoleError, SpecError
from .fracop import (
    GenPowerSeries,
    cos_deriv_continued,
    cos_series,
    deriv_series,
    eval_series,
    exp_series,
    principal_power,
    sin_series,
)
from .specfun import cpow, gamma, recip_gamma

__all__ = [
    "SOLUTION_MAX_CANCELLATION",
    "AbelSpec",
    "BesselSpec",
    "OscillatorSpec",
    "PowerMap",
    "PowerTerm",
    "OdeSpec",
    "SolutionEvaluator",
    "TransformedFamily",
    "solve_abel",
    "solve_bessel",
    "solve_oscillator",
    "abel_ode",
    "bessel_ode",
    "gen_oscillator_ode",
    "transform_ode",
    "eval_ode_residual",
]

# Coefficients and sums are double-double, so a far larger term/sum ratio
# than plain doubles tolerate still leaves full double accuracy.
SOLUTION_MAX_CANCELLATION = 1e15
SERIES_TERMS = 200
# Beyond this |n w| the oscillator uses the branch-cut continuation.
OSCILLATOR_SWITCH = 12.0


def _positive_integer(z):
    z = complex(z)
    return z.imag == 0.0 and z.real >= 1 and abs(z.real - round(z.real)) < 1e-9


def _c(z):
    return complex(z)


@dataclass(frozen=True)
class AbelSpec:
    """``F' + c t**a F = t**b`` with ``F(0) = F0``."""

    a: complex
    b: complex
    c: complex
    F0: complex = 0j

    def __post_init__(self):
        for name in ("a", "b", "c", "F0"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.a == -1:
            raise SpecError("a must differ from -1")
        if self.c == 0:
            raise SpecError("c must be nonzero")

    @property
    def p(self):
        return (self.a - self.b) / (self.a + 1)


@dataclass(frozen=True)
class BesselSpec:
    """``F'' + (a/t) F' + b**2 t**(2c-2) F = 0`` with ``F(0) = F0``."""

    a: complex
    b: complex
    c: complex
    F0: complex = 1 + 0j

    def __post_init__(self):
        for name in ("a", "b", "c", "F0"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.c == 0:
            raise SpecError("c must be nonzero")
        if self.b == 0:
            raise SpecError("b must be nonzero")

    @property
    def p(self):
        return (1 - self.a) / (2 * self.c)


@dataclass(frozen=True)
class OscillatorSpec:
    """Solution ``D^p [a_n cos(n w) + b_n sin(n w)]``."""

    p: complex
    n: complex
    a_n: complex
    b_n: complex

    def __post_init__(self):
        for name in ("p", "n", "a_n", "b_n"):
            object.__setattr__(self, name, _c(getattr(self, name)))
        if self.n == 0:
            raise SpecError("n must be nonzero")


@dataclass(frozen=True)
class PowerMap:
    """Change of variable ``w = scale * t**power`` for real ``t >= 0``."""

    scale: complex
    power: complex

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * _real_power(t, self.power)

    def derivative(self, t):
        t = np.asarray(t, dtype=float)
        return self.scale * self.power * _real_power(t, self.power - 1)


def _real_power(t, e):
    # t**e for real t >= 0 (vectorized), principal branch.
    t = np.asarray(t, dtype=float)
    if np.any(t < 0):
        raise DomainError("the independent variable must be nonnegative")
    e = complex(e)
    out = np.zeros(t.shape, dtype=np.complex128)
    pos = t > 0
    if np.any(pos):
        out[pos] = principal_power(t[pos].astype(np.complex128), e)
    if np.any(~pos):
        if e == 0:
            out[~pos] = 1.0
        elif e.real <= 0:
            raise DomainError("coefficient t**e is singular at t = 0")
    return out


@dataclass(frozen=True)
class PowerTerm:
    coef: complex
    exponent: complex

    def __post_init__(self):
        object.__setattr__(self, "coef", _c(self.coef))
        object.__setattr__(self, "exponent", _c(self.exponent))

    @property
    def singular_at_zero(self):
        e = self.exponent
        return self.coef != 0 and (e.real < 0 or (e.real == 0 and e != 0))


def _terms(items):
    return tuple(t for t in (PowerTerm(*x) if not isinstance(x, PowerTerm) else x for x in items)
                 if t.coef != 0)


def _eval_terms(terms, t):
    t = np.asarray(t, dtype=float)
    out = np.zeros(t.shape, dtype=np.complex128)
    for term in terms:
        out = out + term.coef * _real_power(t, term.exponent)
    return out


@dataclass(frozen=True)
class OdeSpec:
    """Linear ODE with power-law coefficients on ``t >= 0``.

    order 1:  F'  + stiffness(t) F = forcing(t)
    order 2:  F'' + damping(t) F' + stiffness(t) F = forcing(t)

    Each coefficient is a sum of :class:`PowerTerm`; zero terms are dropped.
    """

    order: int
    damping: tuple = ()
    stiffness: tuple = ()
    forcing: tuple = ()
    label: str = ""

    def __post_init__(self):
        if self.order not in (1, 2):
            raise ValueError("order must be 1 or 2")
        for name in ("damping", "stiffness", "forcing"):
            object.__setattr__(self, name, _terms(getattr(self, name)))
        if self.order == 1 and self.damping:
            raise ValueError("a first-order ODE has no damping coefficient")

    @property
    def singular_points(self):
        terms = self.damping + self.stiffness + self.forcing
        return frozenset({0.0}) if any(t.singular_at_zero for t in terms) else frozenset()

    def damping_at(self, t):
        return _eval_terms(self.damping, t)

    def stiffness_at(self, t):
        return _eval_terms(self.stiffness, t)

    def forcing_at(self, t):
        return _eval_terms(self.forcing, t)

    def kernel_args(self):
        def pack(terms):
            return (np.array([x.coef for x in terms], dtype=np.complex128),
                    np.array([x.exponent for x in terms], dtype=np.complex128))
        return pack(self.damping), pack(self.stiffness), pack(self.forcing)


class _OscillatorContinuation:
    # n**p [a_n S(u; p) + b_n S(u; p-1)] for real u, S the cosine derivative.

    def __init__(self, p, n, a_n, b_n):
        self.p = p
        self.scale = n ** p
        self.a_n = a_n
        self.b_n = b_n

    def value(self, u):
        return self.scale * (self.a_n * cos_deriv_continued(u, self.p)
                             + self.b_n * cos_deriv_continued(u, self.p - 1))

    def derivative(self, u):
        return self.scale * (self.a_n * cos_deriv_continued(u, self.p + 1)
                             + self.b_n * cos_deriv_continued(u, self.p))


@dataclass(frozen=True)
class SolutionEvaluator:
    """Closed-form ``F(t) = exp_coeff exp(-w) + S(series_scale w)``, ``w = var_map(t)``.

    ``S`` is ``series`` except where ``continuation`` takes over for real
    arguments at or above ``switch``.
    """

    var_map: PowerMap
    series: GenPowerSeries
    series_scale: complex = 1 + 0j
    exp_coeff: complex = 0j
    continuation: object = None
    switch: float = math.inf
    meta: dict = field(default_factory=dict, compare=False)
    max_cancellation: float = SOLUTION_MAX_CANCELLATION

    def __post_init__(self):
        object.__setattr__(self, "_dseries", deriv_series(self.series, 1).normalized())

    def _split(self, u):
        if self.continuation is None:
            return np.zeros(u.shape, dtype=bool)
        return (u.imag == 0) & (u.real >= self.switch)

    def _series_part(self, u, deriv):
        out = np.zeros(u.shape, dtype=np.complex128)
        far = self._split(u)
        near = ~far
        if np.any(near):
            s = self._dseries if deriv else self.series
            out[near] = eval_series(s, u[near], self.max_cancellation).value
        if np.any(far):
            cont = self.continuation.derivative if deriv else self.continuation.value
            out[far] = cont(u[far].real)
        return out

    def at_w(self, w):
        """Solution value as a function of the transformed variable."""
        scalar = np.ndim(w) == 0
        w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        out = self._series_part(self.series_scale * w, False)
        if self.exp_coeff != 0:
            out = out + self.exp_coeff * np.exp(-w)
        return complex(out[0]) if scalar else out

    def dw(self, w):
        """dF/dw."""
        scalar = np.ndim(w) == 0
        w = np.atleast_1d(np.asarray(w, dtype=np.complex128))
        out = self.series_scale * self._series_part(self.series_scale * w, True)
        if self.exp_coeff != 0:
            out = out - self.exp_coeff * np.exp(-w)
        return complex(out[0]) if scalar else out

    def __call__(self, t):
        scalar = np.ndim(t) == 0
        out = self.at_w(np.atleast_1d(self.var_map(t)))
        return complex(out[0]) if scalar else out

    value = __call__

    def derivative(self, t):
        """dF/dt for real ``t > 0``."""
        scalar = np.ndim(t) == 0
        t = np.atleast_1d(np.asarray(t, dtype=float))
        out = self.dw(self.var_map(t)) * self.var_map.derivative(t)
        return complex(out[0]) if scalar else out

    def __repr__(self):
        return f"SolutionEvaluator({self.meta.get('family', '?')}, var_map={self.var_map})"


# solutions -----------------------------------------------------------------

def solve_abel(spec):
    """Exact solution of ``F' + c t**a F = t**b``.

    With ``w = c t**(a+1)/(a+1)`` and ``p = (a-b)/(a+1)``:
    ``F = F0 exp(-w) + K D^p[1 - exp(-w)]`` where
    ``K = c**(p-1) (a+1)**(-p) Gamma(1-p)``.
    """
    p = spec.p
    if _positive_integer(p):
        raise PoleError(f"Gamma(1-p) is infinite for p = {p!r}")
    if p.real >= 1:
        raise SpecError(f"Re(p) must be below 1, got p = {p!r}")
    a1 = spec.a + 1
    K = cpow(spec.c, p - 1) * cpow(a1, -p) * gamma(1 - p)
    one_minus_exp = GenPowerSeries.from_recurrence(
        0, 1, lambda m: DDC.of(-1) / (m + 1), SERIES_TERMS, start=1)
    series = deriv_series(one_minus_exp, p).scaled(K).normalized()
    return SolutionEvaluator(
        var_map=PowerMap(spec.c / a1, a1),
        series=series,
        exp_coeff=spec.F0,
        meta={"family": "abel", "p": p, "K": K, "spec": spec},
    )


def solve_bessel(spec):
    """Exact solution of the generalized Bessel equation regular at t = 0.

    With ``w = (b t**c / 2c)**2`` and ``p = (1-a)/2c``:
    ``F = F0 Gamma(1-p) sum_m (-1)^m w^m / (m! Gamma(m+1-p))``.
    """
    p = spec.p
    if _positive_integer(p):
        raise PoleError(f"Gamma(1-p) is infinite for p = {p!r}")
    j0 = GenPowerSeries.from_recurrence(
        0, 1, lambda m: DDC.of(-1) / ((m + 1) * (m + 1)), SERIES_TERMS)
    d = deriv_series(j0, p).shift_offset(p)
    # Gamma(1-p) times the leading coefficient 1/Gamma(1-p) is exactly one.
    lead = d.dd(0)
    terms = [DDC.of(1)] + [t / lead for t in d.dd_terms()[1:]]
    series = GenPowerSeries.from_dd(0, terms).scaled(spec.F0)
    b2c = spec.b / (2 * spec.c)
    return SolutionEvaluator(
        var_map=PowerMap(b2c * b2c, 2 * spec.c),
        series=series,
        meta={"family": "bessel", "p": p, "spec": spec},
    )


def _oscillator_series(spec):
    p, n = spec.p, spec.n
    cos_p = deriv_series(cos_series(SERIES_TERMS // 2), p)
    sin_p = deriv_series(sin_series(SERIES_TERMS // 2), p)
    combo = cos_p.scaled(spec.a_n) + sin_p.scaled(spec.b_n)
    return combo.scaled(cpow(n, p) if p != 0 else 1).normalized()


def solve_oscillator(spec, var_map=None):
    """``F(w) = D^p [a_n cos(n w) + b_n sin(n w)]`` as a function of ``t``.

    Uses the scaling property: ``F(w) = n**p (D^p[a_n cos + b_n sin])(n w)``.
    For real ``p`` and ``n`` the series is replaced by the branch-cut
    continuation at ``|n w| >= 12``; otherwise the series alone is used and
    may raise :class:`PrecisionError` for large arguments. Near ``w = 0``
    with ``Re(p) > 0`` the value diverges like ``w**(-p)``.
    """
    var_map = var_map or PowerMap(1, 1)
    cont = None
    if spec.p.imag == 0 and spec.n.imag == 0 and spec.n.real > 0:
        cont = _OscillatorContinuation(spec.p.real, spec.n.real, spec.a_n, spec.b_n)
    return SolutionEvaluator(
        var_map=var_map,
        series=_oscillator_series(spec),
        series_scale=spec.n,
        continuation=cont,
        switch=OSCILLATOR_SWITCH,
        meta={"family": "oscillator", "p": spec.p, "spec": spec},
    )


# ODE generation ------------------------------------------------------------

def abel_ode(spec):
    return OdeSpec(1, stiffness=[(spec.c, spec.a)], forcing=[(1, spec.b)], label="abel")


def bessel_ode(spec):
    return OdeSpec(2, damping=[(spec.a, -1)], stiffness=[(spec.b * spec.b, 2 * spec.c - 2)],
                   label="bessel")


def gen_oscillator_ode(spec):
    """Forced oscillator ``F'' + n**2 F = [-a_n(1+p) + b_n n w] / (Gamma(-p) w**(2+p))``.

    For nonnegative integer ``p`` the reciprocal gamma vanishes and the
    equation is homogeneous.
    """
    p, n = spec.p, spec.n
    rg = recip_gamma(-p)
    return OdeSpec(
        2,
        stiffness=[(n * n, 0)],
        forcing=[(-spec.a_n * (1 + p) * rg, -(2 + p)), (spec.b_n * n * rg, -(1 + p))],
        label="oscillator",
    )


class TransformedFamily(NamedTuple):
    ode: OdeSpec
    solution: SolutionEvaluator


def transform_ode(spec, v, c):
    """Substitute ``w = v t**c`` into the generated oscillator equation.

    Returns the transformed ODE together with the transformed exact solution.
    """
    v, c = complex(v), complex(c)
    if v == 0:
        raise SpecError("v must be nonzero")
    if c == 0:
        raise SpecError("c must be nonzero")
    p, n = spec.p, spec.n
    pre = c * c * recip_gamma(-p) * cpow(v, -p)
    ode = OdeSpec(
        2,
        damping=[(1 - c, -1)],
        stiffness=[((n * c * v) ** 2, 2 * c - 2)],
        forcing=[(pre * (-spec.a_n * (1 + p)), -(2 + c * p)),
                 (pre * spec.b_n * n * v, c - 2 - c * p)],
        label="oscillator-transformed",
    )
    return TransformedFamily(ode, solve_oscillator(spec, PowerMap(v, c)))


# residual ------------------------------------------------------------------

def _fd_step(t):
    return min(1e-3, t / 20.0)


def eval_ode_residual(ode, sol, t, h=None):
    """Relative residual of ``sol`` in ``ode`` at ``t``.

    Derivatives come from 5-point central differences of the evaluator; the
    residual is normalized by the largest of the individual terms.
    """
    t = float(t)
    h = _fd_step(t) if h is None else float(h)
    if t - 2 * h < 0 or (ode.singular_points and t - 2 * h <= 0):
        raise DomainError(f"stencil around t = {t} reaches the singular point")
    ts = t + h * np.arange(-2, 3)
    F = sol(ts)
    d1 = (F[0] - 8 * F[1] + 8 * F[3] - F[4]) / (12 * h)
    parts = [ode.stiffness_at(t) * F[2], -ode.forcing_at(t)]
    if ode.order == 1:
        parts.insert(0, d1)
    else:
        d2 = (-F[0] + 16 * F[1] - 30 * F[2] + 16 * F[3] - F[4]) / (12 * h * h)
        parts[:0] = [d2, ode.damping_at(t) * d1]
    parts = [complex(np.asarray(x).ravel()[0]) for x in parts]
    scale = max(abs(x) for x in parts)
    if scale == 0:
        return 0.0
    return abs(sum(parts)) / scale
