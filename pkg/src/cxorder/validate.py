"""Independent checks of the closed-form solutions.

Fixed-step RK4 integration of the generated ODEs with a half-step Richardson
error estimate, validation reports against the closed forms, the left-boundary
scan for the phase-shift approximation of differentiated sinusoids, and the
telescoping series identity for the constant 1.
"""
import math
import time
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from . import kernels
from .errors import DomainError, PoleError, SingularityError
from .fracop import deriv_cos_series, deriv_sin_series, eval_series
from .specfun import gamma, is_pole, recip_gamma

__all__ = [
    "RkConfig",
    "Trajectory",
    "ValidationReport",
    "BoundaryResult",
    "rk_integrate",
    "validate_solution",
    "phase_boundary",
    "boundary_scan",
    "series_identity_check",
]


@dataclass(frozen=True)
class RkConfig:
    """Fixed-step RK4 settings over ``[t_start, t_end]``.

    The step is shrunk slightly so that a whole number of steps lands on each
    of the ``n_grid`` output points.
    """

    t_start: float
    t_end: float
    h: float = 1e-4
    n_grid: int = 256

    def __post_init__(self):
        object.__setattr__(self, "t_start", float(self.t_start))
        object.__setattr__(self, "t_end", float(self.t_end))
        if not self.t_start < self.t_end:
            raise ValueError("t_start must be below t_end")
        if not self.h > 0:
            raise ValueError("h must be positive")
        if self.n_grid < 2:
            raise ValueError("n_grid must be at least 2")

    def layout(self, refine=1):
        span = self.t_end - self.t_start
        stride = max(1, math.ceil(span / self.h / (self.n_grid - 1))) * refine
        n_steps = stride * (self.n_grid - 1)
        return span / n_steps, n_steps, stride

    @property
    def grid(self):
        return np.linspace(self.t_start, self.t_end, self.n_grid)


@dataclass(frozen=True)
class Trajectory:
    t: np.ndarray
    F: np.ndarray
    dF: np.ndarray
    h: float
    n_steps: int
    # |F_h - F_{h/2}| * 16/15 at each grid point
    error_estimate: np.ndarray
    backend: str


def _check_window(ode, cfg):
    if cfg.t_start < 0:
        raise DomainError("integration window must lie in t >= 0")
    for s in ode.singular_points:
        if cfg.t_start <= s <= cfg.t_end:
            raise SingularityError(
                f"window [{cfg.t_start}, {cfg.t_end}] contains the singular point t = {s}")


def _run(ode, y0, dy0, cfg, refine, backend):
    h, n_steps, stride = cfg.layout(refine)
    damping, stiffness, forcing = ode.kernel_args()
    F, dF, status, done = kernels.rk4_power_law(
        ode.order, damping, stiffness, forcing, y0, dy0, cfg.t_start, h, n_steps, stride,
        backend=backend)
    if status == 1:
        raise SingularityError(f"coefficient singular at t = {cfg.t_start + done * h}")
    if status == 2:
        raise OverflowError(f"RK4 solution diverged near t = {cfg.t_start + done * h}")
    return F, dF, h, n_steps


def rk_integrate(ode, ic, cfg, backend=None):
    """Integrate ``ode`` from ``ic`` with classic RK4, plus a half-step rerun.

    ``ic`` is ``F`` (first order) or ``(F, F')`` (second order).
    """
    _check_window(ode, cfg)
    ic = np.atleast_1d(np.asarray(ic, dtype=np.complex128))
    if ic.size != ode.order:
        raise ValueError(f"expected {ode.order} initial value(s), got {ic.size}")
    if not np.all(np.isfinite(ic)):
        raise ValueError("initial conditions must be finite")
    y0 = ic[0]
    dy0 = ic[1] if ode.order == 2 else 0j
    F, dF, h, n = _run(ode, y0, dy0, cfg, 1, backend)
    F2, _, _, _ = _run(ode, y0, dy0, cfg, 2, backend)
    return Trajectory(
        t=cfg.grid, F=F, dF=dF, h=h, n_steps=n,
        error_estimate=np.abs(F - F2) * (16.0 / 15.0),
        backend=backend or kernels.BACKEND,
    )


@dataclass(frozen=True)
class ValidationReport:
    grid: np.ndarray
    closed_form: np.ndarray
    rk: np.ndarray
    max_abs_err: float
    max_rel_err: float
    ic_source: str
    richardson_rel: float
    restart_t: float
    restart_max_rel_err: float
    runtime: float
    meta: dict = field(default_factory=dict)

    @property
    def abs_err(self):
        return np.abs(self.closed_form - self.rk)

    def passed(self, threshold):
        return self.max_rel_err <= threshold and self.restart_max_rel_err <= threshold

    def summary(self):
        return (f"max_abs_err={self.max_abs_err:.3e} max_rel_err={self.max_rel_err:.3e} "
                f"richardson={self.richardson_rel:.1e} restart={self.restart_max_rel_err:.3e} "
                f"ic={self.ic_source}")


def _initial_conditions(ode, sol, t, scale):
    F = complex(sol(t))
    if ode.order == 1:
        return np.array([F * scale])
    return np.array([F, complex(sol.derivative(t))]) * scale


def validate_solution(ode, sol, cfg, perturb_ic=1.0, backend=None):
    """Compare the closed form ``sol`` with an RK4 integration of ``ode``.

    Initial conditions come from the evaluator at ``t_start`` (value and the
    series slope), multiplied by ``perturb_ic`` for negative controls. Errors
    are normalized by the largest closed-form magnitude on the grid, since the
    solutions oscillate through zero. A second run restarted from ICs taken
    at the grid midpoint must land on the same curve.
    """
    start = time.perf_counter()
    _check_window(ode, cfg)
    ic = _initial_conditions(ode, sol, cfg.t_start, perturb_ic)
    traj = rk_integrate(ode, ic, cfg, backend)
    closed = np.asarray(sol(traj.t), dtype=np.complex128)
    scale = float(np.max(np.abs(closed))) or 1.0
    err = np.abs(closed - traj.F)

    mid = cfg.n_grid // 2
    t_mid = float(traj.t[mid])
    sub = RkConfig(t_mid, cfg.t_end, cfg.h, cfg.n_grid - mid)
    ic_mid = _initial_conditions(ode, sol, t_mid, perturb_ic)
    redo = rk_integrate(ode, ic_mid, sub, backend)
    restart = float(np.max(np.abs(sol(redo.t) - redo.F))) / scale

    src = "closed form at t_start" + ("" if ode.order == 1 else " (value and slope)")
    if perturb_ic != 1.0:
        src += f", scaled by {perturb_ic!r}"
    return ValidationReport(
        grid=traj.t,
        closed_form=closed,
        rk=traj.F,
        max_abs_err=float(err.max()),
        max_rel_err=float(err.max()) / scale,
        ic_source=src,
        richardson_rel=float(traj.error_estimate.max()) / scale,
        restart_t=t_mid,
        restart_max_rel_err=restart,
        runtime=time.perf_counter() - start,
        meta={"h": traj.h, "n_steps": traj.n_steps, "backend": traj.backend},
    )


# phase-shift boundary scan --------------------------------------------------

@dataclass(frozen=True)
class BoundaryResult:
    kind: str
    r: float
    x_star: object  # float, or None when the criterion fails at x = X
    X: float
    N: int
    eps: float
    dx: float


def _truncation(kind, r, N):
    return deriv_sin_series(r, N) if kind == "sin" else deriv_cos_series(r, N)


def _truncation_values(s, x):
    out = np.empty(x.size, dtype=np.complex128)
    zero = x == 0
    if np.any(zero):
        try:
            out[zero] = eval_series(s, 0.0).value
        except DomainError:
            out[zero] = np.inf
    if np.any(~zero):
        out[~zero] = eval_series(s, x[~zero], max_cancellation=math.inf).value
    return out


def phase_boundary(kind, r, N=40, X=25.0, eps=0.01, dx=0.01):
    """Left end ``x*`` of the region where ``D^r sin/cos`` looks phase shifted.

    ``S_N`` is the termwise order-``r`` derivative of the first ``N`` Maclaurin
    terms. ``x*`` is the smallest grid point with
    ``|S_N(x) - f(x + r pi/2)| <= eps`` for every grid point from there to
    ``X``; ``None`` if the criterion fails at ``X`` itself.
    """
    if kind not in ("sin", "cos"):
        raise ValueError("kind must be 'sin' or 'cos'")
    if N < 1:
        raise ValueError("N must be positive")
    r = float(r)
    x = np.arange(int(round(X / dx)) + 1) * dx
    approx = _truncation_values(_truncation(kind, r, N), x)
    shifted = (np.sin if kind == "sin" else np.cos)(x + r * math.pi / 2)
    with np.errstate(invalid="ignore"):
        ok = np.abs(approx - shifted) <= eps
    bad = np.flatnonzero(~ok)
    if bad.size == 0:
        x_star = 0.0
    elif bad[-1] == x.size - 1:
        x_star = None
    else:
        x_star = float(x[bad[-1] + 1])
    return BoundaryResult(kind, r, x_star, float(X), int(N), float(eps), float(dx))


def boundary_scan(kind, orders, **kw):
    return [phase_boundary(kind, r, **kw) for r in orders]


# telescoping identity -------------------------------------------------------

def _cfrac(z):
    z = complex(z)
    return Fraction(z.real), Fraction(z.imag)


def _cmul(a, b):
    return a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0]


def _cdiv(a, b):
    d = b[0] * b[0] + b[1] * b[1]
    n = _cmul(a, (b[0], -b[1]))
    return n[0] / d, n[1] / d


def _cpow_int(a, k):
    out = (Fraction(1), Fraction(0))
    for _ in range(k):
        out = _cmul(out, a)
    return out


def _identity_exact(w, c, n, M):
    # term k is Gamma(c)^n w^k / Gamma(k+c)^n = w^k / ((c)_k)^n
    wf, cf = _cfrac(w), _cfrac(c)
    terms = []
    wk = (Fraction(1), Fraction(0))
    poch = (Fraction(1), Fraction(0))
    for k in range(2 * M + 3):
        terms.append(_cdiv(wk, _cpow_int(poch, n)))
        wk = _cmul(wk, wf)
        poch = _cmul(poch, (cf[0] + k, cf[1]))
    re, im = Fraction(0), Fraction(0)
    for m in range(M + 1):
        sign = 1 if m % 2 == 0 else -1
        re += sign * (terms[2 * m][0] + terms[2 * m + 2][0])
        im += sign * (terms[2 * m][1] + terms[2 * m + 2][1])
    return math.hypot(float(re - 1), float(im))


def _identity_float(w, c, n, M):
    w, c = complex(w), complex(c)
    gc = gamma(c) ** n
    total = 0j
    for m in range(M + 1):
        pair = (w ** (2 * m) * recip_gamma(2 * m + c) ** n
                + w ** (2 * m + 2) * recip_gamma(2 * m + 2 + c) ** n)
        total += (-1) ** m * pair
    return abs(gc * total - 1)


def series_identity_check(w, c, n, M, method="exact"):
    """Residual ``|Gamma(c)^n sum_{m=0}^{M} (-1)^m [...] - 1|`` of the telescoping identity.

    ``method="exact"`` sums in rational arithmetic on the exact binary values
    of ``w`` and ``c``, so the result is the true truncation tail rather than
    rounding noise. ``method="float"`` sums in doubles with the gamma functions.
    """
    if isinstance(n, bool) or int(n) != n or n < 1:
        raise ValueError("n must be a positive integer")
    if M < 2:
        raise ValueError("M must be at least 2")
    if is_pole(c):
        raise PoleError(f"Gamma(c) is infinite for c = {c!r}")
    n, M = int(n), int(M)
    if method == "exact":
        return _identity_exact(w, c, n, M)
    if method == "float":
        return _identity_float(w, c, n, M)
    raise ValueError(f"unknown method {method!r}")
