"""Pure-Python implementations of the hot kernels.

Same algorithms and operation order as ``_ckernels.pyx``. Series sums over
many points are vectorized with numpy; single points use scalar floats to
avoid per-operation array overhead.
"""
import math

import numpy as np

from ._dd import cdd_mul, cdd_mul_d, dd_add

STATUS_OK = 0
STATUS_SINGULAR = 1
STATUS_OVERFLOW = 2

_VECTOR_MIN = 24


def _series_point(chr_, chi, clr, cli, wr, wi, rel_tol, patience):
    M = len(chr_)
    pr, prl, pi_, pil = 1.0, 0.0, 0.0, 0.0
    sr, srl, si, sil = 0.0, 0.0, 0.0, 0.0
    max_term = 0.0
    last = 0.0
    prev = 0.0
    small = 0
    used = M
    converged = False
    for m in range(M):
        tr, trl, ti, til = cdd_mul(chr_[m], clr[m], chi[m], cli[m], pr, prl, pi_, pil)
        sr, srl = dd_add(sr, srl, tr, trl)
        si, sil = dd_add(si, sil, ti, til)
        mag = math.hypot(tr, ti)
        last = max(mag, prev)
        prev = mag
        if mag > max_term:
            max_term = mag
        smag = math.hypot(sr, si)
        if smag > 0.0:
            if mag <= rel_tol * smag:
                small += 1
                if small >= patience:
                    used = m + 1
                    converged = True
                    break
            else:
                small = 0
        pr, prl, pi_, pil = cdd_mul_d(pr, prl, pi_, pil, wr, wi)
    return sr, srl, si, sil, max_term, used, last, converged


def _series_vector(ch, cl, w, rel_tol, patience):
    N = w.shape[0]
    M = ch.shape[0]
    wr = w.real.copy()
    wi = w.imag.copy()
    pr = np.ones(N)
    prl = np.zeros(N)
    pi_ = np.zeros(N)
    pil = np.zeros(N)
    sr = np.zeros(N)
    srl = np.zeros(N)
    si = np.zeros(N)
    sil = np.zeros(N)
    max_term = np.zeros(N)
    last = np.zeros(N)
    prev = np.zeros(N)
    small = np.zeros(N, dtype=np.int64)
    used = np.full(N, M, dtype=np.int64)
    converged = np.zeros(N, dtype=bool)
    act = np.arange(N)
    for m in range(M):
        if act.size == 0:
            break
        c = ch[m]
        d = cl[m]
        tr, trl, ti, til = cdd_mul(c.real, d.real, c.imag, d.imag,
                                   pr[act], prl[act], pi_[act], pil[act])
        a, b = dd_add(sr[act], srl[act], tr, trl)
        sr[act], srl[act] = a, b
        a, b = dd_add(si[act], sil[act], ti, til)
        si[act], sil[act] = a, b
        mag = np.hypot(tr, ti)
        last[act] = np.maximum(mag, prev[act])
        prev[act] = mag
        max_term[act] = np.maximum(max_term[act], mag)
        smag = np.hypot(sr[act], si[act])
        nz = smag > 0.0
        tiny = nz & (mag <= rel_tol * smag)
        sm = np.where(tiny, small[act] + 1, np.where(nz, 0, small[act]))
        small[act] = sm
        done = sm >= patience
        if done.any():
            fin = act[done]
            used[fin] = m + 1
            converged[fin] = True
        keep = ~done
        act = act[keep]
        a, b, e, f = cdd_mul_d(pr[act], prl[act], pi_[act], pil[act], wr[act], wi[act])
        pr[act], prl[act], pi_[act], pil[act] = a, b, e, f
    return sr, srl, si, sil, max_term, used, last, converged


def series_sum(ch, cl, w, rel_tol, patience):
    """Forward double-double sum of ``sum_m c_m w**m`` at every ``w``.

    ``ch``/``cl`` are the high and low parts of the complex coefficients.
    Summation stops once ``patience`` consecutive terms fall below
    ``rel_tol`` times the running sum.

    Returns ``(hi, lo, max_term, used, last_term, converged)`` arrays.
    """
    N = w.shape[0]
    if N >= _VECTOR_MIN:
        sr, srl, si, sil, max_term, used, last, conv = _series_vector(ch, cl, w, rel_tol, patience)
        return sr + 1j * si, srl + 1j * sil, max_term, used, last, conv
    chr_ = ch.real.tolist()
    chi = ch.imag.tolist()
    clr = cl.real.tolist()
    cli = cl.imag.tolist()
    hi = np.empty(N, dtype=complex)
    lo = np.empty(N, dtype=complex)
    max_term = np.empty(N)
    used = np.empty(N, dtype=np.int64)
    last = np.empty(N)
    conv = np.empty(N, dtype=bool)
    for k in range(N):
        z = complex(w[k])
        sr, srl, si, sil, mx, u, la, cv = _series_point(
            chr_, chi, clr, cli, z.real, z.imag, rel_tol, patience)
        hi[k] = complex(sr, si)
        lo[k] = complex(srl, sil)
        max_term[k] = mx
        used[k] = u
        last[k] = la
        conv[k] = cv
    return hi, lo, max_term, used, last, conv


def _power_law(coefs, exps, t):
    # sum_k coefs[k] * t**exps[k] for real t >= 0; None marks a singular hit.
    acc_r = 0.0
    acc_i = 0.0
    if t > 0.0:
        L = math.log(t)
        for (cr, ci), (er, ei) in zip(coefs, exps):
            mag = math.exp(er * L)
            if ei == 0.0:
                vr, vi = mag, 0.0
            else:
                vr = mag * math.cos(ei * L)
                vi = mag * math.sin(ei * L)
            acc_r += cr * vr - ci * vi
            acc_i += cr * vi + ci * vr
        return complex(acc_r, acc_i)
    for (cr, ci), (er, ei) in zip(coefs, exps):
        if er > 0.0:
            continue
        if er == 0.0 and ei == 0.0:
            acc_r += cr
            acc_i += ci
            continue
        return None
    return complex(acc_r, acc_i)


def _pairs(arr):
    return [(z.real, z.imag) for z in arr.tolist()]


def rk4_power_law(order, damp_c, damp_e, stiff_c, stiff_e, force_c, force_e,
                  y0, dy0, t0, h, n_steps, stride):
    """Classic fixed-step RK4 for ODEs with power-law coefficients.

    order 1:  F'  = forcing(t) - stiffness(t) F
    order 2:  F'' = forcing(t) - damping(t) F' - stiffness(t) F

    Each coefficient function is ``sum_k c_k t**e_k``. States are recorded
    every ``stride`` steps, including the initial one.

    Returns ``(F, dF, status, steps_done)``.
    """
    dc, de = _pairs(damp_c), _pairs(damp_e)
    sc, se = _pairs(stiff_c), _pairs(stiff_e)
    fc, fe = _pairs(force_c), _pairs(force_e)
    n_out = n_steps // stride + 1
    F_out = np.zeros(n_out, dtype=complex)
    dF_out = np.zeros(n_out, dtype=complex)

    def coeffs(t):
        s = _power_law(sc, se, t)
        f = _power_law(fc, fe, t)
        d = _power_law(dc, de, t) if order == 2 else 0j
        if s is None or f is None or d is None:
            return None
        return d, s, f

    y = complex(y0)
    v = complex(dy0)
    F_out[0] = y
    dF_out[0] = v
    cur = coeffs(t0)
    if cur is None:
        return F_out, dF_out, STATUS_SINGULAR, 0
    for k in range(n_steps):
        t = t0 + k * h
        mid = coeffs(t + 0.5 * h)
        end = coeffs(t0 + (k + 1) * h)
        if mid is None or end is None:
            return F_out, dF_out, STATUS_SINGULAR, k
        d0, s0, f0 = cur
        dm, sm, fm = mid
        d1, s1, f1 = end
        if order == 1:
            k1 = f0 - s0 * y
            k2 = fm - sm * (y + 0.5 * h * k1)
            k3 = fm - sm * (y + 0.5 * h * k2)
            k4 = f1 - s1 * (y + h * k3)
            y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
            v = f1 - s1 * y
        else:
            ky1 = v
            kv1 = f0 - d0 * v - s0 * y
            y2 = y + 0.5 * h * ky1
            v2 = v + 0.5 * h * kv1
            ky2 = v2
            kv2 = fm - dm * v2 - sm * y2
            y3 = y + 0.5 * h * ky2
            v3 = v + 0.5 * h * kv2
            ky3 = v3
            kv3 = fm - dm * v3 - sm * y3
            y4 = y + h * ky3
            v4 = v + h * kv3
            ky4 = v4
            kv4 = f1 - d1 * v4 - s1 * y4
            y = y + (h / 6.0) * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4)
            v = v + (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4)
        if not (math.isfinite(y.real) and math.isfinite(y.imag)) or abs(y) > 1e300:
            return F_out, dF_out, STATUS_OVERFLOW, k + 1
        cur = end
        if (k + 1) % stride == 0:
            j = (k + 1) // stride
            F_out[j] = y
            dF_out[j] = v
    return F_out, dF_out, STATUS_OK, n_steps
