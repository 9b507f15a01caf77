# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled hot kernels; see ``_pykernels`` for the reference semantics."""
import numpy as np

from libc.math cimport cos, exp, fma, hypot, isfinite, log, sin

cdef enum:
    STATUS_OK = 0
    STATUS_SINGULAR = 1
    STATUS_OVERFLOW = 2


cdef struct dd:
    double h
    double l


cdef struct cdd:
    dd r
    dd i


cdef inline dd quick_two_sum(double a, double b) noexcept nogil:
    cdef dd out
    out.h = a + b
    out.l = b - (out.h - a)
    return out


cdef inline dd two_sum(double a, double b) noexcept nogil:
    cdef dd out
    cdef double bb
    out.h = a + b
    bb = out.h - a
    out.l = (a - (out.h - bb)) + (b - bb)
    return out


cdef inline dd two_prod(double a, double b) noexcept nogil:
    cdef dd out
    out.h = a * b
    out.l = fma(a, b, -out.h)
    return out


cdef inline dd dd_add(dd a, dd b) noexcept nogil:
    cdef dd s = two_sum(a.h, b.h)
    cdef dd t = two_sum(a.l, b.l)
    cdef double e = s.l + t.h
    s = quick_two_sum(s.h, e)
    e = s.l + t.l
    return quick_two_sum(s.h, e)


cdef inline dd dd_neg(dd a) noexcept nogil:
    a.h = -a.h
    a.l = -a.l
    return a


cdef inline dd dd_mul(dd a, dd b) noexcept nogil:
    cdef dd p = two_prod(a.h, b.h)
    cdef double e = p.l + (a.h * b.l + a.l * b.h)
    return quick_two_sum(p.h, e)


cdef inline dd dd_mul_d(dd a, double b) noexcept nogil:
    cdef dd p = two_prod(a.h, b)
    cdef double e = p.l + a.l * b
    return quick_two_sum(p.h, e)


cdef inline cdd cdd_mul(cdd a, cdd b) noexcept nogil:
    cdef cdd out
    out.r = dd_add(dd_mul(a.r, b.r), dd_neg(dd_mul(a.i, b.i)))
    out.i = dd_add(dd_mul(a.r, b.i), dd_mul(a.i, b.r))
    return out


cdef inline cdd cdd_mul_d(cdd a, double br, double bi) noexcept nogil:
    cdef cdd out
    out.r = dd_add(dd_mul_d(a.r, br), dd_neg(dd_mul_d(a.i, bi)))
    out.i = dd_add(dd_mul_d(a.r, bi), dd_mul_d(a.i, br))
    return out


def series_sum(ch, cl, w, double rel_tol, int patience):
    cdef const double[::1] c_hi = np.ascontiguousarray(ch, dtype=np.complex128).view(np.float64)
    cdef const double[::1] c_lo = np.ascontiguousarray(cl, dtype=np.complex128).view(np.float64)
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.complex128).view(np.float64)
    cdef Py_ssize_t M = c_hi.shape[0] // 2
    cdef Py_ssize_t N = wv.shape[0] // 2
    hi_arr = np.empty(N, dtype=np.complex128)
    lo_arr = np.empty(N, dtype=np.complex128)
    max_arr = np.empty(N)
    used_arr = np.empty(N, dtype=np.int64)
    last_arr = np.empty(N)
    conv_arr = np.empty(N, dtype=np.uint8)
    cdef double[::1] hi_v = hi_arr.view(np.float64)
    cdef double[::1] lo_v = lo_arr.view(np.float64)
    cdef double[::1] max_v = max_arr
    cdef long long[::1] used_v = used_arr
    cdef double[::1] last_v = last_arr
    cdef unsigned char[::1] conv_v = conv_arr
    cdef Py_ssize_t k, m
    cdef cdd p, s, t, c
    cdef double wr, wi, mag, smag, mx, prev, last
    cdef int small
    cdef long long used
    cdef unsigned char conv
    with nogil:
        for k in range(N):
            wr = wv[2 * k]
            wi = wv[2 * k + 1]
            p.r.h = 1.0
            p.r.l = 0.0
            p.i.h = 0.0
            p.i.l = 0.0
            s.r.h = 0.0
            s.r.l = 0.0
            s.i.h = 0.0
            s.i.l = 0.0
            mx = 0.0
            mag = 0.0
            prev = 0.0
            last = 0.0
            small = 0
            used = M
            conv = 0
            for m in range(M):
                c.r.h = c_hi[2 * m]
                c.r.l = c_lo[2 * m]
                c.i.h = c_hi[2 * m + 1]
                c.i.l = c_lo[2 * m + 1]
                t = cdd_mul(c, p)
                s.r = dd_add(s.r, t.r)
                s.i = dd_add(s.i, t.i)
                mag = hypot(t.r.h, t.i.h)
                last = mag if mag > prev else prev
                prev = mag
                if mag > mx:
                    mx = mag
                smag = hypot(s.r.h, s.i.h)
                if smag > 0.0:
                    if mag <= rel_tol * smag:
                        small += 1
                        if small >= patience:
                            used = m + 1
                            conv = 1
                            break
                    else:
                        small = 0
                p = cdd_mul_d(p, wr, wi)
            hi_v[2 * k] = s.r.h
            hi_v[2 * k + 1] = s.i.h
            lo_v[2 * k] = s.r.l
            lo_v[2 * k + 1] = s.i.l
            max_v[k] = mx
            used_v[k] = used
            last_v[k] = last
            conv_v[k] = conv
    return hi_arr, lo_arr, max_arr, used_arr, last_arr, conv_arr.astype(bool)


cdef inline int power_law(const double[::1] c, const double[::1] e, Py_ssize_t K,
                          double t, double* outr, double* outi) noexcept nogil:
    cdef Py_ssize_t j
    cdef double L, mag, vr, vi, cr, ci, er, ei
    cdef double ar = 0.0
    cdef double ai = 0.0
    if t > 0.0:
        L = log(t)
        for j in range(K):
            cr = c[2 * j]
            ci = c[2 * j + 1]
            er = e[2 * j]
            ei = e[2 * j + 1]
            mag = exp(er * L)
            if ei == 0.0:
                vr = mag
                vi = 0.0
            else:
                vr = mag * cos(ei * L)
                vi = mag * sin(ei * L)
            ar += cr * vr - ci * vi
            ai += cr * vi + ci * vr
    else:
        for j in range(K):
            er = e[2 * j]
            ei = e[2 * j + 1]
            if er > 0.0:
                continue
            if er == 0.0 and ei == 0.0:
                ar += c[2 * j]
                ai += c[2 * j + 1]
                continue
            return 1
    outr[0] = ar
    outi[0] = ai
    return 0


cdef struct coef3:
    double complex d
    double complex s
    double complex f


cdef inline int eval_coeffs(int order,
                            const double[::1] dc, const double[::1] de, Py_ssize_t nd,
                            const double[::1] sc, const double[::1] se, Py_ssize_t ns,
                            const double[::1] fc, const double[::1] fe, Py_ssize_t nf,
                            double t, coef3* out) noexcept nogil:
    cdef double r, i
    if power_law(sc, se, ns, t, &r, &i):
        return 1
    out.s = r + 1j * i
    if power_law(fc, fe, nf, t, &r, &i):
        return 1
    out.f = r + 1j * i
    if order == 2:
        if power_law(dc, de, nd, t, &r, &i):
            return 1
        out.d = r + 1j * i
    else:
        out.d = 0
    return 0


def rk4_power_law(int order, damp_c, damp_e, stiff_c, stiff_e, force_c, force_e,
                  y0, dy0, double t0, double h, Py_ssize_t n_steps, Py_ssize_t stride):
    cdef const double[::1] dc = np.ascontiguousarray(damp_c, dtype=np.complex128).view(np.float64)
    cdef const double[::1] de = np.ascontiguousarray(damp_e, dtype=np.complex128).view(np.float64)
    cdef const double[::1] sc = np.ascontiguousarray(stiff_c, dtype=np.complex128).view(np.float64)
    cdef const double[::1] se = np.ascontiguousarray(stiff_e, dtype=np.complex128).view(np.float64)
    cdef const double[::1] fc = np.ascontiguousarray(force_c, dtype=np.complex128).view(np.float64)
    cdef const double[::1] fe = np.ascontiguousarray(force_e, dtype=np.complex128).view(np.float64)
    cdef Py_ssize_t nd = dc.shape[0] // 2
    cdef Py_ssize_t ns = sc.shape[0] // 2
    cdef Py_ssize_t nf = fc.shape[0] // 2
    cdef Py_ssize_t n_out = n_steps // stride + 1
    F_arr = np.zeros(n_out, dtype=np.complex128)
    dF_arr = np.zeros(n_out, dtype=np.complex128)
    cdef double complex[::1] F_v = F_arr
    cdef double complex[::1] dF_v = dF_arr
    cdef double complex y = y0
    cdef double complex v = dy0
    cdef double complex k1, k2, k3, k4, ky1, ky2, ky3, ky4, kv1, kv2, kv3, kv4
    cdef double complex y2, y3, y4, v2, v3, v4
    cdef coef3 cur, mid, end
    cdef Py_ssize_t k
    cdef double t
    cdef int status = STATUS_OK
    cdef Py_ssize_t done = n_steps
    F_v[0] = y
    dF_v[0] = v
    with nogil:
        if eval_coeffs(order, dc, de, nd, sc, se, ns, fc, fe, nf, t0, &cur):
            status = STATUS_SINGULAR
            done = 0
        else:
            for k in range(n_steps):
                t = t0 + k * h
                if (eval_coeffs(order, dc, de, nd, sc, se, ns, fc, fe, nf, t + 0.5 * h, &mid)
                        or eval_coeffs(order, dc, de, nd, sc, se, ns, fc, fe, nf,
                                       t0 + (k + 1) * h, &end)):
                    status = STATUS_SINGULAR
                    done = k
                    break
                if order == 1:
                    k1 = cur.f - cur.s * y
                    k2 = mid.f - mid.s * (y + 0.5 * h * k1)
                    k3 = mid.f - mid.s * (y + 0.5 * h * k2)
                    k4 = end.f - end.s * (y + h * k3)
                    y = y + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
                    v = end.f - end.s * y
                else:
                    ky1 = v
                    kv1 = cur.f - cur.d * v - cur.s * y
                    y2 = y + 0.5 * h * ky1
                    v2 = v + 0.5 * h * kv1
                    ky2 = v2
                    kv2 = mid.f - mid.d * v2 - mid.s * y2
                    y3 = y + 0.5 * h * ky2
                    v3 = v + 0.5 * h * kv2
                    ky3 = v3
                    kv3 = mid.f - mid.d * v3 - mid.s * y3
                    y4 = y + h * ky3
                    v4 = v + h * kv3
                    ky4 = v4
                    kv4 = end.f - end.d * v4 - end.s * y4
                    y = y + (h / 6.0) * (ky1 + 2.0 * ky2 + 2.0 * ky3 + ky4)
                    v = v + (h / 6.0) * (kv1 + 2.0 * kv2 + 2.0 * kv3 + kv4)
                if not (isfinite(y.real) and isfinite(y.imag)) or hypot(y.real, y.imag) > 1e300:
                    status = STATUS_OVERFLOW
                    done = k + 1
                    break
                cur = end
                if (k + 1) % stride == 0:
                    F_v[(k + 1) // stride] = y
                    dF_v[(k + 1) // stride] = v
    return F_arr, dF_arr, status, done
