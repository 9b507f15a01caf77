"""Double-double arithmetic.

The error-free transforms below work unchanged on Python floats and on
numpy arrays. Products use Dekker splitting, so results are bit-identical
to an FMA-based implementation.

``DDC`` is a complex double-double scalar used to build series
coefficients by exact-as-possible recurrences.
"""
import math

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


def split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    t, f = two_sum(al, bl)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e = e + (ah * bl + al * bh)
    return quick_two_sum(p, e)


def dd_mul_d(ah, al, b):
    p, e = two_prod(ah, b)
    e = e + al * b
    return quick_two_sum(p, e)


def dd_div(ah, al, bh, bl):
    q1 = ah / bh
    ph, pl = dd_mul_d(bh, bl, q1)
    rh, rl = dd_add(ah, al, -ph, -pl)
    q2 = rh / bh
    ph, pl = dd_mul_d(bh, bl, q2)
    rh, rl = dd_add(rh, rl, -ph, -pl)
    q3 = rh / bh
    q1, q2 = quick_two_sum(q1, q2)
    return dd_add(q1, q2, q3, 0.0)


def cdd_mul(arh, arl, aih, ail, brh, brl, bih, bil):
    """Complex double-double product, returned as (re_hi, re_lo, im_hi, im_lo)."""
    p1h, p1l = dd_mul(arh, arl, brh, brl)
    p2h, p2l = dd_mul(aih, ail, bih, bil)
    p3h, p3l = dd_mul(arh, arl, bih, bil)
    p4h, p4l = dd_mul(aih, ail, brh, brl)
    rh, rl = dd_add(p1h, p1l, -p2h, -p2l)
    ih, il = dd_add(p3h, p3l, p4h, p4l)
    return rh, rl, ih, il


def cdd_mul_d(arh, arl, aih, ail, br, bi):
    """Complex double-double times complex double."""
    p1h, p1l = dd_mul_d(arh, arl, br)
    p2h, p2l = dd_mul_d(aih, ail, bi)
    p3h, p3l = dd_mul_d(arh, arl, bi)
    p4h, p4l = dd_mul_d(aih, ail, br)
    rh, rl = dd_add(p1h, p1l, -p2h, -p2l)
    ih, il = dd_add(p3h, p3l, p4h, p4l)
    return rh, rl, ih, il


class DDC:
    """Complex number carried as two double-double components."""

    __slots__ = ("rh", "rl", "ih", "il")

    def __init__(self, rh=0.0, rl=0.0, ih=0.0, il=0.0):
        self.rh = rh
        self.rl = rl
        self.ih = ih
        self.il = il

    @classmethod
    def of(cls, z):
        if isinstance(z, DDC):
            return z
        z = complex(z)
        return cls(z.real, 0.0, z.imag, 0.0)

    @classmethod
    def from_parts(cls, hi, lo):
        rh, rl = quick_two_sum(hi.real, lo.real)
        ih, il = quick_two_sum(hi.imag, lo.imag)
        return cls(rh, rl, ih, il)

    def hi(self):
        return complex(self.rh, self.ih)

    def lo(self):
        return complex(self.rl, self.il)

    def __complex__(self):
        return complex(self.rh + self.rl, self.ih + self.il)

    def is_zero(self):
        return self.rh == 0.0 and self.ih == 0.0 and self.rl == 0.0 and self.il == 0.0

    def __neg__(self):
        return DDC(-self.rh, -self.rl, -self.ih, -self.il)

    def __add__(self, other):
        o = DDC.of(other)
        rh, rl = dd_add(self.rh, self.rl, o.rh, o.rl)
        ih, il = dd_add(self.ih, self.il, o.ih, o.il)
        return DDC(rh, rl, ih, il)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-DDC.of(other))

    def __rsub__(self, other):
        return DDC.of(other) - self

    def __mul__(self, other):
        if isinstance(other, DDC):
            return DDC(*cdd_mul(self.rh, self.rl, self.ih, self.il,
                                other.rh, other.rl, other.ih, other.il))
        other = complex(other)
        return DDC(*cdd_mul_d(self.rh, self.rl, self.ih, self.il, other.real, other.imag))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = DDC.of(other)
        # a / b = a conj(b) / |b|^2
        nh, nl = dd_add(*dd_mul(o.rh, o.rl, o.rh, o.rl), *dd_mul(o.ih, o.il, o.ih, o.il))
        num = self * DDC(o.rh, o.rl, -o.ih, -o.il)
        rh, rl = dd_div(num.rh, num.rl, nh, nl)
        ih, il = dd_div(num.ih, num.il, nh, nl)
        return DDC(rh, rl, ih, il)

    def __rtruediv__(self, other):
        return DDC.of(other) / self

    def __abs__(self):
        return math.hypot(self.rh + self.rl, self.ih + self.il)

    def __repr__(self):
        return f"DDC({complex(self)!r})"
