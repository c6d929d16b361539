"""Truncated power series in one variable, backed by ``flint.fmpq_poly``."""

import flint

from .rational import INF


class NeedPrecision(Exception):
    """Raised when a result depends on coefficients beyond the known precision."""


class TSeries:
    """A series known exactly below ``prec``; ``exact`` marks a finished polynomial."""

    __slots__ = ("poly", "prec", "exact")

    def __init__(self, poly, prec, exact=False):
        if not exact:
            poly = poly.truncate(prec) if poly.degree() >= prec else poly
        self.poly = poly
        self.prec = prec
        self.exact = exact

    @classmethod
    def exact_poly(cls, poly, prec):
        return cls(poly, prec, exact=True)

    def order(self):
        """Index of the first nonzero coefficient, ``INF`` if exactly zero, else ``None``."""
        if self.poly.is_zero():
            return INF if self.exact else None
        coeffs = self.poly.coeffs()
        for k, c in enumerate(coeffs):
            if c != 0:
                return k if (self.exact or k < self.prec) else None
        return None

    def coeff(self, k):
        if not self.exact and k >= self.prec:
            raise NeedPrecision
        return self.poly[k]

    def shift_down(self, k):
        return TSeries(self.poly.right_shift(k), self.prec - k, self.exact)

    def sub_const(self, c):
        return TSeries(self.poly - c, self.prec, self.exact)

    def is_known_zero(self):
        return self.exact and self.poly.is_zero()


def divide(a, b, work_prec):
    """Quotient ``a / b`` where ``ord a >= ord b``; the result is a power series."""
    ob = b.order()
    if ob is None or ob is INF:
        raise NeedPrecision
    if a.is_known_zero():
        return TSeries.exact_poly(flint.fmpq_poly(0), work_prec)
    a1 = a.shift_down(ob)
    b1 = b.shift_down(ob)
    if a1.exact and b1.exact and b1.poly.degree() == 0:
        return TSeries.exact_poly(a1.poly / b1.poly[0], work_prec)
    p = work_prec
    if not a1.exact:
        p = min(p, a1.prec)
    if not b1.exact:
        p = min(p, b1.prec)
    if p <= 0:
        raise NeedPrecision
    inv = flint.fmpq_series(b1.poly.truncate(p).coeffs(), prec=p).inv()
    q = flint.fmpq_poly(inv.coeffs()).mul_low(a1.poly.truncate(p), p)
    return TSeries(q, p)


class RatFunc:
    """Exact rational function ``num/den`` in one variable (used for zero tests)."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        den = flint.fmpq_poly(1) if den is None else den
        g = num.gcd(den)
        if not g.is_zero() and g.degree() > 0:
            num, den = num / g, den / g
        self.num, self.den = num, den

    def __truediv__(self, other):
        return RatFunc(self.num * other.den, self.den * other.num)

    def sub_const(self, c):
        return RatFunc(self.num - self.den * c, self.den)

    def is_zero(self):
        return self.num.is_zero()
