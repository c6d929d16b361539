"""Branches given by polynomial parametrizations ``t -> (x(t), y(t))``."""

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd

import flint

from .errors import DomainError
from .germ import Germ, _as_germ, format_terms, parse_terms
from .intersection import _fraction_dict
from .rational import INF

_XYT = flint.fmpq_mpoly_ctx.get(("x", "y", "t"), "lex")


def _trim(coeffs):
    coeffs = [Fraction(c) for c in coeffs]
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _order(coeffs):
    for k, c in enumerate(coeffs):
        if c:
            return k
    return INF


def _poly(coeffs):
    return flint.fmpq_poly([flint.fmpq(c.numerator, c.denominator) for c in coeffs])


@dataclass(frozen=True)
class BranchCurve:
    """An irreducible curve germ through the origin.

    ``x`` and ``y`` hold the coefficient lists (index = power of ``t``).
    """

    x: tuple
    y: tuple

    def __post_init__(self):
        object.__setattr__(self, "x", _trim(self.x))
        object.__setattr__(self, "y", _trim(self.y))
        if not self.x and not self.y:
            raise DomainError("a parametrization cannot be identically zero")
        if (self.x and self.x[0]) or (self.y and self.y[0]):
            raise DomainError("a parametrization must pass through the origin")
        g = 0
        for coeffs in (self.x, self.y):
            for k, c in enumerate(coeffs):
                if c:
                    g = gcd(g, k)
        if g != 1:
            raise DomainError("parametrization is not primitive")

    @classmethod
    def parse(cls, xtext, ytext):
        return cls(_parse_univariate(xtext), _parse_univariate(ytext))

    @cached_property
    def x_poly(self):
        return _poly(self.x)

    @cached_property
    def y_poly(self):
        return _poly(self.y)

    @property
    def ord_x(self):
        return _order(self.x)

    @property
    def ord_y(self):
        return _order(self.y)

    @property
    def multiplicity(self):
        return min(self.ord_x, self.ord_y)

    def degree(self):
        return max(len(self.x), len(self.y)) - 1

    def texts(self):
        return format_univariate(self.x), format_univariate(self.y)

    def __str__(self):
        xs, ys = self.texts()
        return f"({xs}, {ys})"


def _parse_univariate(text):
    terms = parse_terms(text, ("t",))
    if not terms:
        return ()
    n = max(k for (k,) in terms)
    out = [Fraction(0)] * (n + 1)
    for (k,), c in terms.items():
        out[k] = c
    return tuple(out)


def format_univariate(coeffs):
    return format_terms({(k,): c for k, c in enumerate(coeffs) if c}, ("t",))


def branch_eval_order(curve, psi):
    """``ord_t psi(x(t), y(t))`` or ``INF`` when the branch lies on ``psi = 0``."""
    psi = _as_germ(psi)
    comp = psi.eval_poly(curve.x_poly, curve.y_poly)
    if comp.is_zero():
        return INF
    coeffs = comp.coeffs()
    for k, c in enumerate(coeffs):
        if c != 0:
            return k
    return INF


def implicitize(curve):
    """Reduced local equation of the branch, normalized by its first term.

    The elimination is global, so the result is only a valid local equation
    when ``x(t)`` and ``y(t)`` have no common root besides ``t = 0``; other
    parametrizations are rejected.
    """
    if curve.x == ():
        return Germ.x()
    if curve.y == ():
        return Germ.y()
    common = curve.x_poly.gcd(curve.y_poly)
    low = _order([Fraction(int(c.p), int(c.q)) for c in common.coeffs()])
    if common.degree() > low:
        raise DomainError("parametrization meets the origin at several parameter values")
    return global_equation(curve, check_local=True)


def global_equation(curve, check_local=False):
    """Irreducible polynomial vanishing on the image of the parametrization."""
    if curve.x == ():
        return Germ.x()
    if curve.y == ():
        return Germ.y()
    x, y, t = _XYT.gens()
    px = _XYT.from_dict({(0, 0, i): flint.fmpq(c.numerator, c.denominator) for i, c in enumerate(curve.x) if c})
    py = _XYT.from_dict({(0, 0, i): flint.fmpq(c.numerator, c.denominator) for i, c in enumerate(curve.y) if c})
    res = (x - px).resultant(y - py, "t")
    _, factors = res.factor()
    for fac, _e in factors:
        d = {(i, j): c for (i, j, _), c in _fraction_dict(fac).items()}
        g = Germ(d)
        if g.is_unit():
            continue
        if branch_eval_order(curve, g) is INF:
            if check_local and g.mult() != curve.multiplicity:
                raise DomainError("elimination did not isolate a single branch")
            lead = min(g.terms, key=lambda key: (key[0] + key[1], -key[0]))
            return g * (1 / g.coeff(*lead))
    raise DomainError("elimination degeneracy")
