"""Local intersection multiplicity of two plane germs by elimination."""

import flint

from .errors import DomainError
from .germ import Germ, _as_germ
from .rational import INF

_XY = flint.fmpq_mpoly_ctx.get(("x", "y"), "lex")
_X = flint.fmpq_poly([0, 1])


def _to_xy(psi):
    return psi.to_flint(_XY)


def _shear(poly, k):
    # x -> x + k*y
    x, y = _XY.gens()
    return poly.compose(x + k * y, y)


def _y_general(poly):
    lead = {}
    top = -1
    for (i, j), c in poly.to_dict().items():
        i, j = int(i), int(j)
        if j > top:
            top, lead = j, {}
        if j == top:
            lead[i] = c
    return top >= 0 and set(lead) == {0}


def _x_order(res):
    if res.is_zero():
        return INF
    return min(int(k[0]) for k in res.to_dict())


def intersection_multiplicity(phi, psi, max_shears=60):
    """Intersection number of two germs at the origin.

    Returns ``INF`` when the germs share a branch through the origin.  The
    value is the x-order of the y-resultant after a shear ``x -> x + k*y``
    that makes both equations monic in ``y``; the smallest value over
    successive shears is taken once two consecutive shears agree with it.
    """
    phi, psi = _as_germ(phi), _as_germ(psi)
    if phi.is_zero() or psi.is_zero():
        raise DomainError("intersection with the zero germ is undefined")
    if phi.is_unit() or psi.is_unit():
        return 0
    f, g = _to_xy(phi), _to_xy(psi)
    common = f.gcd(g)
    if not common.is_constant():
        if common.to_dict().get((0, 0), 0) == 0:
            return INF
        f = _exact_div(f, common)
        g = _exact_div(g, common)
    best = None
    streak = 0
    for k in range(max_shears):
        fk, gk = _shear(f, k), _shear(g, k)
        if not (_y_general(fk) and _y_general(gk)):
            continue
        val = _x_order(fk.resultant(gk, "y"))
        if best is None or val < best:
            best, streak = val, 1
        elif val == best:
            streak += 1
        else:
            streak = 0
        if streak >= 2:
            return best
    if best is None:
        raise DomainError("no admissible shear found")
    return best


def _exact_div(a, b):
    q, r = divmod(a, b)
    if not r.is_zero():
        raise AssertionError("inexact polynomial division")
    return q


def germ_from_xy(poly):
    return Germ({tuple(k): v for k, v in _fraction_dict(poly).items()})


def _fraction_dict(poly):
    from fractions import Fraction

    return {tuple(int(e) for e in k): Fraction(int(v.p), int(v.q)) for k, v in poly.to_dict().items()}
