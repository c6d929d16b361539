"""Normalized valuations centered at the origin and their tree structure.

Divisorial valuations (including monomial ones and the multiplicity
valuation) are stored by their chain of chart tangents, which names the
minimal sequence of blowups creating the divisor.  Curve valuations keep the
branch parametrization.  Order, meets and skewness are read off a joint
blowup model in which every argument is a component or a separated curvette.
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .branch import BranchCurve, branch_eval_order, global_equation, implicitize
from .errors import DomainError, InvariantViolation
from .germ import _as_germ
from .model import CurveLift, Model, normalize_tangent, order_along
from .rational import INF, fmt, to_fraction


@dataclass(frozen=True)
class Valuation:
    """``kind`` is ``"divisorial"`` or ``"curve"``.

    ``weights`` is kept for divisorial valuations that were built as monomial
    ones, so that they can be evaluated and printed in that form.
    """

    kind: str
    chain: tuple = ()
    curve: BranchCurve = None
    weights: tuple = None

    @property
    def key(self):
        return ("curve", self.curve) if self.kind == "curve" else ("div", self.chain)

    def __eq__(self, other):
        if not isinstance(other, Valuation):
            return NotImplemented
        return self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def is_root(self):
        return self.kind == "divisorial" and not self.chain

    def __str__(self):
        if self.kind == "curve":
            return f"curve{self.curve}"
        if not self.chain:
            return "multiplicity"
        if self.weights is not None:
            return f"monomial({fmt(self.weights[0])}, {fmt(self.weights[1])})"
        return "divisorial(" + ", ".join(fmt(c) for c in self.chain) + ")"


def multiplicity_valuation():
    return Valuation("divisorial", (), None, (Fraction(1), Fraction(1)))


def monomial(wx, wy):
    """Monomial valuation with ``v(x) = wx`` and ``v(y) = wy`` (smaller weight 1)."""
    wx, wy = to_fraction(wx), to_fraction(wy)
    if wx <= 0 or wy <= 0 or min(wx, wy) != 1:
        raise DomainError("monomial weights must be positive with minimum 1")
    den = wx.denominator * wy.denominator // gcd(wx.denominator, wy.denominator)
    p, q = int(wx * den), int(wy * den)
    g = gcd(p, q)
    p, q = p // g, q // g
    chain = []
    while p != q:
        # p is the weight of the chart's first coordinate, q of the second
        if q > p:
            chain.append(Fraction(0))
            q -= p
        else:
            chain.append(INF)
            p, q = q, p - q
    return Valuation("divisorial", tuple(chain), None, (wx, wy))


def divisorial_chain(tangents):
    return Valuation("divisorial", tuple(normalize_tangent(c) for c in tangents))


def divisorial(model, component=None):
    """Divisorial valuation of a component (default: the last one created)."""
    e = model.last() if component is None else component
    return Valuation("divisorial", model.component(e).chain)


def curve(c):
    if not isinstance(c, BranchCurve):
        raise DomainError("curve valuations need a parametrized branch")
    return Valuation("curve", (), c)


@lru_cache(maxsize=4096)
def _chain_component(chain):
    m = Model.from_chain(chain)
    return m.component(m.last())


@dataclass(frozen=True)
class ValInvariants:
    alpha: object
    thinness: object
    mult: int
    b: object


def invariants(nu):
    if nu.kind == "curve":
        return ValInvariants(INF, INF, nu.curve.multiplicity, None)
    c = _chain_component(nu.chain)
    return ValInvariants(c.alpha, c.thinness, c.mult, c.b)


def skewness(nu):
    return invariants(nu).alpha


def generic_mult(nu):
    return invariants(nu).mult


def evaluate(nu, psi):
    """``nu(psi)`` as an exact rational (``INF`` when a branch lies on ``psi = 0``)."""
    psi = _as_germ(psi)
    if psi.is_zero():
        raise DomainError("valuation of the zero germ")
    if psi.is_unit():
        return Fraction(0)
    if nu.kind == "curve":
        o = branch_eval_order(nu.curve, psi)
        return o if o is INF else Fraction(o, nu.curve.multiplicity)
    if nu.weights is not None:
        wx, wy = nu.weights
        return min(i * wx + j * wy for (i, j), _ in psi.items())
    c = _chain_component(nu.chain)
    return Fraction(order_along(psi, nu.chain), c.b)


def eval_ideal(nu, generators):
    """Value on an ideal: the minimum over its generators."""
    if not generators:
        raise DomainError("an ideal needs at least one generator")
    return min(evaluate(nu, g) for g in generators)


# tree structure


@lru_cache(maxsize=4096)
def _equation(c):
    return implicitize(c)


@lru_cache(maxsize=16384)
def _branch_test(c1, c2):
    """``True``/``False``, or an intersection bound beyond which the branches agree.

    When no local equation is available, both branches lying on the same
    irreducible curve ``F = 0`` only proves they agree once their
    intersection number exceeds the Milnor number of ``F`` at the origin,
    which bounds the intersection of any two distinct branches of ``F``.
    """
    if c1 == c2:
        return True
    if c1.multiplicity != c2.multiplicity:
        return False
    for a, b in ((c1, c2), (c2, c1)):
        try:
            return branch_eval_order(a, _equation(b)) is INF
        except DomainError:
            pass
    f = global_equation(c2)
    if branch_eval_order(c1, f) is not INF:
        return False
    from .intersection import intersection_multiplicity

    fx = _partial(f, 0)
    fy = _partial(f, 1)
    if fx.is_zero() or fy.is_zero() or fx.is_unit() or fy.is_unit():
        # F is smooth at the origin, so it has a single branch there
        return True
    return intersection_multiplicity(fx, fy)


def _partial(f, var):
    from .germ import Germ

    out = {}
    for (i, j), c in f.items():
        e = (i, j)[var]
        if e:
            out[(i - 1, j) if var == 0 else (i, j - 1)] = c * e
    return Germ(out)


def same_branch(c1, c2):
    """Whether two parametrizations describe the same branch."""
    r = _branch_test(c1, c2)
    if r is True or r is False:
        return r
    ctx = TreeContext([curve(c1), curve(c2)])
    return ctx.node(curve(c1)) == ctx.node(curve(c2))


class TreeContext:
    """A joint blowup model in which a set of valuations sits as tree vertices.

    Divisorial valuations are components.  Each curve valuation is a leaf
    attached to the component carrying its strict transform, after enough
    blowups that the strict transform is a curvette at a free point and
    distinct branches land on distinct points.
    """

    EQUALITY_DEPTH = 6

    def __init__(self, valuations=()):
        self.model = Model()
        self.model._blowup(None)
        self._curves = []
        self._alias = {}
        self._dirty = False
        for v in valuations:
            self.add(v)

    def add(self, nu):
        if nu.kind == "curve":
            for k, (lift, _) in enumerate(self._curves):
                if lift.curve == nu.curve:
                    return self._root_alias(k)
            self._curves.append((CurveLift(nu.curve), nu))
            self._dirty = True
            return self._root_alias(len(self._curves) - 1)
        comp = self.model.ensure_chain(nu.chain)
        self._dirty = True
        return comp

    def _root_alias(self, k):
        while k in self._alias:
            k = self._alias[k]
        return -1 - k

    def node(self, nu):
        n = self.add(nu)
        self.resolve()
        if n < 0:
            return self._root_alias(-1 - n)
        return n

    def resolve(self):
        while self._dirty:
            self._dirty = False
            seen = {}
            for k, (lift, _) in enumerate(self._curves):
                if k in self._alias:
                    continue
                p = lift.advance(self.model)
                if p.other is not None or not lift.is_curvette(self.model):
                    self._blow(p)
                    break
                j = seen.get(p.key)
                if j is not None:
                    if self._same(j, k, len(lift.path)):
                        self._alias[k] = j
                        self._dirty = True
                        break
                    self._blow(p)
                    break
                seen[p.key] = k

    def _same(self, j, k, depth):
        if depth < self.EQUALITY_DEPTH:
            return False
        c1, c2 = self._curves[j][0].curve, self._curves[k][0].curve
        r = _branch_test(c1, c2)
        if r is True or r is False:
            return r
        alpha = self.model.component(self._curves[k][0].key[0]).alpha
        return alpha * c1.multiplicity * c2.multiplicity > r

    def _blow(self, p):
        self.model._blowup(p)
        self._dirty = True

    # vertex data

    def anchor(self, node):
        """The component a curve leaf hangs from (the node itself for components)."""
        if node >= 0:
            return node
        lift = self._curves[-1 - node][0]
        return lift.key[0]

    def alpha(self, node):
        return INF if node < 0 else self.model.component(node).alpha

    def ancestors(self, node):
        self.resolve()
        if node < 0:
            return [node] + self.model.ancestors(self.anchor(node))
        return self.model.ancestors(node)

    def leq(self, a, b):
        return a in self.ancestors(b)

    def meet(self, a, b):
        if a == b:
            return a
        seen = set(self.ancestors(a))
        for e in self.ancestors(b):
            if e in seen:
                return e
        raise InvariantViolation("valuations have no common lower bound")

    def edge_mult(self, node):
        """Multiplicity of valuations on the half-open edge below ``node``."""
        if node < 0:
            return self.model.component(self.anchor(node)).b
        return self.model.component(node).mult

    def parent(self, node):
        if node < 0:
            return self.anchor(node)
        return self.model.tree_parent(node)

    def valuation(self, node):
        if node < 0:
            return self._curves[-1 - node][1]
        return Valuation("divisorial", self.model.component(node).chain)

    def point_on_path(self, node, t):
        """Component at skewness ``t`` on the segment from the root to ``node``."""
        t = to_fraction(t)
        if t < 1 or t > self.alpha(node):
            raise DomainError(f"skewness {fmt(t)} is outside the segment")
        while True:
            self.resolve()
            if node < 0:
                k = -1 - node
                lift = self._curves[k][0]
                if self.alpha(self.anchor(node)) < t:
                    self._blow(lift.advance(self.model))
                    continue
            path = self.model.ancestors(self.anchor(node))[::-1]
            for low, high in zip(path, path[1:]):
                if self.alpha(low) < t <= self.alpha(high):
                    break
            else:
                return path[0]
            if self.alpha(high) == t:
                return high
            self._blow(self.model.satellite(low, high))


def _context(*vals):
    ctx = TreeContext(vals)
    return ctx, [ctx.node(v) for v in vals]


def leq(nu, mu):
    """Tree order: ``nu <= mu`` iff ``nu(phi) <= mu(phi)`` for every germ."""
    if nu.is_root:
        return True
    ctx, (a, b) = _context(nu, mu)
    return ctx.leq(a, b)


def meet(nu, mu):
    ctx, (a, b) = _context(nu, mu)
    return ctx.valuation(ctx.meet(a, b))


def intersect(nu, mu):
    """Intersection product: skewness of the meet (``INF`` for equal curves)."""
    ctx, (a, b) = _context(nu, mu)
    return ctx.alpha(ctx.meet(a, b))


def segment_point(nu, t):
    """The divisorial valuation of skewness ``t`` on the segment below ``nu``."""
    ctx, (a,) = _context(nu)
    return ctx.valuation(ctx.point_on_path(a, t))


def equal(nu, mu):
    if nu.kind != mu.kind:
        return False
    if nu.kind == "curve":
        return same_branch(nu.curve, mu.curve)
    return nu.chain == mu.chain


# pushforward


def _curvette(chain, theta):
    import flint

    s = flint.fmpq_poly([0, 1])
    t = flint.fmpq_poly([0, theta])
    for c in reversed(chain):
        if c is INF:
            s, t = s * t, s
        else:
            s, t = s, s * (t + flint.fmpq(c.numerator, c.denominator))
    return _branch_from_polys(s, t)


def _branch_from_polys(xp, yp):
    coeffs = [[Fraction(int(c.p), int(c.q)) for c in p.coeffs()] for p in (xp, yp)]
    g = 0
    for cs in coeffs:
        for k, c in enumerate(cs):
            if c:
                g = gcd(g, k)
    if g == 0:
        raise DomainError("the map contracts the branch to the origin")
    return BranchCurve(*(tuple(cs[::g]) for cs in coeffs))


def _image_curve(f, c):
    f1, f2 = f
    return _branch_from_polys(
        f1.eval_poly(c.x_poly, c.y_poly), f2.eval_poly(c.x_poly, c.y_poly)
    )


_PROBES = ("x", "y", "x + y", "x - 2*y", "y^2 - x^3", "x^2 - y^3", "y^2 + x^2*y - x^5")


def pushforward(f, nu):
    """Push ``nu`` forward by the map germ ``f = (f1, f2)``.

    Returns ``(c, mu)`` with ``c = nu(f1) min nu(f2)`` and ``mu`` the
    normalized image, so that ``nu(phi o f) = c * mu(phi)``.
    """
    f1, f2 = (_as_germ(g) for g in f)
    for g in (f1, f2):
        if g.is_zero() or g.is_unit():
            raise DomainError("map components must vanish at the origin")
    jac = _partial(f1, 0) * _partial(f2, 1) - _partial(f1, 1) * _partial(f2, 0)
    if jac.is_zero():
        raise DomainError("the map has identically vanishing Jacobian")
    c = min(evaluate(nu, f1), evaluate(nu, f2))
    if c is INF:
        raise DomainError("the map contracts the branch to the origin")
    if nu.kind == "curve":
        return c, curve(_image_curve((f1, f2), nu.curve))
    if nu.weights is not None and len(f1.terms) == 1 and len(f2.terms) == 1:
        (a, b), = f1.terms
        (p, q), = f2.terms
        wx, wy = nu.weights
        return c, monomial((a * wx + b * wy) / c, (p * wx + q * wy) / c)
    probes = [_as_germ(p) for p in _PROBES]
    targets = [evaluate(nu, p.compose(f1, f2)) for p in probes]
    images = []
    for theta in range(1, 13):
        images.append(curve(_image_curve((f1, f2), _curvette(nu.chain, theta))))
        if len(images) < 3:
            continue
        ctx = TreeContext(images)
        nodes = [ctx.node(v) for v in images]
        low = nodes[0]
        for n in nodes[1:]:
            low = ctx.meet(low, n)
        mu = ctx.valuation(low)
        if mu.kind != "curve" and all(c * evaluate(mu, p) == v for p, v in zip(probes, targets)):
            return c, mu
    raise InvariantViolation("could not identify the pushforward valuation")
