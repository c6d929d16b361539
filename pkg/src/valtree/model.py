"""Finite sequences of point blowups above the origin.

Every exceptional component keeps the numbers ``a``, ``b`` and the skewness
``alpha`` of its divisorial valuation, plus the list of chart tangents leading
to the point whose blowup created it.  Points are addressed in the chart of
the newest component through them:

* at a point of component ``N`` with tangent ``c`` the local coordinates
  ``(s, t)`` map to the coordinates ``(z, w)`` at the center of ``N`` by
  ``z = s, w = s*(t + c)`` for finite ``c`` and ``z = s*t, w = s`` for
  ``c = INF``;
* the component blown up first has ``(z, w) = (x, y)``.

On every component the older neighbours it met at birth sit at tangents
``INF`` (the component it was blown up on) and ``0`` (the other one, for a
satellite blowup).
"""

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import flint

from .branch import BranchCurve
from .errors import DomainError, InvariantViolation
from .germ import Germ, _as_germ
from .intersection import _fraction_dict
from .rational import INF, fmt, to_fraction
from .series import NeedPrecision, RatFunc, TSeries, divide

ORIGIN = ()


@dataclass(frozen=True)
class Component:
    id: int
    a: int
    b: int
    alpha: Fraction
    mult: int
    kind: str
    chain: tuple
    zcomp: object = None
    wcomp: object = None

    @property
    def thinness(self):
        return Fraction(self.a, self.b)


@dataclass(frozen=True)
class ModelPoint:
    """A point on the exceptional divisor.

    ``component`` is the newest component through the point and ``tangent``
    its coordinate there; ``other`` is the second component at a crossing.
    """

    component: int
    tangent: object
    other: object = None

    @property
    def kind(self):
        return "free" if self.other is None else "satellite"

    @property
    def key(self):
        return (self.component, self.tangent)

    def components(self):
        if self.other is None:
            return (self.component,)
        return tuple(sorted((self.component, self.other)))

    def __str__(self):
        if self.other is None:
            return f"free(E{self.component}, {fmt(self.tangent)})"
        a, b = self.components()
        return f"satellite(E{a}, E{b})"


def normalize_tangent(c):
    if c is INF or c == "inf":
        return INF
    return to_fraction(c)


class Model:
    """A blowup model. Public operations never mutate an existing model."""

    def __init__(self):
        self._comps = []
        self._pos = {}
        self._blown = {}
        self._parent = {}
        self._adj = set()
        self._log = []

    def copy(self):
        m = Model()
        m._comps = list(self._comps)
        m._pos = {k: dict(v) for k, v in self._pos.items()}
        m._blown = dict(self._blown)
        m._parent = dict(self._parent)
        m._adj = set(self._adj)
        m._log = list(self._log)
        return m

    # queries

    @property
    def components(self):
        return tuple(self._comps)

    def component(self, i):
        try:
            return self._comps[i]
        except (IndexError, TypeError):
            raise DomainError(f"unknown component {i!r}") from None

    def __len__(self):
        return len(self._comps)

    def is_empty(self):
        return not self._comps

    @property
    def log(self):
        return tuple(self._log)

    def adjacent(self, a, b):
        return frozenset((a, b)) in self._adj

    def edges(self):
        return sorted(tuple(sorted(e)) for e in self._adj)

    def neighbours(self, e):
        return sorted(self._pos[e].values())

    def positions(self, e):
        return dict(self._pos[e])

    def tree_parent(self, e):
        return self._parent[e]

    def ancestors(self, e):
        """Components on the dual-graph path from ``e`` down to the first one."""
        out = []
        while e is not None:
            out.append(e)
            e = self._parent[e]
        return out

    def lca(self, a, b):
        seen = set(self.ancestors(a))
        for e in self.ancestors(b):
            if e in seen:
                return e
        raise InvariantViolation("dual graph is not a tree")

    def is_below(self, a, b):
        """``a`` lies on the path from the first component to ``b``."""
        return a in self.ancestors(b)

    def blown_at(self, key):
        return self._blown.get(key)

    def last(self):
        if not self._comps:
            raise DomainError("empty model")
        return len(self._comps) - 1

    # points

    def point(self, component, tangent):
        """The point of ``component`` at ``tangent``, in canonical form."""
        self.component(component)
        c = normalize_tangent(tangent)
        other = self._pos[component].get(c)
        if other is None:
            return ModelPoint(component, c)
        return self.satellite(component, other)

    def satellite(self, a, b):
        if a == b or not self.adjacent(a, b):
            raise DomainError(f"E{a} and E{b} do not meet")
        newer, older = max(a, b), min(a, b)
        for c, e in self._pos[newer].items():
            if e == older:
                return ModelPoint(newer, c, older)
        raise InvariantViolation("crossing point has no chart position")

    def free(self, component, tangent):
        p = self.point(component, tangent)
        if p.other is not None:
            raise DomainError(f"tangent {fmt(p.tangent)} on E{component} is a crossing point")
        return p

    def point_numbers(self, p):
        """``(a, b, alpha)`` of the component that blowing up ``p`` would create."""
        if p is None or p is ORIGIN:
            return 2, 1, Fraction(1)
        n = self._comps[p.component]
        if p.other is None:
            return n.a + 1, n.b, n.alpha + Fraction(1, n.b * n.b)
        o = self._comps[p.other]
        low = n if n.alpha < o.alpha else o
        b = n.b + o.b
        return n.a + o.a, b, low.alpha + Fraction(1, low.b * b)

    def point_chain(self, p):
        if p is None or p is ORIGIN:
            return ()
        return self._comps[p.component].chain + (p.tangent,)

    # blowups

    def blowup(self, point=None):
        """Return a new model with ``point`` (``None`` = origin) blown up."""
        m = self.copy()
        m._blowup(point)
        return m

    def blowup_at(self, component, tangent):
        return self.blowup(self.point(component, tangent))

    def _blowup(self, point):
        n = len(self._comps)
        if point is None or point is ORIGIN:
            if self._comps:
                raise DomainError("the origin is already blown up")
            self._comps.append(Component(0, 2, 1, Fraction(1), 1, "origin", ()))
            self._pos[0] = {}
            self._parent[0] = None
            self._blown[ORIGIN] = 0
            self._log.append(None)
            return 0
        if not isinstance(point, ModelPoint):
            raise DomainError("expected a model point")
        e = self.component(point.component)
        if point.other is None:
            if point.tangent in self._pos[e.id]:
                raise DomainError(f"{point} is not a free point")
            new = Component(
                n, e.a + 1, e.b, e.alpha + Fraction(1, e.b * e.b), e.b, "free",
                e.chain + (point.tangent,), e.id, None,
            )
            self._pos[e.id][point.tangent] = n
            self._pos[n] = {INF: e.id}
            self._parent[n] = e.id
            self._adj.add(frozenset((e.id, n)))
        else:
            canon = self.satellite(point.component, point.other)
            if canon != point:
                raise DomainError(f"{point} is not in canonical form")
            o = self._comps[point.other]
            low, up = (e, o) if e.alpha < o.alpha else (o, e)
            b = e.b + o.b
            new = Component(
                n, e.a + o.a, b, low.alpha + Fraction(1, low.b * b), up.mult,
                "satellite", e.chain + (point.tangent,), e.id, o.id,
            )
            if self._parent[up.id] != low.id:
                raise InvariantViolation("crossing components are not parent and child")
            back = next(c for c, x in self._pos[o.id].items() if x == e.id)
            self._pos[e.id][point.tangent] = n
            self._pos[o.id][back] = n
            self._pos[n] = {INF: e.id, Fraction(0): o.id}
            self._adj.discard(frozenset((e.id, o.id)))
            self._adj.add(frozenset((e.id, n)))
            self._adj.add(frozenset((o.id, n)))
            self._parent[n] = low.id
            self._parent[up.id] = n
        self._comps.append(new)
        self._blown[point.key] = n
        self._log.append(point)
        return n

    def ensure_chain(self, tangents):
        """Blow up (in place) along a tangent chain, reusing existing components."""
        if not self._comps:
            self._blowup(None)
        cur = 0
        for c in tangents:
            nxt = self._blown.get((cur, c))
            if nxt is None:
                nxt = self._blowup(self.point(cur, c))
            cur = nxt
        return cur

    @classmethod
    def from_chain(cls, tangents):
        m = cls()
        m.ensure_chain(tangents)
        return m

    def __repr__(self):
        return f"Model({len(self._comps)} components)"


def apply_path(points, model=None):
    """Replay a list of point descriptors onto a copy of ``model``."""
    m = Model() if model is None else model.copy()
    for p in points:
        m._blowup(p)
    return m


# pullbacks

_ST = flint.fmpq_mpoly_ctx.get(("s", "t"), "lex")


def _truncate(f, d):
    return _ST.from_dict({k: v for k, v in f.to_dict().items() if k[0] + k[1] <= d})


def _chart(f, c):
    s, t = _ST.gens()
    if c is INF:
        return f.compose(s * t, s)
    return f.compose(s, s * (t + flint.fmpq(c.numerator, c.denominator)))


@lru_cache(maxsize=8192)
def _pull(psi, tangents, d):
    if not tangents:
        return _truncate(psi.to_flint(_ST), d)
    return _truncate(_chart(_pull(psi, tangents[:-1], d), tangents[-1]), d)


def _min_degree(f):
    return min(int(k[0]) + int(k[1]) for k in f.to_dict())


@lru_cache(maxsize=65536)
def order_along(psi, tangents):
    """Order at the point reached by ``tangents`` of the pullback of ``psi``."""
    psi = _as_germ(psi)
    if psi.is_zero():
        raise DomainError("the zero germ has no pullback order")
    d = max(8, 2 * psi.mult())
    while True:
        f = _pull(psi, tangents, d)
        if not f.is_zero():
            return _min_degree(f)
        d *= 2


def divisor_order(model, component, psi):
    """Coefficient of ``E_component`` in the total transform of ``psi``."""
    return order_along(_as_germ(psi), model.component(component).chain)


def point_order(model, point, psi):
    """Multiplicity at ``point`` of the total transform of ``psi``."""
    return order_along(_as_germ(psi), model.point_chain(point))


def strict_point_order(model, point, psi):
    psi = _as_germ(psi)
    total = point_order(model, point, psi)
    total -= divisor_order(model, point.component, psi)
    if point.other is not None:
        total -= divisor_order(model, point.other, psi)
    return total


@dataclass(frozen=True)
class PullbackResult:
    """Exceptional exponents and the equations in the first chart of a component.

    In that chart ``x`` stands for the equation of the component and ``y`` for
    the affine coordinate along it; ``strict`` has every exceptional factor
    visible in the chart removed.
    """

    exponents: dict
    total: Germ
    strict: Germ
    component: int


def pullback(model, psi, component=None):
    """Exact pullback of ``psi`` to the first chart of ``component`` (default: last)."""
    psi = _as_germ(psi)
    if psi.is_zero():
        raise DomainError("cannot pull back the zero germ")
    e = model.last() if component is None else model.component(component).id
    exps = {c.id: divisor_order(model, c.id, psi) for c in model.components}
    f = psi.to_flint(_ST)
    for c in model.component(e).chain + (Fraction(0),):
        f = _chart(f, c)
    total = Germ(_fraction_dict(f))
    d = exps[e]
    # at a crossing the older component is the line y = 0 of this chart
    w = model.component(e).wcomp
    k = exps[w] if w is not None else 0
    strict = Germ({(i - d, j - k): v for (i, j), v in total.items()})
    return PullbackResult(exps, total, strict, e)


def lelong_at_point(model, data, point, strict=False):
    """Lelong number at ``point`` of the pullback of ``max c_i log|psi_i|``.

    ``data`` is a list of ``(c_i, psi_i)`` pairs with positive rational ``c_i``.
    """
    if not data:
        raise DomainError("log-singular data needs at least one term")
    vals = []
    for c, psi in data:
        c = to_fraction(c)
        if c <= 0:
            raise DomainError("log-singular coefficients must be positive")
        order = strict_point_order(model, point, psi) if strict else point_order(model, point, psi)
        vals.append(c * order)
    return min(vals)


# curves


class CurveLift:
    """Incremental lift of a branch through the charts of a growing model."""

    def __init__(self, curve, prec=48):
        if not isinstance(curve, BranchCurve):
            raise DomainError("expected a parametrized branch")
        self.curve = curve
        self.prec = prec
        self._reset()

    def _reset(self):
        self.key = ORIGIN
        self.path = []
        self.s = TSeries.exact_poly(self.curve.x_poly, self.prec)
        self.t = TSeries.exact_poly(self.curve.y_poly, self.prec)

    def _exact_coords(self):
        z, w = RatFunc(self.curve.x_poly), RatFunc(self.curve.y_poly)
        for c in self.path:
            if c is INF:
                z, w = w, z / w
            else:
                z, w = z, (w / z).sub_const(flint.fmpq(c.numerator, c.denominator))
        return z, w

    def _order(self, which):
        ser = self.s if which == 0 else self.t
        o = ser.order()
        if o is not None:
            return o
        if ser.poly.is_zero():
            exact = self._exact_coords()[which]
            if exact.is_zero():
                zero = TSeries.exact_poly(flint.fmpq_poly(0), self.prec)
                if which == 0:
                    self.s = zero
                else:
                    self.t = zero
                return INF
        raise NeedPrecision

    def _step(self, comp):
        oz, ow = self._order(0), self._order(1)
        z, w = self.s, self.t
        if ow > oz:
            c = Fraction(0)
        elif ow < oz:
            c = INF
        else:
            lz, lw = z.coeff(oz), w.coeff(ow)
            c = Fraction(int((lw / lz).p), int((lw / lz).q))
        if c is INF:
            self.s, self.t = w, divide(z, w, self.prec)
        else:
            q = divide(w, z, self.prec)
            self.s, self.t = z, q.sub_const(flint.fmpq(c.numerator, c.denominator)) if c else q
        self.path.append(c)
        self.key = (comp, c)

    def _bump(self):
        self.prec *= 4
        if self.prec > 1 << 16:
            raise DomainError("branch lift needs unreasonable precision")

    def _replay(self, model):
        path = list(self.path)
        while True:
            self._reset()
            try:
                for _ in path:
                    self._step(model._blown[self.key])
                return
            except NeedPrecision:
                self._bump()

    def advance(self, model):
        """Follow the branch until it reaches a point that is not blown up."""
        while True:
            comp = model._blown.get(self.key)
            if comp is None:
                return self.point(model)
            try:
                self._step(comp)
            except NeedPrecision:
                self._bump()
                self._replay(model)

    def point(self, model):
        if self.key == ORIGIN:
            raise DomainError("the origin has not been blown up")
        return model.point(*self.key)

    def orders(self, model):
        """``(ord s, ord t)`` along the branch at its current point."""
        while True:
            try:
                return self._order(0), self._order(1)
            except NeedPrecision:
                self._bump()
                self._replay(model)

    def multiplicity(self, model):
        """Multiplicity of the strict transform at its current point."""
        return min(self.orders(model))

    def is_curvette(self, model):
        """Smooth strict transform crossing the current component transversally at a free point."""
        return self.point(model).other is None and self.orders(model)[0] == 1


def strict_transform_point(model, curve):
    """Point where the strict transform of ``curve`` meets the exceptional divisor."""
    lift = CurveLift(curve)
    return lift.advance(model)


def strict_multiplicity(model, curve):
    lift = CurveLift(curve)
    lift.advance(model)
    return lift.multiplicity(model)


# output


def point_descriptor(p):
    if p is None or p is ORIGIN:
        return {"kind": "origin"}
    if p.other is None:
        return {"kind": "free", "component": p.component, "tangent": fmt(p.tangent)}
    return {"kind": "satellite", "components": list(p.components())}


def dual_graph_dot(model):
    """Deterministic DOT text for the dual graph, one labelled node per component."""
    lines = ["graph model {"]
    if model.is_empty():
        lines.append('  O [label="origin"];')
    for c in model.components:
        lines.append(f'  E{c.id} [label="E{c.id} a={c.a} b={c.b} alpha={fmt(c.alpha)}"];')
    for a, b in model.edges():
        lines.append(f"  E{a} -- E{b};")
    lines.append("}")
    return "\n".join(lines) + "\n"
