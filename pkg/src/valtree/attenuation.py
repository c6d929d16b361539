"""Certified attenuation of Lelong numbers for currents of integration.

A current is a finite positive combination of branches.  After splitting off
the branches whose coefficient is at least ``eps``, a blowup model is built
from the threshold subtree of the remaining measure so that, at every point
of the exceptional divisor, the measure of the region above that point
divided by the point's ``b`` is at most ``eps``.  That quotient bounds the
Lelong number of the strict transform there; the exact value is reported
next to it.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .branch import BranchCurve
from .errors import DomainError, InvariantViolation
from .model import ORIGIN, CurveLift, Model
from .rational import to_fraction
from .tree import FiniteSubtree, TreeMeasure, span
from .valuation import TreeContext, curve, divisorial_chain, same_branch


@dataclass
class CurrentData:
    """Positive combination ``sum lam_i [C_i]`` of distinct branches."""

    branches: list

    def __post_init__(self):
        merged = []
        for c, lam in self.branches:
            if not isinstance(c, BranchCurve):
                raise DomainError("current components must be parametrized branches")
            lam = to_fraction(lam)
            if lam <= 0:
                raise DomainError("current coefficients must be positive")
            for k, (d, mu) in enumerate(merged):
                if same_branch(c, d):
                    merged[k] = (d, mu + lam)
                    break
            else:
                merged.append((c, lam))
        if not merged:
            raise DomainError("a current needs at least one branch")
        self.branches = merged

    def measure(self):
        return TreeMeasure([(curve(c), lam * c.multiplicity) for c, lam in self.branches])

    @property
    def mass(self):
        return sum((lam * c.multiplicity for c, lam in self.branches), Fraction(0))


def center(model, nu):
    """Point of the exceptional divisor where ``nu`` is centered, ``None`` for a component."""
    if nu.kind == "curve":
        return CurveLift(nu.curve).advance(model)
    comp = model.blown_at(ORIGIN)
    if comp is None:
        raise DomainError("empty model")
    for c in nu.chain:
        nxt = model.blown_at((comp, c))
        if nxt is None:
            return model.point(comp, c)
        comp = nxt
    return None


def region_mass(model, rho, point):
    """Mass of the valuations whose center on ``model`` is ``point``."""
    return sum((m for v, m in rho.atoms if center(model, v) == point), Fraction(0))


def region_mass_by_tree(model, rho, point):
    """Same quantity from the tree description of the region above ``point``."""
    vals = [v for v, _ in rho.atoms]
    ctx = TreeContext(vals)
    here = ctx.node(divisorial_chain(model.point_chain(point)))
    total = Fraction(0)
    if point.other is None:
        low = ctx.node(divisorial_chain(model.component(point.component).chain))
        for v, m in rho.atoms:
            if ctx.alpha(ctx.meet(ctx.node(v), here)) > ctx.alpha(low):
                total += m
        return total
    e1 = ctx.node(divisorial_chain(model.component(point.component).chain))
    e2 = ctx.node(divisorial_chain(model.component(point.other).chain))
    low, high = (e1, e2) if ctx.alpha(e1) < ctx.alpha(e2) else (e2, e1)
    for v, m in rho.atoms:
        a = ctx.alpha(ctx.meet(ctx.node(v), high))
        if ctx.alpha(low) < a < ctx.alpha(high):
            total += m
    return total


def threshold_subtree(rho, eps):
    """Valuations ``nu`` with ``rho{mu >= nu} >= eps * m(nu)``."""
    eps = to_fraction(eps)
    if eps <= 0:
        raise DomainError("epsilon must be positive")
    for v, m in rho.atoms:
        if v.kind == "curve" and m >= eps * v.curve.multiplicity:
            raise DomainError("a curve atom carries Lelong mass at least epsilon")
    vals = [v for v, _ in rho.atoms]
    ctx = TreeContext(vals)
    tree = span(vals, ctx)
    above = [Fraction(0)] * len(tree)
    for v, m in rho.atoms:
        above[tree.find(v)] += m
    for i in sorted(range(len(tree)), key=lambda k: -len(ctx.ancestors(tree.nodes[k]))):
        p = tree.parent[i]
        if p is not None:
            above[p] += above[i]
    keep = [tree.nodes[i] for i in range(1, len(tree)) if above[i] >= eps * tree.mult[i]]
    return FiniteSubtree(ctx, keep)


def _enforce_pairs(model, bound):
    """Blow up crossings ``E, E'`` with ``b + b' <= bound`` until none is left."""
    while True:
        bad = []
        for a, b in model.edges():
            s = model.component(a).b + model.component(b).b
            if s <= bound:
                bad.append((s, a, b))
        if not bad:
            return
        _, a, b = min(bad)
        model._blowup(model.satellite(a, b))


def build_modification(rho, eps):
    """Blowup model whose regions all carry at most ``eps`` times their ``b``."""
    eps = to_fraction(eps)
    tree = threshold_subtree(rho, eps)
    model = Model()
    model._blowup(None)
    for i in tree.ends():
        nu = tree.valuations[i]
        model.ensure_chain(nu.chain)
    _enforce_pairs(model, rho.mass / eps)
    certify_modification(model, tree, rho.mass, eps)
    return model, tree


def certify_modification(model, tree, mass, eps):
    for i in tree.ends():
        nu = tree.valuations[i]
        if center(model, nu) is not None:
            raise InvariantViolation("an end of the threshold tree is not a component")
    for a, b in model.edges():
        if model.component(a).b + model.component(b).b <= mass / eps:
            raise InvariantViolation("adjacent components with small b remain")


@dataclass
class Region:
    point: object
    region_mass: Fraction
    b: int
    bound: Fraction
    exact: Fraction


@dataclass
class AttenuationReport:
    epsilon: Fraction
    eta: Fraction
    model: Model
    regions: list
    divisorial_part: dict
    split_off: list
    mass: Fraction
    sums: dict = field(default_factory=dict)


def _resolve_split(model, curves):
    """Blow up until the split-off branches are separated curvettes at free points."""
    lifts = [CurveLift(c) for c in curves]
    while True:
        seen = set()
        for lift in lifts:
            p = lift.advance(model)
            if p.other is not None or not lift.is_curvette(model) or p.key in seen:
                model._blowup(p)
                break
            seen.add(p.key)
        else:
            return


def attenuate(current, eps, eta):
    """Attenuation report for ``current`` at level ``eps`` with exponent ``eta``."""
    eps, eta = to_fraction(eps), to_fraction(eta)
    if eps <= 0 or eta <= 0:
        raise DomainError("epsilon and eta must be positive")
    if not isinstance(current, CurrentData):
        current = CurrentData(list(current))
    big = [(c, lam) for c, lam in current.branches if lam >= eps]
    rest = [(c, lam) for c, lam in current.branches if lam < eps]
    rho = CurrentData(rest).measure() if rest else TreeMeasure([])
    if rest:
        model, _ = build_modification(rho, eps)
    else:
        model = Model()
        model._blowup(None)
    _resolve_split(model, [c for c, _ in big])
    if rest:
        _enforce_pairs(model, rho.mass / eps)
    regions = {}
    for c, lam in rest:
        lift = CurveLift(c)
        p = lift.advance(model)
        reg = regions.setdefault(p, [Fraction(0), Fraction(0)])
        reg[0] += lam * c.multiplicity
        reg[1] += lam * lift.multiplicity(model)
    out = []
    for p in sorted(regions, key=lambda q: (q.component, q.other is not None, str(q))):
        mass, exact = regions[p]
        if mass != region_mass(model, rho, p):
            raise InvariantViolation("region mass disagrees with the center computation")
        b = model.point_numbers(p)[1]
        bound = mass / b
        if exact > bound:
            raise InvariantViolation(f"strict transform Lelong number exceeds its bound at {p}")
        out.append(Region(p, mass, b, bound, exact))
    divisorial_part = _divisorial_part(model, current)
    report = AttenuationReport(eps, eta, model, out, divisorial_part, big, current.mass)
    report.sums = _sums(report, rho.mass)
    return report


def _divisorial_part(model, current):
    comps = [divisorial_chain(c.chain) for c in model.components]
    curves = [curve(c) for c, _ in current.branches]
    ctx = TreeContext(comps + curves)
    out = {}
    for e, nu in zip(model.components, comps):
        n = ctx.node(nu)
        total = Fraction(0)
        for (c, lam), cv in zip(current.branches, curves):
            total += lam * e.b * c.multiplicity * ctx.alpha(ctx.meet(n, ctx.node(cv)))
        out[e.id] = total
    return out


def _sums(report, rest_mass):
    eps, eta = report.epsilon, report.eta
    bounds = [r.bound for r in report.regions]
    sums = {
        "sum_bound": sum(bounds, Fraction(0)),
        "sum_exact": sum((r.exact for r in report.regions), Fraction(0)),
        "sup_bound": max(bounds, default=Fraction(0)),
        "mass": rest_mass,
    }
    if sums["sup_bound"] > eps:
        raise InvariantViolation("a region bound exceeds epsilon")
    if sums["sum_exact"] > rest_mass or sums["sum_bound"] > rest_mass:
        raise InvariantViolation("region sums exceed the total mass")
    if eta.denominator == 1:
        k = int(eta)
        sums["sum_bound_pow"] = sum((b ** (1 + k) for b in bounds), Fraction(0))
        sums["pow_limit"] = eps**k * rest_mass
        if sums["sum_bound_pow"] > sums["pow_limit"]:
            raise InvariantViolation("power sum of bounds exceeds its limit")
    return sums
