"""Finite subtrees, tree potentials, atomic measures and the Laplacian."""

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd

from .branch import BranchCurve, branch_eval_order
from .errors import DomainError, InvariantViolation
from .germ import Germ, _as_germ
from .intersection import intersection_multiplicity
from .model import lelong_at_point
from .rational import INF, to_fraction
from .valuation import TreeContext, curve, equal


class FiniteSubtree:
    """A finite rooted subtree spanned by vertices of a ``TreeContext``.

    Vertex 0 is the multiplicity valuation.  Along every edge the generic
    multiplicity is constant; it is stored on the upper endpoint.
    """

    def __init__(self, ctx, nodes):
        self.ctx = ctx
        ctx.resolve()
        nodes = set(nodes) | {0}
        for n in list(nodes):
            nodes.update(_jumps(ctx, n))
        order = sorted(nodes, key=lambda n: (len(ctx.ancestors(n)), n))
        self.nodes = order
        self.index = {n: i for i, n in enumerate(order)}
        self.parent = [None]
        for n in order[1:]:
            up = next(a for a in ctx.ancestors(n)[1:] if a in self.index)
            self.parent.append(self.index[up])
        self.children = [[] for _ in order]
        for i, p in enumerate(self.parent):
            if p is not None:
                self.children[p].append(i)
        self.alpha = [ctx.alpha(n) for n in order]
        self.mult = [None] + [ctx.edge_mult(n) for n in order[1:]]
        self.valuations = [ctx.valuation(n) for n in order]

    def __len__(self):
        return len(self.nodes)

    def is_curve(self, i):
        return self.nodes[i] < 0

    def find(self, nu):
        """Index of the vertex equal to ``nu`` (or ``None``)."""
        n = self.ctx.node(nu)
        return self.index.get(n)

    def edges(self):
        return [(p, i) for i, p in enumerate(self.parent) if p is not None]

    def ends(self):
        return [i for i in range(len(self)) if not self.children[i]]


def _jumps(ctx, n):
    """Components below ``n`` where the generic multiplicity changes."""
    path = ctx.ancestors(n)[::-1]
    out = []
    for low, mid, high in zip(path, path[1:], path[2:]):
        if ctx.edge_mult(mid) != ctx.edge_mult(high):
            out.append(mid)
    return out


def _meet_closure(ctx, nodes):
    nodes = list(dict.fromkeys(nodes))
    out = set(nodes)
    for i, a in enumerate(nodes):
        for b in nodes[i + 1 :]:
            out.add(ctx.meet(a, b))
    return out


def span(valuations, ctx=None):
    """Smallest subtree containing the root and the given valuations."""
    ctx = ctx or TreeContext(valuations)
    nodes = [ctx.node(v) for v in valuations]
    return FiniteSubtree(ctx, _meet_closure(ctx, nodes))


@dataclass
class TreeMeasure:
    """Finite positive atomic measure; atoms are ``(valuation, mass)`` pairs."""

    atoms: list = field(default_factory=list)

    def __post_init__(self):
        merged = []
        for v, m in self.atoms:
            m = to_fraction(m)
            if m < 0:
                raise DomainError("measures must be positive")
            if m == 0:
                continue
            for k, (w, n) in enumerate(merged):
                if equal(v, w):
                    merged[k] = (w, n + m)
                    break
            else:
                merged.append((v, m))
        self.atoms = merged

    @property
    def mass(self):
        return sum((m for _, m in self.atoms), Fraction(0))

    def restrict(self, keep):
        return TreeMeasure([(v, m) for v, m in self.atoms if keep(v, m)])

    def same_as(self, other):
        if len(self.atoms) != len(other.atoms):
            return False
        for v, m in self.atoms:
            if not any(equal(v, w) and m == n for w, n in other.atoms):
                return False
        return True


def potential_of_measure(rho, nu, ctx=None):
    """``g(nu) = sum of mass * alpha(atom meet nu)``."""
    ctx = ctx or TreeContext([v for v, _ in rho.atoms] + [nu])
    n = ctx.node(nu)
    total = Fraction(0)
    for v, m in rho.atoms:
        total = total + m * ctx.alpha(ctx.meet(ctx.node(v), n))
    return total


@dataclass
class TreePotential:
    """Values at the vertices of a subtree plus the slopes on infinite edges."""

    tree: FiniteSubtree
    values: list
    tails: dict = field(default_factory=dict)

    def slope(self, i):
        if self.tree.is_curve(i):
            return self.tails[i]
        p = self.tree.parent[i]
        return (self.values[i] - self.values[p]) / (self.tree.alpha[i] - self.tree.alpha[p])

    def __call__(self, nu):
        """Value at an arbitrary valuation, through its retraction onto the subtree."""
        t = self.tree
        ctx = t.ctx
        n = ctx.node(nu)
        if n in t.index:
            return self.values[t.index[n]]
        best = max((ctx.meet(n, v) for v in t.nodes), key=ctx.alpha)
        if best in t.index:
            return self.values[t.index[best]]
        above = [i for i, v in enumerate(t.nodes) if ctx.leq(best, v)]
        i = min(above, key=lambda k: t.alpha[k])
        p = t.parent[i]
        return self.values[p] + self.slope(i) * (ctx.alpha(best) - t.alpha[p])

    def laplacian(self):
        """Atomic measure whose potential this is; checks positivity and concavity."""
        t = self.tree
        atoms = []
        for i in range(len(t)):
            out = sum((self.slope(c) for c in t.children[i]), Fraction(0))
            for c in t.children[i]:
                s = self.slope(c)
                if s < 0:
                    raise DomainError("potential decreases along an edge")
                if i != 0 and s > self.slope(i):
                    raise DomainError("potential is not concave along a segment")
            incoming = self.values[0] if i == 0 else self.slope(i)
            mass = incoming - out
            if mass < 0:
                raise DomainError("potential has negative Laplacian")
            if mass:
                atoms.append((t.valuations[i], mass))
        if self.values[0] < 0:
            raise DomainError("potential is negative at the root")
        return TreeMeasure(atoms)


def potential_from_measure(rho):
    """The potential of ``rho`` on the span of its atoms."""
    vals = [v for v, _ in rho.atoms]
    ctx = TreeContext(vals)
    tree = span(vals, ctx)
    values = []
    for n in tree.nodes:
        total = Fraction(0)
        for v, m in rho.atoms:
            total = total + m * ctx.alpha(ctx.meet(ctx.node(v), n))
        values.append(total)
    tails = {}
    # probes refine the model, so they run in a separate context
    probe = TreeContext(vals)
    for i, n in enumerate(tree.nodes):
        if n < 0:
            p = tree.parent[i]
            q = probe.point_on_path(probe.node(tree.valuations[i]), tree.alpha[p] + 1)
            g = sum((m * probe.alpha(probe.meet(probe.node(v), q)) for v, m in rho.atoms), Fraction(0))
            tails[i] = g - values[p]
    return TreePotential(tree, values, tails)


def laplacian(potential):
    return potential.laplacian()


def measure_intersection(rho, sigma):
    """``sum over atom pairs of mass * mass * alpha(meet)`` (``INF`` on a shared curve)."""
    vals = [v for v, _ in rho.atoms] + [v for v, _ in sigma.atoms]
    ctx = TreeContext(vals)
    total = Fraction(0)
    for v, m in rho.atoms:
        for w, n in sigma.atoms:
            total = total + m * n * ctx.alpha(ctx.meet(ctx.node(v), ctx.node(w)))
    return total


# ideals


@dataclass(frozen=True)
class Generator:
    """A generator together with its branches and their exponents."""

    germ: Germ
    branches: tuple


def _ext_gcd(a, b):
    if b == 0:
        return a, 1, 0
    g, x, y = _ext_gcd(b, a % b)
    return g, y, x - (a // b) * y


def _rational_root(value, d):
    """The positive rational ``r`` with ``r**d == value``, or ``None``."""
    if value <= 0:
        return None
    out = []
    for n in (value.numerator, value.denominator):
        r = round(n ** (1.0 / d))
        for cand in (r - 1, r, r + 1):
            if cand >= 0 and cand**d == n:
                out.append(cand)
                break
        else:
            return None
    return Fraction(out[0], out[1])


def _binomial_branch(r, p, q):
    """Parametrization of ``y^q = r*x^p`` with ``gcd(p, q) = 1``."""
    _, u, v = _ext_gcd(q, p)
    # q*u + p*v = 1, so x = r^(-v) t^q, y = r^u t^p
    x = [Fraction(0)] * q + [r ** (-v)]
    y = [Fraction(0)] * p + [r**u]
    return BranchCurve(tuple(x), tuple(y))


def decompose(psi):
    """Branches (with exponents) of a monomial or binomial germ."""
    psi = _as_germ(psi)
    terms = psi.terms
    if psi.is_zero() or psi.is_unit():
        raise DomainError("generators must vanish at the origin")
    i0 = min(i for i, _ in terms)
    j0 = min(j for _, j in terms)
    out = []
    if i0:
        out.append((BranchCurve((), (0, 1)), i0))
    if j0:
        out.append((BranchCurve((0, 1), ()), j0))
    rest = {(i - i0, j - j0): c for (i, j), c in terms.items()}
    if len(rest) == 1:
        return tuple(out)
    if len(rest) > 2 or (0, 0) in rest:
        if (0, 0) in rest and len(rest) == 2:
            return tuple(out)
        raise DomainError("missing branch data for a non-monomial generator")
    (k1, a), (k2, b) = sorted(rest.items())
    # k1 = (0, q), k2 = (p, 0): a*y^q + b*x^p
    q, p = k1[1], k2[0]
    if k1[0] or k2[1]:
        raise DomainError("missing branch data for a non-monomial generator")
    d = gcd(p, q)
    target = -b / a
    if d == 1:
        roots = [target]
    elif d == 2:
        r = _rational_root(target, 2)
        if r is None:
            raise DomainError("binomial has branches with irrational coefficients")
        roots = [r, -r]
    else:
        raise DomainError("binomial has branches with irrational coefficients")
    for r in roots:
        out.append((_binomial_branch(r, p // d, q // d), 1))
    return tuple(out)


def check_branches(psi, branches):
    """Desk-scale consistency check of user-supplied branch data."""
    psi = _as_germ(psi)
    for c, e in branches:
        if e < 1:
            raise DomainError("branch exponents must be positive")
        if branch_eval_order(c, psi) is not INF:
            raise DomainError(f"branch {c} does not lie on {psi}")
    if psi.mult() != sum(e * c.multiplicity for c, e in branches):
        raise DomainError(f"branch multiplicities do not add up to mult({psi})")
    for probe in ("y - 2*x", "x - 3*y", "y - x^2 - 5*x", "x - y^2 + 7*y"):
        lhs = intersection_multiplicity(psi, probe)
        rhs = sum(e * branch_eval_order(c, probe) for c, e in branches)
        if lhs != rhs:
            raise DomainError(f"branch data for {psi} fails the intersection check")


def make_generator(psi, branches=None):
    psi = _as_germ(psi)
    if branches is None:
        branches = decompose(psi)
    else:
        branches = tuple((c, int(e)) for c, e in branches)
        check_branches(psi, branches)
    return Generator(psi, tuple(branches))


@dataclass
class Ideal:
    generators: list

    def __post_init__(self):
        if not self.generators:
            raise DomainError("an ideal needs at least one generator")
        self.generators = [
            g if isinstance(g, Generator) else make_generator(g) for g in self.generators
        ]

    @property
    def germs(self):
        return [g.germ for g in self.generators]

    def mult(self):
        return min(g.germ.mult() for g in self.generators)

    def __mul__(self, other):
        return Ideal([
            Generator(a.germ * b.germ, a.branches + b.branches)
            for a in self.generators
            for b in other.generators
        ])

    def __add__(self, other):
        return Ideal(list(self.generators) + list(other.generators))


def _envelope_breaks(lines, lo, hi):
    """Interior breakpoints of the lower envelope of ``v + s*(t - lo)`` on ``(lo, hi)``."""
    cur = min(range(len(lines)), key=lambda j: (lines[j][0], lines[j][1]))
    t0 = lo
    out = []
    while True:
        v0 = lines[cur][0] + lines[cur][1] * (t0 - lo)
        best = None
        for j, (v, s) in enumerate(lines):
            if s < lines[cur][1]:
                vj = v + s * (t0 - lo)
                # crossing where v0 + s_cur*u = vj + s*u
                u = (vj - v0) / (lines[cur][1] - s)
                if u > 0 and (best is None or (u, s) < best[:2]):
                    best = (u, s, j)
        if best is None:
            return out
        t = t0 + best[0]
        if t >= hi:
            return out
        out.append(t)
        t0, cur = t, best[2]


def tree_transform_ideal(ideal):
    """Potential ``g(nu) = min over generators of nu(generator)`` on its support tree."""
    if not isinstance(ideal, Ideal):
        ideal = Ideal(list(ideal))
    branch_vals = []
    for g in ideal.generators:
        for c, _ in g.branches:
            branch_vals.append(curve(c))
    ctx = TreeContext(branch_vals)
    gens = []
    for g in ideal.generators:
        gens.append([(ctx.node(curve(c)), e * c.multiplicity) for c, e in g.branches])

    def gen_value(j, n):
        total = Fraction(0)
        for b, w in gens[j]:
            total = total + w * ctx.alpha(ctx.meet(b, n))
        return total

    def gen_slope(j, n):
        return sum(w for b, w in gens[j] if ctx.leq(n, b))

    tree = span(branch_vals, ctx)
    extra = []
    for p, i in tree.edges():
        lo, hi = tree.alpha[p], tree.alpha[i]
        lines = [(gen_value(j, tree.nodes[p]), gen_slope(j, tree.nodes[i])) for j in range(len(gens))]
        for t in _envelope_breaks(lines, lo, hi):
            extra.append((tree.nodes[i], t))
    new_nodes = [ctx.point_on_path(n, t) for n, t in extra]
    tree = FiniteSubtree(ctx, list(tree.nodes) + new_nodes)
    values = [min(gen_value(j, n) for j in range(len(gens))) for n in tree.nodes]
    tails = {}
    for i, n in enumerate(tree.nodes):
        if n < 0:
            p = tree.nodes[tree.parent[i]]
            lines = [(gen_value(j, p), gen_slope(j, n)) for j in range(len(gens))]
            v, s = min(lines)
            tails[i] = s
            values[i] = INF if s > 0 else v
    return TreePotential(tree, values, tails)


def ideal_measure(ideal):
    return tree_transform_ideal(ideal).laplacian()


def same_tree_transform(i1, i2):
    """Decide ``g_I == g_J`` by comparing the tree measures."""
    g1, g2 = tree_transform_ideal(i1), tree_transform_ideal(i2)
    same = g1.laplacian().same_as(g2.laplacian())
    if same:
        for v in g1.tree.valuations + g2.tree.valuations:
            if v.kind != "curve" and g1(v) != g2(v):
                raise InvariantViolation("equal measures with different potentials")
    return same


def lelong_counterexample(i1, i2, models, tangents=(0, 1, -1, 2, INF)):
    """First ``(model, point)`` where the two ideals have different Lelong numbers.

    Points are the crossings and a few free points of every component; ``None``
    when the sample finds no difference.
    """
    d1 = [(1, g) for g in _as_ideal(i1).germs]
    d2 = [(1, g) for g in _as_ideal(i2).germs]
    for m in models:
        points = [m.satellite(a, b) for a, b in m.edges()]
        for e in range(len(m)):
            points += [m.point(e, c) for c in tangents]
        for p in points:
            if lelong_at_point(m, d1, p) != lelong_at_point(m, d2, p):
                return m, p
    return None


def _as_ideal(ideal):
    return ideal if isinstance(ideal, Ideal) else Ideal(list(ideal))
