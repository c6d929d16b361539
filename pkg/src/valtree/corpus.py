"""Seeded generators for branches, models, measures, ideals and currents."""

from fractions import Fraction

from .branch import BranchCurve, implicitize
from .errors import DomainError
from .germ import Germ
from .model import Model
from .rational import INF
from .tree import Generator, Ideal, TreeMeasure, make_generator
from .valuation import curve, divisorial_chain

TANGENTS = (Fraction(0), Fraction(1), Fraction(-1), Fraction(2), Fraction(1, 2), Fraction(-3), INF)


def _coef(rng):
    c = rng.choice((1, 1, 1, -1, 2, -2, 3, Fraction(1, 2), Fraction(-2, 3)))
    return Fraction(c)


def _candidate(rng, max_degree):
    if rng.random() < 0.35:
        n = rng.randint(1, max_degree)
        y = [Fraction(0)] * (n + 1)
        for k in rng.sample(range(1, n + 1), min(n, rng.randint(1, 3))):
            y[k] = _coef(rng)
        x = [Fraction(0), Fraction(1)]
    else:
        p = rng.choice((2, 2, 3, 3, 4))
        exps = sorted(rng.sample(range(p + 1, max_degree + 1), rng.randint(1, min(3, max_degree - p))))
        from math import gcd

        g = p
        for e in exps:
            g = gcd(g, e)
        if g != 1:
            extra = [e for e in range(exps[-1] + 1, max_degree + 1) if gcd(g, e) == 1]
            if not extra:
                return None
            exps.append(extra[0])
        y = [Fraction(0)] * (exps[-1] + 1)
        for e in exps:
            y[e] = _coef(rng)
        x = [Fraction(0)] * p + [Fraction(1)]
        if rng.random() < 0.4:
            k = rng.randint(p + 1, max_degree)
            x = x + [Fraction(0)] * (k + 1 - len(x))
            x[k] = _coef(rng)
    r = rng.random()
    if r < 0.3:
        x, y = y, x
    elif r < 0.5:
        a = _coef(rng)
        n = max(len(x), len(y))
        x = [(x[k] if k < len(x) else 0) for k in range(n)]
        y = [(y[k] if k < len(y) else 0) + a * x[k] for k in range(n)]
    return x, y


def random_branch(rng, max_degree=8):
    """A primitive branch of t-degree at most ``max_degree`` with a local equation."""
    while True:
        cand = _candidate(rng, max_degree)
        if cand is None:
            continue
        try:
            c = BranchCurve(tuple(cand[0]), tuple(cand[1]))
            implicitize(c)
        except DomainError:
            continue
        return c


def perturb(rng, c, max_degree=8):
    """A branch sharing a long initial segment of its expansion with ``c``."""
    while True:
        k = rng.randint(max(1, c.degree() - 2), max_degree)
        y = list(c.y) + [Fraction(0)] * (k + 1 - len(c.y))
        y[k] += _coef(rng)
        try:
            d = BranchCurve(c.x, tuple(y))
            implicitize(d)
        except DomainError:
            continue
        return d


def random_model(rng, length):
    """Random sequence of ``length`` blowups: free points and crossings."""
    m = Model()
    m._blowup(None)
    while len(m) < length:
        if m.edges() and rng.random() < 0.45:
            a, b = rng.choice(m.edges())
            m._blowup(m.satellite(a, b))
            continue
        e = rng.randrange(len(m))
        free = [c for c in TANGENTS if c not in m.positions(e)]
        m._blowup(m.point(e, rng.choice(free)))
    return m


def random_chain(rng, max_len=5):
    return tuple(rng.choice(TANGENTS) for _ in range(rng.randint(0, max_len)))


def random_measure(rng, max_atoms=8):
    atoms = []
    for _ in range(rng.randint(1, max_atoms)):
        if rng.random() < 0.5:
            v = divisorial_chain(random_chain(rng))
        else:
            v = curve(random_branch(rng, 6))
        atoms.append((v, Fraction(rng.randint(1, 9), rng.randint(1, 4))))
    return TreeMeasure(atoms)


def branch_product(rng, max_factors=2):
    """A germ built from known branches, with its factorization."""
    factors = []
    for _ in range(rng.randint(1, max_factors)):
        c = random_branch(rng, 5)
        factors.append((c, rng.randint(1, 2)))
    g = Germ.const(1)
    for c, e in factors:
        g = g * implicitize(c) ** e
    return g, factors


def random_ideal(rng):
    """An m-primary ideal: monomial, binomial or with annotated branches."""
    kind = rng.randrange(3)
    a, b = rng.randint(1, 4), rng.randint(1, 4)
    if kind == 0:
        gens = [Germ({(a, 0): 1}), Germ({(0, b): 1})]
        if rng.random() < 0.5:
            gens.append(Germ({(rng.randint(1, a), rng.randint(1, b)): 1}))
        return Ideal(gens)
    if kind == 1:
        p, q = rng.choice(((3, 2), (2, 3), (5, 2), (3, 4), (4, 2), (2, 1), (1, 3)))
        r = rng.choice((1, -1, 2, Fraction(1, 4), 4, 9))
        binom = Germ({(0, q): 1, (p, 0): -Fraction(r) ** (1 if (p % 2 or q % 2) else 2)})
        pure = Germ({(rng.randint(1, 6), 0): 1}) if rng.random() < 0.5 else Germ({(0, rng.randint(1, 6)): 1})
        return Ideal([binom, pure])
    c = random_branch(rng, 5)
    f = implicitize(c)
    gen = Generator(f, ((c, 1),))
    pure = Germ({(rng.randint(1, 5), 0): 1}) if c.x else Germ({(0, rng.randint(1, 5)): 1})
    return Ideal([gen, make_generator(pure)])


def random_current(rng, max_branches=6):
    branches = []
    for _ in range(rng.randint(1, max_branches)):
        branches.append((random_branch(rng, 6), Fraction(rng.randint(1, 9), 10)))
    return branches
