"""Acceptance checks shared by the test-suite and the ``selftest`` command.

Each check draws a seeded corpus, compares two independent computations
exactly, and returns a ``CheckResult``.
"""

import random
import time
from dataclasses import dataclass
from fractions import Fraction

from . import corpus
from .attenuation import (
    CurrentData,
    attenuate,
    certify_modification,
    region_mass,
    region_mass_by_tree,
    threshold_subtree,
)
from .branch import BranchCurve, branch_eval_order, implicitize
from .errors import ValtreeError
from .germ import Germ
from .intersection import intersection_multiplicity
from .model import CurveLift, divisor_order, strict_point_order
from .rational import INF
from .tree import (
    Ideal,
    ideal_measure,
    measure_intersection,
    potential_from_measure,
    tree_transform_ideal,
)
from .valuation import (
    TreeContext,
    curve,
    divisorial_chain,
    eval_ideal,
    evaluate,
    intersect,
    monomial,
)


@dataclass
class CheckResult:
    number: int
    name: str
    passed: bool
    detail: str
    seconds: float = 0.0

    def line(self):
        flag = "PASS" if self.passed else "FAIL"
        return f"[{flag}] {self.number}. {self.name}: {self.detail} ({self.seconds:.2f}s)"


def _run(number, name, body):
    start = time.perf_counter()
    try:
        passed, detail = body()
    except ValtreeError as exc:
        passed, detail = False, f"{type(exc).__name__}: {exc}"
    return CheckResult(number, name, passed, detail, time.perf_counter() - start)


def check_curve_intersections(n=50, seed=101, limit=10.0):
    def body():
        rng = random.Random(seed)
        pairs = []
        while len(pairs) < n:
            c = corpus.random_branch(rng)
            d = corpus.perturb(rng, c) if len(pairs) % 3 == 0 else corpus.random_branch(rng)
            pairs.append((c, d))
        start = time.perf_counter()
        bad = 0
        for c, d in pairs:
            resultant = intersection_multiplicity(implicitize(c), implicitize(d))
            tree = intersect(curve(c), curve(d))
            tree = tree if tree is INF else tree * c.multiplicity * d.multiplicity
            direct = branch_eval_order(c, implicitize(d))
            if not (resultant == tree == direct):
                bad += 1
        elapsed = time.perf_counter() - start
        ok = bad == 0 and elapsed < limit
        return ok, f"{n - bad}/{n} pairs agree, {elapsed:.2f}s (limit {limit:.0f}s)"

    return _run(1, "curve intersection identity", body)


def check_farey(n=200, seed=202, limit=10.0):
    def body():
        rng = random.Random(seed)
        start = time.perf_counter()
        bad = comps = 0
        for _ in range(n):
            m = corpus.random_model(rng, rng.randint(1, 12))
            for e in m.components:
                comps += 1
                path = m.ancestors(e.id)[::-1]
                thin = Fraction(2)
                for low, high in zip(path, path[1:]):
                    h = m.component(high)
                    thin += h.mult * (h.alpha - m.component(low).alpha)
                b_pull = min(divisor_order(m, e.id, "x"), divisor_order(m, e.id, "y"))
                if thin != e.thinness or b_pull != e.b:
                    bad += 1
            for a, b in m.edges():
                ca, cb = m.component(a), m.component(b)
                if abs(ca.alpha - cb.alpha) != Fraction(1, ca.b * cb.b):
                    bad += 1
        elapsed = time.perf_counter() - start
        ok = bad == 0 and elapsed < limit
        return ok, f"{n} sequences, {comps} components, {bad} mismatches, {elapsed:.2f}s"

    return _run(2, "Farey and thinness consistency", body)


def check_duality(models=10, germs=20, seed=303):
    def body():
        rng = random.Random(seed)
        corpus_models = [corpus.random_model(rng, rng.randint(1, 8)) for _ in range(models)]
        corpus_germs = [corpus.branch_product(rng) for _ in range(germs)]
        branches = list({c: None for _, fs in corpus_germs for c, _ in fs})
        bad = checked = 0
        for m in corpus_models:
            vals = [divisorial_chain(e.chain) for e in m.components]
            ctx = TreeContext(vals + [curve(c) for c in branches])
            for e, v in zip(m.components, vals):
                node = ctx.node(v)
                for psi, factors in corpus_germs:
                    tree = Fraction(0)
                    for c, k in factors:
                        tree += k * c.multiplicity * ctx.alpha(ctx.meet(node, ctx.node(curve(c))))
                    checked += 1
                    if divisor_order(m, e.id, psi) != e.b * tree:
                        bad += 1
            for c in branches:
                lift = CurveLift(c)
                p = lift.advance(m)
                checked += 1
                if lift.multiplicity(m) != strict_point_order(m, p, implicitize(c)):
                    bad += 1
        return bad == 0, f"{checked} identities on {models} models x {germs} germs, {bad} mismatches"

    return _run(3, "divisor/valuation duality", body)


def check_riesz(n=100, seed=404):
    def body():
        rng = random.Random(seed)
        bad = 0
        for _ in range(n):
            rho = corpus.random_measure(rng)
            if not potential_from_measure(rho).laplacian().same_as(rho):
                bad += 1
        return bad == 0, f"{n - bad}/{n} measures recovered atom for atom"

    return _run(4, "Riesz round trip", body)


def check_ideal_transforms(n=30, seed=505):
    def body():
        rng = random.Random(seed)
        bad = 0
        for _ in range(n):
            ideal = corpus.random_ideal(rng)
            g = tree_transform_ideal(ideal)
            rho = g.laplacian()
            ok = rho.mass == ideal.mult()
            ok &= all(g.slope(i).denominator == 1 for i in range(1, len(g.tree)))
            for v, mass in rho.atoms:
                if v.kind == "curve":
                    ok &= mass % v.curve.multiplicity == 0
                else:
                    ok &= mass % corpus_b(v) == 0
            for i, v in enumerate(g.tree.valuations):
                if v.kind != "curve":
                    ok &= g.values[i] == eval_ideal(v, ideal.germs)
            bad += not ok
        return bad == 0, f"{n - bad}/{n} ideals: mass, integer slopes, atom divisibility, values"

    return _run(5, "ideal tree transforms", body)


def corpus_b(v):
    from .valuation import invariants

    return invariants(v).b


def generic_member(ideal, rng):
    f = Germ()
    for g in ideal.germs:
        f = f + g * rng.randint(1, 997)
    return f


def mixed_oracle(i1, i2, rng):
    """Intersection of generic members, accepted once two independent draws agree."""
    for _ in range(6):
        a = intersection_multiplicity(generic_member(i1, rng), generic_member(i2, rng))
        b = intersection_multiplicity(generic_member(i1, rng), generic_member(i2, rng))
        if a == b:
            return a
    raise ValtreeError("generic-member oracle did not stabilise")


def check_mixed(n=20, seed=606):
    def body():
        rng = random.Random(seed)
        pins = [
            (Ideal(["x^2", "y^3"]), Ideal(["x^2", "y^3"]), 6),
            (Ideal(["y^2 - x^3"]), Ideal(["y"]), 3),
        ]
        bad = 0
        for i1, i2, want in pins:
            if measure_intersection(ideal_measure(i1), ideal_measure(i2)) != want:
                bad += 1
        for _ in range(n):
            i1, i2 = corpus.random_ideal(rng), corpus.random_ideal(rng)
            tree = measure_intersection(ideal_measure(i1), ideal_measure(i2))
            if tree != mixed_oracle(i1, i2, rng) or tree < i1.mult() * i2.mult():
                bad += 1
        return bad == 0, f"{n} random pairs + 2 pins, {bad} mismatches or bound failures"

    return _run(6, "mixed multiplicity", body)


def check_attenuation(n=20, seed=707):
    def body():
        rng = random.Random(seed)
        cusp = BranchCurve.parse("t^2", "t^3")
        pin = attenuate([(cusp, Fraction(1, 2))], Fraction(3, 5), 1)
        ok = len(pin.model) == 3 and [r.bound for r in pin.regions] == [Fraction(1, 2)]
        runs = bad = 0
        for _ in range(n):
            base = corpus.random_current(rng)
            for eps in (Fraction(3, 5), Fraction(1, 3), Fraction(1, 10)):
                runs += 1
                # coefficients scaled into (0, eps): nothing is split off
                branches = [(c, lam * eps) for c, lam in base]
                rep = attenuate(branches, eps, 1)
                rho = CurrentData(branches).measure()
                tree = threshold_subtree(rho, eps)
                certify_modification(rep.model, tree, rho.mass, eps)
                good = not rep.split_off
                good &= all(r.bound <= eps and r.exact <= r.bound for r in rep.regions)
                good &= rep.sums["sum_exact"] <= rho.mass
                good &= rep.sums["sum_bound_pow"] <= eps * rho.mass
                for r in rep.regions:
                    good &= region_mass_by_tree(rep.model, rho, r.point) == r.region_mass
                bad += not good
        return ok and bad == 0, f"pin {'ok' if ok else 'wrong'}, {runs - bad}/{runs} certified reports"

    return _run(7, "attenuation certification", body)


def check_axioms(n=40, seed=808):
    def body():
        rng = random.Random(seed)
        bad = 0
        for k in range(n):
            r = k % 3
            if r == 0:
                nu = monomial(1, Fraction(rng.randint(2, 9), rng.randint(1, 4)) + 1)
            elif r == 1:
                nu = divisorial_chain(corpus.random_chain(rng))
            else:
                nu = curve(corpus.random_branch(rng, 6))
            f, ff = corpus.branch_product(rng, 1)
            g, _ = corpus.branch_product(rng, 1)
            vf, vg = evaluate(nu, f), evaluate(nu, g)
            ok = evaluate(nu, f * g) == vf + vg
            s = f + g
            if not s.is_zero():
                ok &= evaluate(nu, s) >= min(vf, vg)
            ok &= min(evaluate(nu, "x"), evaluate(nu, "y")) == 1
            c, e = ff[0]
            if e == 1 and len(ff) == 1:
                cross = intersect(nu, curve(c))
                ok &= vf == (INF if cross is INF else c.multiplicity * cross)
            bad += not ok
        trop = 0
        for _ in range(10):
            i1, i2 = corpus.random_ideal(rng), corpus.random_ideal(rng)
            g1, g2 = tree_transform_ideal(i1), tree_transform_ideal(i2)
            gp, gs = tree_transform_ideal(i1 * i2), tree_transform_ideal(i1 + i2)
            verts = {v for g in (g1, g2, gp, gs) for v in g.tree.valuations if v.kind != "curve"}
            for v in verts:
                if gp(v) != g1(v) + g2(v) or gs(v) != min(g1(v), g2(v)):
                    trop += 1
        return bad == 0 and trop == 0, f"{n} valuations, {bad} axiom failures, {trop} tropicality failures"

    return _run(8, "valuation axioms and tropicality", body)


def check_region_bound(n=100, seed=909):
    def body():
        rng = random.Random(seed)
        points = bad = 0
        for _ in range(n):
            m = corpus.random_model(rng, rng.randint(1, 10))
            cur = CurrentData(corpus.random_current(rng))
            rho = cur.measure()
            seen = {}
            for c, lam in cur.branches:
                lift = CurveLift(c)
                p = lift.advance(m)
                seen.setdefault(p, Fraction(0))
                seen[p] += lam * lift.multiplicity(m)
            for p, exact in seen.items():
                points += 1
                mass = region_mass(m, rho, p)
                b = m.point_numbers(p)[1]
                if exact > mass / b or mass != region_mass_by_tree(m, rho, p):
                    bad += 1
        return bad == 0, f"{n} random models, {points} charged points, {bad} violations"

    return _run(9, "region bound on arbitrary models", body)


ALL_CHECKS = (
    check_curve_intersections,
    check_farey,
    check_duality,
    check_riesz,
    check_ideal_transforms,
    check_mixed,
    check_attenuation,
    check_axioms,
    check_region_bound,
)


def run_all():
    return [check() for check in ALL_CHECKS]
