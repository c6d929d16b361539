import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valtree import corpus
from valtree.attenuation import (
    CurrentData,
    attenuate,
    build_modification,
    center,
    region_mass,
    region_mass_by_tree,
    threshold_subtree,
)
from valtree.branch import BranchCurve
from valtree.errors import DomainError
from valtree.model import CurveLift, Model
from valtree.tree import TreeMeasure
from valtree.valuation import curve, monomial, multiplicity_valuation

HALF = Fraction(1, 2)
EPS = Fraction(3, 5)
CUSP = BranchCurve.parse("t^2", "t^3")
L1 = BranchCurve.parse("t", "t")
L2 = BranchCurve.parse("t", "-t")
ROOT = multiplicity_valuation()


def cusp_chain():
    m = Model.from_chain((0,))
    return m.blowup(m.satellite(0, 1))


def lines():
    return TreeMeasure([(curve(L1), HALF), (curve(L2), HALF)])


def test_region_mass():
    m = Model().blowup()
    assert region_mass(m, lines(), m.free(0, 1)) == HALF
    c = cusp_chain()
    rho = TreeMeasure([(curve(CUSP), 1)])
    p = CurveLift(CUSP).advance(c)
    assert region_mass(c, rho, p) == 1 == region_mass_by_tree(c, rho, p)
    assert region_mass(c, TreeMeasure([(ROOT, 1)]), p) == 0
    assert center(c, ROOT) is None


def test_threshold_subtree():
    t = threshold_subtree(lines(), EPS)
    assert t.valuations == [ROOT]
    t = threshold_subtree(TreeMeasure([(curve(CUSP), 1)]), EPS)
    assert t.valuations == [ROOT, monomial(1, Fraction(3, 2))]
    assert threshold_subtree(TreeMeasure([(ROOT, 1)]), 1).valuations == [ROOT]
    with pytest.raises(DomainError):
        threshold_subtree(TreeMeasure([(curve(L1), 1)]), EPS)


def test_build_modification():
    m, _ = build_modification(lines(), EPS)
    assert len(m) == 1
    m, _ = build_modification(TreeMeasure([(curve(CUSP), 1)]), EPS)
    assert [(c.a, c.b) for c in m.components] == [(2, 1), (3, 1), (5, 2)]
    assert m.edges() == [(0, 2), (1, 2)]
    m, _ = build_modification(TreeMeasure([(ROOT, 1)]), 1)
    assert len(m) == 1


def test_attenuate_cusp():
    rep = attenuate([(CUSP, HALF)], EPS, 1)
    assert len(rep.model) == 3
    [r] = rep.regions
    assert str(r.point) == "free(E2, 1)"
    assert (r.region_mass, r.b, r.bound, r.exact) == (1, 2, HALF, HALF)
    assert rep.sums["sum_bound"] == HALF and rep.sums["sum_bound_pow"] == Fraction(1, 4)
    assert rep.sums["pow_limit"] == EPS


def test_attenuate_transverse_lines():
    rep = attenuate([(L1, HALF), (L2, HALF)], EPS, 1)
    assert len(rep.model) == 1
    assert [(r.bound, r.exact) for r in rep.regions] == [(HALF, HALF), (HALF, HALF)]


def test_attenuate_splits_large_coefficients():
    rep = attenuate([(BranchCurve.parse("t", "0"), 1)], HALF, 1)
    assert rep.regions == []
    assert rep.divisorial_part == {0: 1}
    assert len(rep.split_off) == 1


def test_bad_inputs():
    with pytest.raises(DomainError):
        attenuate([(CUSP, HALF)], 0, 1)
    with pytest.raises(DomainError):
        CurrentData([(CUSP, -1)])
    with pytest.raises(DomainError):
        CurrentData([])


def test_equal_branches_merge():
    cur = CurrentData([(CUSP, Fraction(1, 4)), (BranchCurve.parse("t^2", "-t^3"), Fraction(1, 4))])
    assert len(cur.branches) == 1 and cur.mass == 1


@given(st.integers(0, 10**6), st.sampled_from([Fraction(3, 5), Fraction(1, 3), Fraction(1, 10)]))
def test_reports_are_certified(seed, eps):
    rep = attenuate(corpus.random_current(random.Random(seed), 4), eps, 1)
    for r in rep.regions:
        assert r.exact <= r.bound <= eps
    assert rep.sums["sum_exact"] <= rep.sums["mass"]
    assert rep.sums["sum_bound_pow"] <= eps * rep.sums["mass"]


@given(st.integers(0, 10**6))
def test_region_bound_on_random_models(seed):
    rng = random.Random(seed)
    m = corpus.random_model(rng, rng.randint(1, 10))
    cur = CurrentData(corpus.random_current(rng, 4))
    rho = cur.measure()
    for c, lam in cur.branches:
        lift = CurveLift(c)
        p = lift.advance(m)
        mass = region_mass(m, rho, p)
        assert lam * lift.multiplicity(m) <= mass / m.point_numbers(p)[1]
        assert mass == region_mass_by_tree(m, rho, p)


@given(st.integers(0, 10**6))
def test_regions_partition_the_mass(seed):
    rng = random.Random(seed)
    m = corpus.random_model(rng, rng.randint(1, 8))
    rho = CurrentData(corpus.random_current(rng, 4)).measure()
    points = {center(m, v) for v, _ in rho.atoms}
    assert sum(region_mass(m, rho, p) for p in points) == rho.mass


def test_smooth_transverse_branches_attain_the_bound():
    branches = [(BranchCurve.parse("t", f"{k}*t"), Fraction(1, 5)) for k in range(4)]
    rep = attenuate(branches, Fraction(3, 10), 1)
    assert len(rep.model) == 1
    assert all(r.bound == r.exact for r in rep.regions)


@given(st.integers(0, 10**6))
def test_divisorial_part_matches_pullback(seed):
    from valtree.branch import implicitize
    from valtree.model import divisor_order

    rng = random.Random(seed)
    rep = attenuate(corpus.random_current(rng, 3), Fraction(1, 3), 1)
    cur = CurrentData(corpus.random_current(random.Random(seed), 3))
    for e in rep.model.components:
        direct = sum(lam * divisor_order(rep.model, e.id, implicitize(c)) for c, lam in cur.branches)
        assert rep.divisorial_part[e.id] == direct
