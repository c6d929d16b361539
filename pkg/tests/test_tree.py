import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valtree import corpus
from valtree.branch import BranchCurve, implicitize
from valtree.checks import mixed_oracle
from valtree.errors import DomainError
from valtree.rational import INF
from valtree.tree import (
    Generator,
    lelong_counterexample,
    same_tree_transform,
    Ideal,
    TreeMeasure,
    TreePotential,
    decompose,
    ideal_measure,
    make_generator,
    measure_intersection,
    potential_from_measure,
    potential_of_measure,
    span,
    tree_transform_ideal,
)
from valtree.valuation import curve, divisorial_chain, leq, meet, monomial, multiplicity_valuation, skewness

CUSP = BranchCurve.parse("t^2", "t^3")
YAXIS = BranchCurve.parse("t", "0")
ROOT = multiplicity_valuation()
F = monomial(1, Fraction(3, 2))
X32 = monomial(Fraction(3, 2), 1)


def test_span_of_cusp_and_line():
    t = span([curve(CUSP), curve(YAXIS)])
    assert len(t) == 4
    assert t.valuations[0] == ROOT
    mid = t.find(F)
    assert mid is not None and t.parent[mid] == 0 and t.mult[mid] == 1
    assert t.mult[t.find(curve(CUSP))] == 2 and t.mult[t.find(curve(YAXIS))] == 1
    assert sorted(t.parent[i] for i in t.ends()) == [mid, mid]


def test_small_spans():
    assert len(span([ROOT])) == 1
    t = span([curve(BranchCurve.parse("t", "t"))])
    assert len(t) == 2 and t.mult[1] == 1


def test_potential_values():
    assert potential_of_measure(TreeMeasure([(ROOT, 1)]), curve(CUSP)) == 1
    assert potential_of_measure(TreeMeasure([(curve(CUSP), 2)]), curve(YAXIS)) == 3
    two = TreeMeasure([(curve(BranchCurve.parse("t", "t")), Fraction(1, 2)), (curve(BranchCurve.parse("t", "-t")), Fraction(1, 2))])
    assert potential_of_measure(two, ROOT) == 1


def test_laplacian_of_constant_and_truncation():
    t = span([divisorial_chain((0, 0))])
    assert TreePotential(t, [Fraction(1)] * len(t)).laplacian().same_as(TreeMeasure([(ROOT, 1)]))
    # g = min(alpha, 2) on the segment up to alpha = 3: unit mass at the alpha = 2 vertex
    t = span([divisorial_chain((0,)), divisorial_chain((0, 0))])
    assert t.alpha == [1, 2, 3]
    values = [min(a, Fraction(2)) for a in t.alpha]
    assert TreePotential(t, values).laplacian().same_as(TreeMeasure([(divisorial_chain((0,)), 1)]))


def test_laplacian_rejects_non_concave():
    t = span([divisorial_chain((0,)), divisorial_chain((0, 0))])
    with pytest.raises(DomainError):
        TreePotential(t, [Fraction(1), Fraction(1), Fraction(3)]).laplacian()


def test_ideal_transforms():
    g = tree_transform_ideal(Ideal(["x^2", "y^3"]))
    assert g.values[0] == 2
    rho = g.laplacian()
    assert rho.same_as(TreeMeasure([(X32, 2)]))
    assert ideal_measure(Ideal(["y^2 - x^3"])).same_as(TreeMeasure([(curve(CUSP), 2)]))
    assert ideal_measure(Ideal(["x", "y"])).same_as(TreeMeasure([(ROOT, 1)]))


def test_measure_intersection():
    rho = ideal_measure(Ideal(["x^2", "y^3"]))
    assert measure_intersection(rho, rho) == 6
    assert measure_intersection(TreeMeasure([(ROOT, 1)]), TreeMeasure([(ROOT, 1)])) == 1
    assert measure_intersection(TreeMeasure([(curve(CUSP), 1)]), TreeMeasure([(curve(CUSP), 1)])) is INF


def test_decompose():
    assert decompose("x^2*y") == ((BranchCurve((), (0, 1)), 2), (BranchCurve((0, 1), ()), 1))
    branches = decompose("y^2 - 4*x^2")
    assert len(branches) == 2 and all(c.multiplicity == 1 for c, _ in branches)
    with pytest.raises(DomainError):
        decompose("y^2 - 2*x^2")
    with pytest.raises(DomainError):
        decompose("y^2 - x^3 + x*y^5")


def test_branch_data_is_checked():
    with pytest.raises(DomainError):
        make_generator("y^2 - x^3", ((BranchCurve.parse("t^2", "t^3 + t^4"), 1),))
    c = BranchCurve.parse("t^2", "t^3 + t^4")
    g = make_generator(implicitize(c), ((c, 1),))
    assert ideal_measure(Ideal([g])).same_as(TreeMeasure([(curve(c), 2)]))


@given(st.integers(0, 10**6))
def test_riesz_round_trip(seed):
    rho = corpus.random_measure(random.Random(seed), 5)
    assert potential_from_measure(rho).laplacian().same_as(rho)


@given(st.integers(0, 10**6))
def test_mixed_multiplicity_lower_bound(seed):
    rng = random.Random(seed)
    i1, i2 = corpus.random_ideal(rng), corpus.random_ideal(rng)
    value = measure_intersection(ideal_measure(i1), ideal_measure(i2))
    assert value >= i1.mult() * i2.mult()
    assert value == mixed_oracle(i1, i2, rng)


@given(st.integers(0, 10**6))
def test_ideal_mass_and_slopes(seed):
    ideal = corpus.random_ideal(random.Random(seed))
    g = tree_transform_ideal(ideal)
    assert g.laplacian().mass == ideal.mult()
    assert all(g.slope(i).denominator == 1 for i in range(1, len(g.tree)))
    assert all(skewness(v) >= 1 for v in g.tree.valuations)


def test_equal_transforms_and_lelong_numbers():
    rng = random.Random(5)
    models = [corpus.random_model(rng, rng.randint(1, 6)) for _ in range(20)]
    a, b = Ideal(["x^2", "y^2"]), Ideal(["x^2", "x*y", "y^2"])
    assert same_tree_transform(a, b) and lelong_counterexample(a, b, models) is None
    c, d = Ideal(["x^2", "y^3"]), Ideal(["x^3", "y^2"])
    assert not same_tree_transform(c, d) and lelong_counterexample(c, d, models) is not None


@given(st.integers(0, 10**6))
def test_redundant_generators_change_nothing(seed):
    rng = random.Random(seed)
    ideal = corpus.random_ideal(rng)
    f, g = ideal.generators[0], ideal.generators[-1]
    bigger = Ideal(list(ideal.generators) + [Generator(f.germ * g.germ, f.branches + g.branches)])
    models = [corpus.random_model(rng, rng.randint(1, 5)) for _ in range(3)]
    assert same_tree_transform(ideal, bigger)
    assert lelong_counterexample(ideal, bigger, models) is None
    shifted = ideal * Ideal(["x", "y"])
    assert not same_tree_transform(ideal, shifted)
    assert lelong_counterexample(ideal, shifted, models) is not None


@given(st.integers(0, 10**6))
def test_potential_below_root_value_times_skewness(seed):
    rng = random.Random(seed)
    rho = corpus.random_measure(rng, 4)
    nu = divisorial_chain(corpus.random_chain(rng))
    g = potential_of_measure(rho, nu)
    bound = potential_of_measure(rho, ROOT) * skewness(nu)
    assert g <= bound
    assert (g == bound) == all(leq(nu, v) for v, _ in rho.atoms)


@given(st.integers(0, 10**6))
def test_lower_bound_equality_case(seed):
    rng = random.Random(seed)
    r1, r2 = ideal_measure(corpus.random_ideal(rng)), ideal_measure(corpus.random_ideal(rng))
    value = measure_intersection(r1, r2)
    only_root = all(meet(v, w) == ROOT for v, _ in r1.atoms for w, _ in r2.atoms)
    assert (value == r1.mass * r2.mass) == only_root
