import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valtree import corpus
from valtree.branch import BranchCurve, implicitize
from valtree.errors import DomainError
from valtree.germ import parse_germ
from valtree.model import Model
from valtree.rational import INF
from valtree.valuation import (
    curve,
    divisorial,
    divisorial_chain,
    equal,
    eval_ideal,
    evaluate,
    intersect,
    invariants,
    leq,
    meet,
    monomial,
    multiplicity_valuation,
    pushforward,
    same_branch,
    segment_point,
    skewness,
)

CUSP = BranchCurve.parse("t^2", "t^3")
YAXIS = BranchCurve.parse("t", "0")
ROOT = multiplicity_valuation()


def cusp_F():
    m = Model.from_chain((0,))
    return divisorial(m.blowup(m.satellite(0, 1)))


def test_evaluate_examples():
    assert evaluate(monomial(1, Fraction(3, 2)), "y^2 - x^3") == 3
    assert evaluate(cusp_F(), "y^2 - x^3") == 3
    assert evaluate(curve(CUSP), "y") == Fraction(3, 2)
    assert evaluate(curve(CUSP), "y^2 - x^3") is INF
    assert evaluate(ROOT, "y^2 - x^3 + 1") == 0
    with pytest.raises(DomainError):
        evaluate(ROOT, "0")


def test_eval_ideal():
    assert eval_ideal(ROOT, ["x^2", "y^3"]) == 2
    assert eval_ideal(monomial(Fraction(3, 2), 1), ["x^2", "y^3"]) == 3
    assert eval_ideal(curve(YAXIS), ["y"]) is INF


def test_invariants():
    r = invariants(ROOT)
    assert (r.alpha, r.thinness, r.mult, r.b) == (1, 2, 1, 1)
    f = invariants(cusp_F())
    assert (f.alpha, f.thinness, f.mult, f.b) == (Fraction(3, 2), Fraction(5, 2), 1, 2)
    c = invariants(curve(CUSP))
    assert c.alpha is INF and c.mult == 2


def test_monomial_weights_must_be_normalized():
    with pytest.raises(DomainError):
        monomial(2, 3)
    assert monomial(1, 1) == ROOT


def test_order():
    e0 = divisorial(Model().blowup())
    assert leq(ROOT, curve(CUSP))
    assert leq(e0, curve(CUSP))
    assert not leq(divisorial_chain((0,)), curve(BranchCurve.parse("t", "-t")))
    assert leq(monomial(1, 2), monomial(1, 3))
    assert not leq(monomial(1, 2), monomial(2, 1)) and not leq(monomial(2, 1), monomial(1, 2))


def test_meet_and_intersection():
    m = meet(curve(CUSP), curve(YAXIS))
    assert skewness(m) == Fraction(3, 2) and m == cusp_F()
    assert meet(cusp_F(), cusp_F()) == cusp_F()
    assert meet(monomial(1, 2), monomial(2, 1)) == ROOT
    assert intersect(curve(CUSP), curve(YAXIS)) == Fraction(3, 2)
    assert intersect(ROOT, curve(CUSP)) == 1
    assert intersect(cusp_F(), cusp_F()) == Fraction(3, 2)
    assert intersect(curve(CUSP), curve(CUSP)) is INF


def test_segment_point():
    p = segment_point(curve(CUSP), Fraction(3, 2))
    assert p == cusp_F()
    with pytest.raises(DomainError):
        segment_point(cusp_F(), 2)


def test_same_branch_detects_reparametrization():
    assert same_branch(CUSP, BranchCurve.parse("t^2 + 2*t^3 + t^4", "t^3 + 3*t^4 + 3*t^5 + t^6"))
    assert not same_branch(CUSP, BranchCurve.parse("t^2", "t^3 + t^4"))
    assert equal(curve(CUSP), curve(BranchCurve.parse("t^2", "-t^3")))


def test_pushforward():
    c, mu = pushforward(("x", "y"), cusp_F())
    assert c == 1 and mu == cusp_F()
    c, mu = pushforward(("x^2", "y"), ROOT)
    assert c == 1 and mu == monomial(2, 1)
    c, mu = pushforward(("x", "y"), curve(CUSP))
    assert c == 1 and mu == curve(CUSP)
    with pytest.raises(DomainError):
        pushforward(("x^2", "x^2"), ROOT)


weights = st.tuples(st.integers(1, 9), st.integers(1, 5)).map(lambda pq: Fraction(pq[0], pq[1]) + 1)


@given(weights, st.booleans(), st.integers(0, 10**6))
def test_monomial_values_through_blowups(w, flip, seed):
    # the blowup route must reproduce min(i*wx + j*wy) over the support
    wx, wy = (w, Fraction(1)) if flip else (Fraction(1), w)
    nu = monomial(wx, wy)
    psi, _ = corpus.branch_product(random.Random(seed), 2)
    direct = min(i * wx + j * wy for i, j in psi.terms)
    assert evaluate(divisorial_chain(nu.chain), psi) == direct == evaluate(nu, psi)


@given(st.integers(0, 10**6))
def test_thinness_bound(seed):
    # A(nu) <= 1 + m(nu) * alpha(nu) on quasimonomial valuations
    inv = invariants(divisorial_chain(corpus.random_chain(random.Random(seed), 7)))
    assert inv.thinness <= 1 + inv.mult * inv.alpha


@given(st.integers(0, 10**6))
def test_values_through_skewness(seed):
    # nu(phi) = m(phi) * alpha(nu meet nu_phi) for an irreducible phi
    rng = random.Random(seed)
    nu = divisorial_chain(corpus.random_chain(rng))
    c = corpus.random_branch(rng, 6)
    assert evaluate(nu, implicitize(c)) == c.multiplicity * skewness(meet(nu, curve(c)))


@given(st.integers(0, 10**6))
def test_order_is_tree_like(seed):
    rng = random.Random(seed)
    a, b, c = (divisorial_chain(corpus.random_chain(rng)) for _ in range(3))
    ab = meet(a, b)
    assert leq(ab, a) and leq(ab, b)
    # the meets of three points: two coincide and the third lies above
    m = sorted((meet(a, b), meet(b, c), meet(a, c)), key=skewness)
    assert m[0] == m[1] and leq(m[1], m[2])


@given(st.integers(0, 10**6))
def test_order_coherence_and_meet_laws(seed):
    rng = random.Random(seed)
    a, b, c = (divisorial_chain(corpus.random_chain(rng)) for _ in range(3))
    psi, _ = corpus.branch_product(rng, 2)
    if leq(a, b):
        assert evaluate(a, psi) <= evaluate(b, psi)
    assert meet(a, b) == meet(b, a) and meet(a, a) == a
    assert meet(meet(a, b), c) == meet(a, meet(b, c))
    assert skewness(meet(a, b)) <= min(skewness(a), skewness(b))


@given(st.integers(0, 10**6))
def test_multiplicity_divides_b(seed):
    inv = invariants(divisorial_chain(corpus.random_chain(random.Random(seed), 7)))
    assert inv.b % inv.mult == 0


def _monomial_map(rng):
    while True:
        a, b, p, q = (rng.randint(0, 3) for _ in range(4))
        if a + b and p + q and a * q != b * p:
            return parse_germ(f"x^{a}*y^{b}"), parse_germ(f"x^{p}*y^{q}")


@given(st.integers(0, 10**6))
def test_pushforward_is_functorial(seed):
    rng = random.Random(seed)
    f, g = _monomial_map(rng), _monomial_map(rng)
    fg = (f[0].compose(*g), f[1].compose(*g))
    w = Fraction(rng.randint(1, 7), rng.randint(1, 3)) + 1
    nu = monomial(1, w) if rng.random() < 0.5 else monomial(w, 1)
    c1, mu1 = pushforward(fg, nu)
    cg, mug = pushforward(g, nu)
    cf, muf = pushforward(f, mug)
    assert c1 == cg * cf and mu1 == muf


def test_pushforward_of_divisorial_agrees_with_composition():
    f = (parse_germ("x^2"), parse_germ("y"))
    g = (parse_germ("x"), parse_germ("x*y"))
    nu = divisorial_chain((1, 0))
    fg = (f[0].compose(*g), f[1].compose(*g))
    c1, mu1 = pushforward(fg, nu)
    cg, mug = pushforward(g, nu)
    cf, muf = pushforward(f, mug)
    assert c1 == cg * cf and equal(mu1, muf)
    for psi in ("y^2 - x^3", "x + y", "x*y^2 + y^5"):
        assert evaluate(nu, parse_germ(psi).compose(*fg)) == c1 * evaluate(mu1, psi)
