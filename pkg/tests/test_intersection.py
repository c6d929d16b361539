import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valtree import corpus
from valtree.branch import branch_eval_order, implicitize
from valtree.germ import parse_germ
from valtree.intersection import intersection_multiplicity
from valtree.rational import INF


@pytest.mark.parametrize(
    "f, g, want",
    [
        ("y^2 - x^3", "y", 3),
        ("y - x", "y + x", 1),
        ("y^2 - x^3", "y^2 - x^3", INF),
        ("x", "x - y^2 + y^3", 2),
        ("x*y - x", "y^2 - y", 1),
        ("y^2 - x^3", "y^2 - x^5", 6),
        ("y^2 - x^3", "y^3 - x^2", 4),
        ("x + 1", "y", 0),
        ("y^2 - x*y", "y^2 + x*y", INF),
    ],
)
def test_known_values(f, g, want):
    assert intersection_multiplicity(f, g) == want


def test_symmetric_and_additive():
    f, g, h = parse_germ("y^2 - x^3"), parse_germ("y - x^2"), parse_germ("x + y^3")
    assert intersection_multiplicity(f, g) == intersection_multiplicity(g, f)
    assert intersection_multiplicity(f * g, h) == intersection_multiplicity(f, h) + intersection_multiplicity(g, h)


@given(st.integers(0, 10**6))
def test_agrees_with_parametrized_order(seed):
    # for a branch C with equation f_C, I(f_C, psi) = ord_t psi(C(t))
    rng = random.Random(seed)
    c = corpus.random_branch(rng, 6)
    psi, _ = corpus.branch_product(rng, 2)
    assert intersection_multiplicity(implicitize(c), psi) == branch_eval_order(c, psi)
