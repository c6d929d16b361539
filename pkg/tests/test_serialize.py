import json
import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from valtree import corpus, serialize
from valtree.attenuation import attenuate
from valtree.branch import BranchCurve
from valtree.errors import DomainError, ParseError
from valtree.tree import Ideal, ideal_measure
from valtree.valuation import curve, divisorial_chain, equal, monomial, multiplicity_valuation


def test_valuation_schema():
    assert serialize.valuation_to_json(multiplicity_valuation()) == {"type": "multiplicity"}
    assert serialize.valuation_to_json(monomial(1, Fraction(3, 2))) == {"type": "monomial", "weights": ["1", "3/2"]}
    assert serialize.valuation_to_json(curve(BranchCurve.parse("t^2", "t^3"))) == {"type": "curve", "x": "t^2", "y": "t^3"}
    path = serialize.valuation_to_json(divisorial_chain((0,)))["path"]
    assert path == [{"kind": "origin"}, {"kind": "free", "component": 0, "tangent": "0"}]


def test_path_errors():
    with pytest.raises(DomainError):
        serialize.model_from_json([{"kind": "free", "component": 0, "tangent": "1"}])
    with pytest.raises(ParseError):
        serialize.model_from_json([{"kind": "origin"}, {"kind": "wild"}])
    with pytest.raises(ParseError):
        serialize.valuation_from_json({"type": "monomial", "weights": [1.5, 1]})
    with pytest.raises(ParseError):
        serialize.loads("{")


@given(st.integers(0, 10**6))
def test_valuation_round_trip(seed):
    rng = random.Random(seed)
    for nu in (divisorial_chain(corpus.random_chain(rng)), curve(corpus.random_branch(rng, 6))):
        back = serialize.valuation_from_json(serialize.valuation_to_json(nu))
        assert equal(back, nu)


@given(st.integers(0, 10**6))
def test_model_round_trip(seed):
    m = corpus.random_model(random.Random(seed), 8)
    back = serialize.model_from_json(serialize.model_to_json(m))
    assert back.components == m.components and back.edges() == m.edges()


def test_measure_json_is_deterministic():
    text = serialize.dumps(serialize.measure_to_json(ideal_measure(Ideal(["x^2", "y^3", "x*y"]))))
    again = serialize.dumps(serialize.measure_to_json(ideal_measure(Ideal(["x*y", "y^3", "x^2"]))))
    assert text == again
    rho = serialize.measure_from_json(json.loads(text))
    assert rho.same_as(ideal_measure(Ideal(["x^2", "y^3", "x*y"])))


def test_report_has_only_exact_numbers():
    rep = attenuate([(BranchCurve.parse("t^2", "t^3"), Fraction(1, 2))], Fraction(3, 5), 1)
    data = serialize.report_to_json(rep)

    def walk(obj):
        if isinstance(obj, dict):
            for v in obj.values():
                walk(v)
        elif isinstance(obj, list):
            for v in obj:
                walk(v)
        else:
            assert not isinstance(obj, float)

    walk(data)
    assert data["sums"]["sup_bound"] == "1/2"
    assert data["regions"][0]["point"] == {"kind": "free", "component": 2, "tangent": "1"}
