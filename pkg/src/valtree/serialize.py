"""JSON encodings. Every number is an exact rational string; keys are sorted on output."""

import json
from fractions import Fraction

from .attenuation import CurrentData
from .branch import BranchCurve
from .errors import DomainError, ParseError
from .germ import format_germ, parse_germ
from .model import ORIGIN, Model, point_descriptor
from .rational import INF, fmt, to_fraction
from .tree import Ideal, TreeMeasure, make_generator
from .valuation import Valuation, curve, divisorial, monomial, multiplicity_valuation


def dumps(obj):
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def loads(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None


def _field(obj, key, kind=None):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"missing field {key!r}")
    value = obj[key]
    if kind is not None and not isinstance(value, kind):
        raise ParseError(f"field {key!r} has the wrong type")
    return value


def rational(value):
    """Read a rational given as an integer or a ``"p/q"`` string."""
    if isinstance(value, bool) or not isinstance(value, (int, str)):
        raise ParseError(f"not an exact rational: {value!r}")
    return to_fraction(value)


def _tangent(value):
    if value == "inf":
        return INF
    return rational(value)


# models


def model_to_json(model):
    return [point_descriptor(p) for p in model.log]


def model_from_json(path):
    if not isinstance(path, list) or not path:
        raise ParseError("a blowup path is a non-empty list of centers")
    m = Model()
    for k, step in enumerate(path):
        kind = _field(step, "kind", str)
        if kind == "origin":
            if k:
                raise DomainError("the origin can only be the first center")
            m._blowup(ORIGIN)
        elif k == 0:
            raise DomainError("a blowup path starts at the origin")
        elif kind == "free":
            comp = _field(step, "component", int)
            m._blowup(m.free(comp, _tangent(_field(step, "tangent"))))
        elif kind == "satellite":
            pair = _field(step, "components", list)
            if len(pair) != 2 or not all(isinstance(c, int) for c in pair):
                raise ParseError("a satellite center names two components")
            m._blowup(m.satellite(*pair))
        else:
            raise ParseError(f"unknown center kind {kind!r}")
    return m


def model_summary(model):
    return {
        "components": [
            {"id": c.id, "a": c.a, "b": c.b, "alpha": fmt(c.alpha), "mult": c.mult, "kind": c.kind}
            for c in model.components
        ],
        "edges": [list(e) for e in model.edges()],
        "log": model_to_json(model),
    }


# valuations


def branch_to_json(c):
    x, y = c.texts()
    return {"x": x, "y": y}


def branch_from_json(obj):
    return BranchCurve.parse(_field(obj, "x", str), _field(obj, "y", str))


def valuation_to_json(nu):
    if nu.kind == "curve":
        return {"type": "curve", **branch_to_json(nu.curve)}
    if nu.is_root:
        return {"type": "multiplicity"}
    if nu.weights is not None:
        return {"type": "monomial", "weights": [fmt(w) for w in nu.weights]}
    return {"type": "divisorial", "path": model_to_json(Model.from_chain(nu.chain))}


def valuation_from_json(obj):
    kind = _field(obj, "type", str)
    if kind == "multiplicity":
        return multiplicity_valuation()
    if kind == "monomial":
        w = _field(obj, "weights", list)
        if len(w) != 2:
            raise ParseError("monomial valuations have two weights")
        return monomial(rational(w[0]), rational(w[1]))
    if kind == "divisorial":
        m = model_from_json(_field(obj, "path", list))
        return divisorial(m)
    if kind == "curve":
        return curve(branch_from_json(obj))
    raise ParseError(f"unknown valuation type {kind!r}")


def valuation_ref(nu):
    """The same valuation as a plain ``Valuation`` (for use in lists and dicts)."""
    return nu if isinstance(nu, Valuation) else valuation_from_json(nu)


# measures, ideals, currents


def measure_to_json(rho):
    atoms = [{"valuation": valuation_to_json(v), "mass": fmt(m)} for v, m in rho.atoms]
    atoms.sort(key=lambda a: json.dumps(a, sort_keys=True))
    return {"atoms": atoms}


def measure_from_json(obj):
    atoms = _field(obj, "atoms", list)
    return TreeMeasure([(valuation_from_json(_field(a, "valuation")), rational(_field(a, "mass"))) for a in atoms])


def _generator_from_json(obj):
    if isinstance(obj, str):
        return make_generator(parse_germ(obj))
    germ = parse_germ(_field(obj, "germ", str))
    if "branches" not in obj:
        return make_generator(germ)
    branches = []
    for b in _field(obj, "branches", list):
        e = b.get("exponent", 1)
        if isinstance(e, bool) or not isinstance(e, int):
            raise ParseError("branch exponents are integers")
        branches.append((branch_from_json(b), e))
    return make_generator(germ, tuple(branches))


def ideal_from_json(obj):
    gens = obj if isinstance(obj, list) else _field(obj, "generators", list)
    if not gens:
        raise DomainError("an ideal needs at least one generator")
    return Ideal([_generator_from_json(g) for g in gens])


def ideal_to_json(ideal):
    gens = []
    for g in ideal.generators:
        gens.append({
            "germ": format_germ(g.germ),
            "branches": [dict(branch_to_json(c), exponent=e) for c, e in g.branches],
        })
    return {"generators": gens}


def current_from_json(obj):
    items = obj if isinstance(obj, list) else _field(obj, "branches", list)
    return CurrentData([(branch_from_json(b), rational(_field(b, "coefficient"))) for b in items])


def current_to_json(current):
    return {"branches": [dict(branch_to_json(c), coefficient=fmt(lam)) for c, lam in current.branches]}


# reports


def report_to_json(report):
    return {
        "epsilon": fmt(report.epsilon),
        "eta": fmt(report.eta),
        "model": model_to_json(report.model),
        "regions": [
            {
                "point": point_descriptor(r.point),
                "region_mass": fmt(r.region_mass),
                "b": r.b,
                "bound": fmt(r.bound),
                "exact": fmt(r.exact),
            }
            for r in report.regions
        ],
        "divisorial_part": {f"E{k}": fmt(v) for k, v in report.divisorial_part.items()},
        "split_off": [dict(branch_to_json(c), coefficient=fmt(lam)) for c, lam in report.split_off],
        "mass": fmt(report.mass),
        "sums": {k: fmt(v) for k, v in report.sums.items()},
    }


def as_fraction_text(value):
    return fmt(value if value is INF else Fraction(value))
