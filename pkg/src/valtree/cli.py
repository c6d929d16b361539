"""Command-line front end: ``valtree eval | measure | intersect | blowup | attenuate | selftest | run``.

Arguments that take structured data accept either an inline literal (JSON, or
a germ list such as ``"x^2, y^3"`` for ideals) or ``@name``, which refers to an
entry of the scene file given with ``--scene``.

Exit codes: 0 ok, 2 parse error, 3 domain error, 4 internal invariant violation.
"""

import argparse
import random
import sys

from . import serialize
from .attenuation import attenuate
from .checks import mixed_oracle, run_all
from .errors import InvariantViolation, ParseError, ValtreeError
from .germ import parse_germ
from .model import dual_graph_dot
from .rational import fmt
from .tree import ideal_measure, measure_intersection
from .valuation import evaluate

SECTIONS = ("valuations", "germs", "ideals", "currents", "models")


class Scene:
    """Named objects from a scene file. Names are unique across all sections."""

    def __init__(self, data=None):
        data = data or {}
        if not isinstance(data, dict):
            raise ParseError("a scene file holds a JSON object")
        self.data = {s: data.get(s, {}) for s in SECTIONS}
        self.jobs = data.get("jobs", [])
        seen = set()
        for s in SECTIONS:
            if not isinstance(self.data[s], dict):
                raise ParseError(f"scene section {s!r} must be an object")
            for name in self.data[s]:
                if name in seen:
                    raise ParseError(f"duplicate scene name {name!r}")
                seen.add(name)
        if not isinstance(self.jobs, list):
            raise ParseError("scene jobs must be a list")

    @classmethod
    def load(cls, path):
        if path is None:
            return cls()
        try:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
        except OSError as exc:
            raise ParseError(f"cannot read scene file: {exc.strerror}") from None
        return cls(serialize.loads(text))

    def lookup(self, section, value):
        if isinstance(value, str) and value.startswith("@"):
            name = value[1:]
            if name not in self.data[section]:
                raise ParseError(f"unresolved reference {value!r} in {section}")
            return self.data[section][name], True
        return value, False


def _json_or_text(value):
    if isinstance(value, str) and value.lstrip()[:1] in "[{":
        return serialize.loads(value)
    return value


def _germ(scene, value):
    value, _ = scene.lookup("germs", value)
    if not isinstance(value, str):
        raise ParseError("a germ is given as a polynomial string")
    return parse_germ(value)


def _valuation(scene, value):
    value, _ = scene.lookup("valuations", value)
    return serialize.valuation_from_json(_json_or_text(value))


def _ideal(scene, value):
    value, _ = scene.lookup("ideals", value)
    value = _json_or_text(value)
    if isinstance(value, str):
        value = [g.strip() for g in value.split(",")]
    return serialize.ideal_from_json(value)


def _current(scene, value):
    value, _ = scene.lookup("currents", value)
    return serialize.current_from_json(_json_or_text(value))


def _model(scene, value):
    value, _ = scene.lookup("models", value)
    return serialize.model_from_json(_json_or_text(value))


def _write(path, text):
    try:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ParseError(f"cannot write {path}: {exc.strerror}") from None


# commands; each returns the text to print


def cmd_eval(args, scene):
    return fmt(evaluate(_valuation(scene, args.val), _germ(scene, args.germ))) + "\n"


def cmd_measure(args, scene):
    return serialize.dumps(serialize.measure_to_json(ideal_measure(_ideal(scene, args.ideal))))


def cmd_intersect(args, scene):
    i1, i2 = _ideal(scene, args.left), _ideal(scene, args.right)
    value = measure_intersection(ideal_measure(i1), ideal_measure(i2))
    oracle = mixed_oracle(i1, i2, random.Random(args.seed))
    if oracle != value:
        raise InvariantViolation(f"{fmt(value)} [oracle: {fmt(oracle)} MISMATCH]")
    return f"{fmt(value)} [oracle: {fmt(oracle)} OK]\n"


def cmd_blowup(args, scene):
    m = _model(scene, args.path)
    if args.dot:
        _write(args.dot, dual_graph_dot(m))
    if args.format == "dot":
        return dual_graph_dot(m)
    return serialize.dumps(serialize.model_summary(m))


def cmd_attenuate(args, scene):
    rep = attenuate(_current(scene, args.current), serialize.rational(args.epsilon), serialize.rational(args.eta))
    text = serialize.dumps(serialize.report_to_json(rep))
    if args.dot:
        _write(args.dot, dual_graph_dot(rep.model))
    if args.report:
        _write(args.report, text)
        return ""
    return text


def cmd_selftest(args, scene):
    results = run_all()
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed}/{len(results)} checks passed")
    text = "\n".join(lines) + "\n"
    if failed:
        sys.stdout.write(text)
        raise InvariantViolation(f"{failed} acceptance checks failed")
    return text


def cmd_run(args, scene):
    if not scene.jobs:
        raise ParseError("the scene has no jobs")
    parser = build_parser()
    out = []
    for job in scene.jobs:
        if not isinstance(job, dict) or job.get("command") not in COMMANDS or job["command"] == "run":
            raise ParseError(f"bad job {job!r}")
        ns = parser.parse_args([job["command"]] + _job_argv(job))
        out.append(COMMANDS[job["command"]](ns, scene))
    return "".join(out)


def _job_argv(job):
    argv = []
    for key, value in job.items():
        if key == "command":
            continue
        if not isinstance(value, str):
            value = serialize.dumps(value) if isinstance(value, (dict, list)) else str(value)
        argv += [f"--{key.replace('_', '-')}", value]
    return argv


COMMANDS = {
    "eval": cmd_eval,
    "measure": cmd_measure,
    "intersect": cmd_intersect,
    "blowup": cmd_blowup,
    "attenuate": cmd_attenuate,
    "selftest": cmd_selftest,
    "run": cmd_run,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="valtree", description="Exact computations on the valuative tree.")
    parser.add_argument("--scene", help="JSON scene file for @name references")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="value of a valuation on a germ")
    p.add_argument("--germ", required=True)
    p.add_argument("--val", required=True)

    p = sub.add_parser("measure", help="tree measure of an ideal")
    p.add_argument("--ideal", required=True)

    p = sub.add_parser("intersect", help="intersection of two ideal measures, with an oracle check")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("blowup", help="apply a path of blowups and describe the model")
    p.add_argument("--path", required=True)
    p.add_argument("--format", choices=("json", "dot"), default="json")
    p.add_argument("--dot", help="also write the dual graph to this file")

    p = sub.add_parser("attenuate", help="attenuation report for a current")
    p.add_argument("--current", required=True)
    p.add_argument("--epsilon", required=True)
    p.add_argument("--eta", default="1")
    p.add_argument("--report", help="write the report JSON here instead of stdout")
    p.add_argument("--dot", help="write the model's dual graph here")

    sub.add_parser("selftest", help="run the acceptance checks")
    sub.add_parser("run", help="run the jobs of the scene file")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    try:
        scene = Scene.load(args.scene)
        sys.stdout.write(COMMANDS[args.command](args, scene))
    except ValtreeError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code
    return 0


if __name__ == "__main__":
    sys.exit(main())
