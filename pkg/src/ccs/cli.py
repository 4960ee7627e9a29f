"""``ccs`` command-line front end.

Exit codes: 0 holds / success, 1 relation or check does not hold, 2 error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .config import RunConfig
from .context import Classification, classify, parse_context, pretty as pretty_context
from .equiv import EQUIVALENCES, PREORDERS, Verdict, check
from .errors import CCSError, HypothesisFailed
from .lts import DEFAULT_MAX_STATES, explore, to_dot
from .semantics import sorted_transitions, step
from .solutions import VARIANTS, SystemSpec, unique_solution
from .suite import run_suite
from .syntax import Process, canonical, free_variables, parse, parse_definitions, pretty, resolve

HOLDS, FAILS, ERROR = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(args, data: dict, text: str) -> None:
    if args.json:
        print(json.dumps(data, sort_keys=True))
    else:
        print(text)


def _definitions(args) -> dict[str, Process]:
    path = getattr(args, "file", None)
    if not path:
        return {}
    return parse_definitions(Path(path).read_text(encoding="utf-8"))


def _process(text: str, defs: dict[str, Process]) -> Process:
    """An expression, or the name of a defined agent, with agents inlined."""
    p = resolve(parse(text), defs)
    fv = free_variables(p)
    if fv:
        raise UsageError(f"undefined agent(s): {', '.join(sorted(fv))}")
    return p


def _target(args) -> Process:
    """``FILE NAME`` or a single expression (resolved against ``-f``)."""
    if len(args.target) == 2:
        args.file = args.target[0]
        defs = _definitions(args)
        name = args.target[1]
        if name not in defs:
            raise UsageError(f"agent {name} is not defined in {args.file}")
        return defs[name]
    if len(args.target) != 1:
        raise UsageError("expected FILE NAME or a single expression")
    return _process(args.target[0], _definitions(args))


# ---------------------------------------------------------------------------
# Commands


def cmd_parse(args) -> int:
    p = _process(args.expr, _definitions(args))
    _emit(args, {"pretty": pretty(p), "canonical": pretty(canonical(p))}, pretty(p))
    return HOLDS


def cmd_trans(args) -> int:
    p = _target(args)
    ts = sorted_transitions(step(p))
    lines = [f"{u} -> {pretty(q)}" for u, q in ts]
    data = {"process": pretty(p), "transitions": [{"action": str(u), "target": pretty(q)} for u, q in ts]}
    _emit(args, data, "\n".join(lines))
    return HOLDS


def cmd_lts(args) -> int:
    lts = explore(_target(args), args.max_states)
    if args.dot:
        sys.stdout.write(to_dot(lts))
        return HOLDS
    data = {
        "states": [pretty(s) for s in lts.states],
        "edges": [[s, str(u), t] for s, u, t in lts.edges],
        "root": lts.root,
    }
    lines = [f"{len(lts)} states, {len(lts.edges)} edges"]
    lines += [f"s{i}: {pretty(s)}" for i, s in enumerate(lts.states)]
    lines += [f"s{s} -{u}-> s{t}" for s, u, t in lts.edges]
    _emit(args, data, "\n".join(lines))
    return HOLDS


def _verdict_data(v: Verdict, full: bool) -> dict:
    data: dict = {"relation": v.relation, "holds": v.holds}
    if v.holds:
        data["witness_size"] = len(v.witness)
        if full:
            data["witness"] = [list(pair) for pair in v.witness_pairs()]
    else:
        d = v.distinguisher
        side = v.left if d.clause == 1 else v.right
        data["distinguisher"] = {
            "left": pretty(v.left.states[d.left]),
            "right": pretty(v.right.states[d.right]),
            "clause": d.clause,
            "action": str(d.action),
            "derivative": pretty(side.states[d.derivative]),
        }
    return data


def cmd_relation(args) -> int:
    defs = _definitions(args)
    p, q = _process(args.p, defs), _process(args.q, defs)
    v = check(args.relation, p, q, max_states=args.max_states)
    text = v.explain()
    if v.holds and args.full_witness:
        text += "\n" + "\n".join(f"  ({a}, {b})" for a, b in v.witness_pairs())
    _emit(args, _verdict_data(v, args.full_witness), text)
    return HOLDS if v.holds else FAILS


def cmd_classify(args) -> int:
    c = parse_context(args.context)
    flags = classify(c).as_dict()
    text = "  ".join(f"{k} {'yes' if flags[k] else 'no'}" for k in Classification.FLAGS)
    _emit(args, {"context": pretty_context(c), **flags}, text)
    return HOLDS


def cmd_solution(args) -> int:
    defs = _definitions(args)
    body = parse_context(args.body)
    p, q = _process(args.p, defs), _process(args.q, defs)
    spec = SystemSpec.for_variant(body, args.variant)
    try:
        report = unique_solution(spec, p, q, max_states=args.max_states)
    except HypothesisFailed as exc:
        report = exc.report
    lines = [f"theorem: {report.theorem}"]
    lines += [f"  {name}: {'pass' if ok else 'FAIL'}" for name, ok in report.hypothesis_checks.items()]
    if report.conclusion is None:
        lines.append("conclusion: not asserted (hypotheses failed)")
    else:
        lines.append(f"conclusion: {report.conclusion.explain()}")
    data = {
        "theorem": report.theorem,
        "hypotheses": report.hypothesis_checks,
        "conclusion": None if report.conclusion is None else _verdict_data(report.conclusion, False),
    }
    _emit(args, data, "\n".join(lines))
    return HOLDS if report.guarantee_met else FAILS


def cmd_suite(args) -> int:
    cfg = RunConfig(
        max_states=args.max_states,
        seed=args.seed,
        cases=args.cases,
        depth=args.depth,
        output="json" if args.json else "text",
    )
    result = run_suite(cfg, args.only)
    lines = [
        f"{'ok ' if r.ok else 'FAIL'} {r.name}: {r.passed}/{r.total} passed, {r.skipped} skipped"
        for r in result.properties
    ]
    for r in result.properties:
        lines += [f"  {r.name} failure: {f}" for f in r.failures]
    lines.append("all properties passed" if result.ok else "some properties failed")
    _emit(args, result.as_dict(), "\n".join(lines))
    return HOLDS if result.ok else FAILS


# ---------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-states", type=int, default=argparse.SUPPRESS, help="state budget per LTS")
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="machine-readable output")
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed")
    common.add_argument("-f", "--file", default=argparse.SUPPRESS, help="definition file (agent NAME = proc;)")

    parser = argparse.ArgumentParser(prog="ccs", description="CCS transitions, equivalences and unique solutions", parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("parse", parents=[common], help="parse and pretty-print a process")
    sp.add_argument("expr")
    sp.set_defaults(func=cmd_parse)

    sp = sub.add_parser("trans", parents=[common], help="list the transitions of a process")
    sp.add_argument("target", nargs="+", metavar="FILE NAME | EXPR")
    sp.set_defaults(func=cmd_trans)

    sp = sub.add_parser("lts", parents=[common], help="explore the state space of a process")
    sp.add_argument("target", nargs="+", metavar="FILE NAME | EXPR")
    sp.add_argument("--dot", action="store_true", help="print Graphviz DOT")
    sp.set_defaults(func=cmd_lts)

    for name, relations, helptext in (
        ("eq", EQUIVALENCES, "decide an equivalence"),
        ("pre", PREORDERS, "decide a preorder"),
    ):
        sp = sub.add_parser(name, parents=[common], help=helptext)
        sp.add_argument("relation", choices=relations)
        sp.add_argument("p")
        sp.add_argument("q")
        sp.add_argument("--full-witness", action="store_true", help="print the whole witness relation")
        sp.set_defaults(func=cmd_relation)

    sp = sub.add_parser("classify", parents=[common], help="classify a context (use _ for the hole)")
    sp.add_argument("context")
    sp.set_defaults(func=cmd_classify)

    sp = sub.add_parser("solution", parents=[common], help="check a unique-solution theorem instance")
    sp.add_argument("--body", required=True, help="equation or contraction body, _ for the variable")
    sp.add_argument("--variant", required=True, choices=sorted(VARIANTS))
    sp.add_argument("p")
    sp.add_argument("q")
    sp.set_defaults(func=cmd_solution)

    sp = sub.add_parser("suite", parents=[common], help="run the randomised property suites")
    sp.add_argument("--cases", type=int, default=200)
    sp.add_argument("--depth", type=int, default=3)
    sp.add_argument("--only", nargs="*", help="property name prefixes to run")
    sp.set_defaults(func=cmd_suite)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return ERROR if exc.code else HOLDS
    args.max_states = getattr(args, "max_states", DEFAULT_MAX_STATES)
    args.json = getattr(args, "json", False)
    args.seed = getattr(args, "seed", 0)
    args.file = getattr(args, "file", None)
    try:
        return args.func(args)
    except (CCSError, UsageError, OSError, ValueError) as exc:
        if args.json:
            print(json.dumps({"error": type(exc).__name__, "message": str(exc)}, sort_keys=True))
        else:
            print(f"ccs: error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())
