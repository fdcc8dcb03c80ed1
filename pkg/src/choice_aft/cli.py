"""Command-line front end.

Exit codes: 0 success, 1 semantic error, 2 parse error, 3 resource cap.
"""
from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import (
    AssumptionViolation, ChoiceAftError, DialectError, ParseError, ResourceCapExceeded,
)
from .evaluation import is_model
from .groundedness import Notion, grounded
from .io import dumps, program_from_json, program_to_json
from .lattice import Pair
from .limits import using_limits
from .operators import OperatorKind, apply_ndao, d2c, ic_d
from .parser import parse_atom_list, parse_program
from .semantics import fixpoints, stable, supported_models
from .syntax import (
    ChoiceProgram, DisjunctiveProgram, format_atom, format_program, is_aggregate, is_convex,
    is_monotone, is_normal,
)

EXIT_OK, EXIT_SEMANTIC, EXIT_PARSE, EXIT_CAP = 0, 1, 2, 3


def load(path: str):
    text = Path(path).read_text(encoding="utf-8")
    if path.endswith(".json"):
        import json
        return program_from_json(json.loads(text))
    return parse_program(text)


def _choice(prog):
    return d2c(prog) if isinstance(prog, DisjunctiveProgram) else prog


def _kinds(arg):
    return [OperatorKind.parse(arg)] if arg else list(OperatorKind)


def _fmt_pairs(pairs):
    return [f"  {p}" for p in pairs] or ["  (none)"]


# ---------------------------------------------------------------- commands

def cmd_models(args, out):
    prog = _choice(load(args.file))
    models = supported_models(prog)
    fps = {k: fixpoints(k, prog, totals_only=args.totals_only, jobs=args.jobs)
           for k in _kinds(args.operator)}
    if args.json:
        out.write(dumps({
            "models": [x.to_json() for x in prog.signature.subsets() if is_model(x, prog)],
            "supported": [x.to_json() for x in models],
            "fixpoints": {k.value: [p.to_json() for p in v] for k, v in fps.items()},
        }))
        return EXIT_OK
    lines = ["supported models:"] + ([f"  {x}" for x in models] or ["  (none)"])
    for k, v in fps.items():
        lines.append(f"fixpoints ({k}):")
        lines += _fmt_pairs(v)
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_stable(args, out):
    prog = _choice(load(args.file))
    res = stable(args.operator, prog, args.flavor, totals_only=args.totals_only,
                 traces=args.traces, jobs=args.jobs)
    if args.json:
        out.write(dumps(res.to_json()))
        return EXIT_OK
    lines = [f"{res.flavor.value} stable fixpoints ({res.kind}):"]
    if not res.traces:
        lines += _fmt_pairs(res.pairs)
    else:
        for p in res.pairs:
            lo, up = res.traces[p]
            lines.append(f"  {p}")
            lines.append("    lower: " + " -> ".join(str(s) for s in lo.steps))
            lines.append("    upper: " + " -> ".join(str(s) for s in up.steps))
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_grounded(args, out):
    prog = _choice(load(args.file))
    x = parse_atom_list(args.set, prog.signature)
    rep = grounded(args.notion, x, prog)
    if args.json:
        out.write(dumps({"set": x.to_json(), **rep.to_json()}))
        return EXIT_OK
    if rep.holds:
        levels = ", ".join(f"{a}={l}" for a, l in rep.witness.kappa)
        out.write(f"{rep.notion.value}-grounded: yes\nlevels: {levels}\n")
    else:
        out.write(f"{rep.notion.value}-grounded: no\nblocking: {rep.blocking}\n")
    return EXIT_OK


def cmd_translate(args, out):
    prog = load(args.file)
    if not isinstance(prog, DisjunctiveProgram):
        raise DialectError("translate --d2c expects a disjunctive program")
    res = d2c(prog)
    out.write(dumps(program_to_json(res)) if args.json else format_program(res) + "\n")
    return EXIT_OK


def _parse_pair(text, sig):
    if ";" not in text:
        raise ParseError("pair must be written 'lower;upper'", 1, 1, text)
    lo, up = text.split(";", 1)
    return Pair(parse_atom_list(lo, sig), parse_atom_list(up, sig))


def cmd_eval(args, out):
    raw = load(args.file)
    prog = _choice(raw)
    pair = _parse_pair(args.pair, prog.signature)
    results = {}
    if isinstance(raw, DisjunctiveProgram):
        results["d"] = ic_d(raw, pair)
    for k in OperatorKind:
        if k is OperatorKind.GZ and not pair.is_consistent:
            results[k.value] = None
            continue
        results[k.value] = apply_ndao(k, prog, pair)
    if args.json:
        out.write(dumps({
            "pair": pair.to_json(),
            "images": {k: (None if v is None else v.to_json()) for k, v in results.items()},
            "fixpoint": {k: (None if v is None else v.contains(pair)) for k, v in results.items()},
        }))
        return EXIT_OK
    lines = [f"pair {pair}"]
    for k, v in results.items():
        name = k.upper()
        if v is None:
            lines.append(f"{name}: undefined at an inconsistent pair")
            continue
        fix = "fixpoint" if v.contains(pair) else "not a fixpoint"
        lines.append(f"{name} lower: {v.lower}")
        lines.append(f"{name} upper: {v.upper}")
        lines.append(f"{name}: {fix}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


def cmd_classify(args, out):
    prog = _choice(load(args.file))
    atoms = []
    for c in prog.atoms():
        atoms.append({"atom": format_atom(c), "monotone": is_monotone(c), "convex": is_convex(c)})
    info = {"normal": is_normal(prog), "aggregate": is_aggregate(prog), "atoms": atoms}
    if args.json:
        out.write(dumps(info))
        return EXIT_OK
    yn = {True: "yes", False: "no"}
    lines = [f"normal: {yn[info['normal']]}", f"aggregate: {yn[info['aggregate']]}", "atoms:"]
    width = max((len(a["atom"]) for a in atoms), default=0)
    for a in atoms:
        lines.append(f"  {a['atom']:<{width}}  monotone={yn[a['monotone']]} convex={yn[a['convex']]}")
    out.write("\n".join(lines) + "\n")
    return EXIT_OK


# ---------------------------------------------------------------- wiring

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="canonical JSON output")
    common.add_argument("--max-atoms", type=int, help="signature cap for exhaustive sweeps")
    common.add_argument("--max-interval", type=int, help="cap on free atoms in an interval")
    common.add_argument("--jobs", type=int, default=1, help="worker processes for sweeps")

    ap = argparse.ArgumentParser(prog="choice-aft", description=__doc__.splitlines()[0])
    sub = ap.add_subparsers(dest="command", required=True)
    kinds = [k.value for k in OperatorKind]

    p = sub.add_parser("models", parents=[common], help="supported models and fixpoints")
    p.add_argument("file")
    p.add_argument("--operator", choices=kinds)
    p.add_argument("--totals-only", action="store_true")
    p.set_defaults(func=cmd_models)

    p = sub.add_parser("stable", parents=[common], help="stable fixpoints")
    p.add_argument("file")
    p.add_argument("--operator", choices=kinds, required=True)
    p.add_argument("--flavor", choices=["minimal", "constructive"], default="constructive")
    p.add_argument("--totals-only", action="store_true")
    p.add_argument("--traces", action="store_true", help="print witness sequences")
    p.set_defaults(func=cmd_stable)

    p = sub.add_parser("grounded", parents=[common], help="groundedness of a set")
    p.add_argument("file")
    p.add_argument("--set", required=True, help="comma-separated atoms")
    p.add_argument("--notion", choices=[n.value for n in Notion], required=True)
    p.set_defaults(func=cmd_grounded)

    p = sub.add_parser("translate", parents=[common], help="translate a disjunctive program")
    p.add_argument("file")
    p.add_argument("--d2c", action="store_true", required=True)
    p.set_defaults(func=cmd_translate)

    p = sub.add_parser("eval", parents=[common], help="operator images at a pair")
    p.add_argument("file")
    p.add_argument("--pair", required=True, help='"lower;upper", e.g. "p;p,q"')
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("classify", parents=[common], help="program and atom classification")
    p.add_argument("file")
    p.set_defaults(func=cmd_classify)
    return ap


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    args = build_parser().parse_args(argv)
    caps = {}
    if args.max_atoms is not None:
        caps["max_sweep_atoms"] = args.max_atoms
    if args.max_interval is not None:
        caps["max_interval"] = args.max_interval
    try:
        with using_limits(**caps):
            return args.func(args, out)
    except ParseError as exc:
        err.write(f"parse error: {exc}\n")
        return EXIT_PARSE
    except ResourceCapExceeded as exc:
        err.write(f"resource cap: {exc}\n")
        return EXIT_CAP
    except AssumptionViolation as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SEMANTIC
    except (ChoiceAftError, OSError) as exc:
        err.write(f"error: {exc}\n")
        return EXIT_SEMANTIC


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()
