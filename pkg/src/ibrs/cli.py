"""Command-line entry point.

Every subcommand prints a JSON report (or a plain-text table with
``--pretty``) and exits with 0 on success, 1 when the computed verdict is
negative, and 2 on bad input.
"""
from __future__ import annotations

import argparse
import hashlib
import json
import math
import sys
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .errors import IbrsError
from .fixtures import NETLISTS, STRUCTURES, TABLES, sample_diagram
from .structure import Structure, structure_from_json
from .table import MuTable, fmt_set, parse_set, table_from_json

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2


class _Inputs:
    """Loads input files (or fixture names) and remembers their hashes."""

    def __init__(self):
        self.hashes: dict[str, str] = {}

    def text(self, label: str, ref: str, fixtures: dict[str, Callable[[], Any]] | None = None,
             dump: Callable[[Any], str] | None = None) -> str:
        p = Path(ref)
        if p.is_file():
            data = p.read_text()
        elif fixtures is not None and ref in fixtures:
            data = dump(fixtures[ref]())
        else:
            raise IbrsError(f"{label}: no such file or fixture {ref!r}")
        self.hashes[label] = "sha256:" + hashlib.sha256(data.encode()).hexdigest()
        return data

    def structure(self, ref: str) -> Structure:
        return structure_from_json(self.text("structure", ref, STRUCTURES, lambda s: s.to_json()))

    def table(self, ref: str) -> MuTable:
        return table_from_json(self.text("table", ref, TABLES, lambda t: t.to_json()))

    def netlist(self, ref: str):
        from .circuit import netlist_from_json
        return netlist_from_json(self.text("netlist", ref, NETLISTS, lambda d: json.dumps(d, sort_keys=True)))

    def ibrs(self, ref: str):
        from .interpretations import ibrs_from_json
        fx = {"paper": sample_diagram, "paper-ibrs": sample_diagram, "sample-diagram": sample_diagram}
        return ibrs_from_json(self.text("ibrs", ref, fx, lambda d: json.dumps(d, sort_keys=True)))


def _report(args, inputs: _Inputs, defaults: dict, result: Any) -> dict:
    return {"tool": "ibrs", "version": __version__, "command": args.command,
            "inputs": inputs.hashes, "defaults": defaults, "result": result}


def _emit(args, report: dict, pretty: Callable[[dict], str] | None = None) -> None:
    if args.pretty:
        text = pretty(report["result"]) if pretty else _plain(report["result"])
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(json.dumps(report, sort_keys=True, indent=2, ensure_ascii=False) + "\n")


def _plain(obj: Any, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(obj, dict):
        lines = []
        for k, v in obj.items():
            if isinstance(v, (dict, list)) and v and not all(isinstance(x, (str, int, float)) for x in v):
                lines.append(f"{pad}{k}:")
                lines.append(_plain(v, indent + 1))
            else:
                lines.append(f"{pad}{k}: {_scalar(v)}")
        return "\n".join(lines)
    if isinstance(obj, list):
        return "\n".join(_plain(x, indent) if isinstance(x, (dict, list)) else f"{pad}- {x}" for x in obj)
    return f"{pad}{_scalar(obj)}"


def _scalar(v: Any) -> str:
    if isinstance(v, list):
        return "{" + ", ".join(str(x) for x in v) + "}"
    if isinstance(v, dict):
        return json.dumps(v, ensure_ascii=False, sort_keys=True)
    return str(v)


def _set(text: str) -> list[str]:
    return sorted(parse_set(text))


# ---------------------------------------------------------------- commands


def cmd_mu(args, inp: _Inputs) -> int:
    from .validity import mu, mu_attacking

    s = inp.structure(args.structure)
    X = _set(args.set)
    if args.eta is not None:
        eta = {frozenset(X): frozenset(_set(args.eta))}
        val = mu_attacking(s, eta, X)
    else:
        val = mu(s, X)
    result = {"set": X, "mu": sorted(val)}
    _emit(args, _report(args, inp, {"eta": args.eta}, result),
          lambda r: f"mu({{{fmt_set(r['set'])}}}) = {{{fmt_set(r['mu'])}}}")
    return EXIT_OK


def cmd_valid(args, inp: _Inputs) -> int:
    from .validity import valid_x_impl_y, valid_x_to_y

    s = inp.structure(args.structure)
    X = _set(args.x)
    Y = _set(args.y) if args.y is not None else X
    fn = valid_x_impl_y if args.kind == "ximply" else valid_x_to_y
    v = fn(s, X, Y)
    result = {"X": X, "Y": Y, "kind": args.kind, "valid": sorted(v.valid),
              "invalid": sorted(a.id for a in s.arrows if a.id not in v.valid)}
    _emit(args, _report(args, inp, {"kind": args.kind}, result),
          lambda r: f"valid: {{{', '.join(r['valid'])}}}\ninvalid: {{{', '.join(r['invalid'])}}}")
    return EXIT_OK


def cmd_smooth(args, inp: _Inputs) -> int:
    from .smoothness import is_classically_smooth, is_essentially_smooth, is_sqsubseteq, is_totally_smooth
    from .table import powerset

    s = inp.structure(args.structure)
    if args.kind == "classical":
        fam = [_set(x) for x in args.set] if args.set else powerset(s.carrier)
        v = is_classically_smooth(s, fam)
        sets = [sorted(x) for x in fam]
    elif args.kind == "sub":
        if not args.set or args.sup is None:
            raise IbrsError("--kind sub needs --set X and --sup X'")
        v = is_sqsubseteq(s, _set(args.set[0]), _set(args.sup))
        sets = [_set(args.set[0]), _set(args.sup)]
    else:
        fn = is_totally_smooth if args.kind == "total" else is_essentially_smooth
        targets = [_set(x) for x in args.set] if args.set else [sorted(x) for x in powerset(s.carrier)]
        per = []
        v = None
        for X in targets:
            r = fn(s, X)
            per.append({"set": X, **r.to_dict()})
            if v is None and not r.holds:
                v = r
        holds = all(p["holds"] for p in per)
        result = {"kind": args.kind, "holds": holds, "sets": per}
        _emit(args, _report(args, inp, {"kind": args.kind}, result),
              lambda r: "\n".join(f"{{{fmt_set(p['set'])}}}: {'yes' if p['holds'] else 'no'}"
                                  + (f"  witness {json.dumps(p['witness'])}" if p["witness"] else "")
                                  for p in r["sets"]))
        return EXIT_OK if holds else EXIT_FAIL
    result = {"kind": args.kind, "sets": sets, **v.to_dict()}
    _emit(args, _report(args, inp, {"kind": args.kind}, result))
    return EXIT_OK if v.holds else EXIT_FAIL


def cmd_represent(args, inp: _Inputs) -> int:
    from .representation import build_level2_attacking, build_level3_essentially_smooth

    t = inp.table(args.table)
    if args.mode == "level2":
        s, _ = build_level2_attacking(t)
    else:
        s = build_level3_essentially_smooth(t)
    if args.out:
        Path(args.out).write_text(s.to_json())
    result = {"mode": args.mode, "copies": len(s.copies), "arrows": len(s.arrows), "level": s.max_level,
              "out": args.out}
    if not args.out:
        result["structure"] = s.to_dict()
    _emit(args, _report(args, inp, {"mode": args.mode}, result))
    return EXIT_OK


def cmd_search(args, inp: _Inputs) -> int:
    from .representation import search_level2_totally_smooth

    t = inp.table(args.table)
    r = search_level2_totally_smooth(t, args.max_copies, args.max_arrow_copies,
                                     require_total=not args.no_total, ceiling=args.ceiling)
    d = r.to_dict()
    defaults = dict(d["bounds"], jobs=args.jobs)
    _emit(args, _report(args, inp, defaults, d),
          lambda x: f"{x['result']} (bounds {json.dumps(x['bounds'], sort_keys=True)}, "
                    f"{x['copy_types_evaluated']} copy types evaluated)")
    return EXIT_OK if r.found else EXIT_FAIL


def cmd_props(args, inp: _Inputs) -> int:
    from .properties import PROPERTIES, check_family_closure, check_property, CLOSURES

    t = inp.table(args.table)
    props = args.property or list(PROPERTIES)
    verdicts = [check_property(t, p).to_dict() for p in props]
    closures = [check_family_closure(t, c).to_dict() for c in CLOSURES] if not args.property else []
    result = {"properties": verdicts, "closures": closures}

    def pretty(r):
        rows = [f"{v['property']:<12} {'holds' if v['holds'] else 'fails'}"
                + (f"  witness {json.dumps(v['witness'], ensure_ascii=False)}" if v["witness"] else "")
                + (f"  ({v['skipped_instances']} skipped)" if v["skipped_instances"] else "")
                for v in r["properties"] + r["closures"]]
        return "\n".join(rows)

    _emit(args, _report(args, inp, {}, result), pretty)
    if args.property and not all(v["holds"] for v in verdicts):
        return EXIT_FAIL
    return EXIT_OK


def cmd_verify_row(args, inp: _Inputs) -> int:
    from .properties import verify_implication

    r = verify_implication(args.row, args.size, args.mode, args.families, args.seed, args.samples)
    defaults = {"size": args.size, "mode": args.mode, "families": args.families, "seed": args.seed,
                "samples": args.samples, "jobs": args.jobs}
    _emit(args, _report(args, inp, defaults, r),
          lambda x: f"row {x['row']}: {x['statement']}\n{x['verdict']}")
    if r["kind"] == "positive":
        return EXIT_OK if r["counterexample"] is None else EXIT_FAIL
    if r["kind"] == "negative":
        return EXIT_OK if r.get("counterexample") is not None and "does not" not in r["verdict"] else EXIT_FAIL
    return EXIT_OK


def _oracle(args, inp: _Inputs):
    from .logic import Language, as_consequence, classical

    lang = Language([a.strip() for a in args.lang.split(",") if a.strip()])
    if args.structure:
        return lang, as_consequence(inp.structure(args.structure), lang)
    if args.table:
        return lang, as_consequence(inp.table(args.table), lang)
    return lang, classical(lang)


def cmd_logic(args, inp: _Inputs) -> int:
    from .logic import parse_formula

    lang, c = _oracle(args, inp)
    theory = [parse_formula(t) for t in (args.theory or [])]
    closure = c.consequences(theory)
    result = {"language": list(lang.atoms), "theory": [str(f) for f in theory],
              "consequences": [str(f) for f in closure],
              "models": sorted(lang.names(lang.theory_mask(theory))),
              "preferred_models": sorted(lang.names(c.close_mask(lang.theory_mask(theory))))}
    code = EXIT_OK
    if args.query is not None:
        result["query"] = str(parse_formula(args.query))
        result["entailed"] = c.entails(theory, args.query)
        code = EXIT_OK if result["entailed"] else EXIT_FAIL
    _emit(args, _report(args, inp, {}, result))
    return code


def cmd_rules(args, inp: _Inputs) -> int:
    from .logic import RULES, check_rule

    lang, c = _oracle(args, inp)
    rules = args.rule or list(RULES)
    verdicts = [check_rule(c, r).to_dict() for r in rules]
    result = {"language": list(lang.atoms), "rules": verdicts}
    _emit(args, _report(args, inp, {}, result),
          lambda r: "\n".join(f"{v['property']:<10} {'holds' if v['holds'] else 'fails'}"
                              + (f"  witness {json.dumps(v['witness'])}" if v["witness"] else "")
                              for v in r["rules"]))
    if args.rule and not all(v["holds"] for v in verdicts):
        return EXIT_FAIL
    return EXIT_OK


def cmd_interp(args, inp: _Inputs) -> int:
    from . import interpretations as it

    g = inp.ibrs(args.ibrs or args.fixture)
    defaults: dict[str, Any] = {"alg": args.alg}
    if args.alg == "modal":
        if args.world:
            value = it.modal_box_eval(g, args.world, args.atom)
            result = {"world": args.world, "formula": f"□{args.atom}", "holds": value}
        else:
            value = it.modal_box_valid(g, args.atom)
            result = {"minimal_points": sorted(g.minimal_points()), "formula": f"□{args.atom}", "holds": value}
    elif args.alg == "nm":
        value = it.nm_consequence(g, args.premise, args.conclusion)
        result = {"premise": args.premise, "conclusion": args.conclusion, "holds": value}
    elif args.alg == "arg":
        lab = it.argument_labelling(g)
        result = {"winning": sorted(it.winning_arguments(g)),
                  "labelling": {str(r): v for r, v in sorted(lab.items(), key=lambda kv: (kv[0].kind, kv[0].name))}}
        value = True
    elif args.alg == "int":
        r0 = it.rho0(g)
        value = it.intuitionistic_eval(g, args.premise, args.conclusion)
        result = {"rho0": sorted(list(p) for p in r0), "premise": args.premise,
                  "conclusion": args.conclusion, "holds": value}
    else:
        if not args.distances:
            raise IbrsError("--alg cf needs --distances FILE")
        data = json.loads(inp.text("distances", args.distances))
        dist = {(d["from"], d["to"]): d["distance"] for d in data}
        radius = math.inf if args.radius in ("inf", "infinity") else float(args.radius)
        defaults["radius"] = args.radius
        value = it.counterfactual_eval(g, dist, args.world, args.premise, args.conclusion, radius)
        result = {"world": args.world, "premise": args.premise, "conclusion": args.conclusion,
                  "radius": args.radius, "holds": value}
    _emit(args, _report(args, inp, defaults, result))
    return EXIT_OK if value else EXIT_FAIL


def cmd_circuit(args, inp: _Inputs) -> int:
    from .circuit import default_detection_limit, diagram_consequence, run

    n = inp.netlist(args.netlist)
    limit = args.detection_limit or default_detection_limit(n)
    defaults = {"horizon": args.horizon, "detection_limit": limit}
    if args.alpha is not None or args.beta is not None:
        alpha = _assignment(args.alpha or "")
        beta = _assignment(args.beta or "")
        value = diagram_consequence(n, alpha, beta, limit)
        result = {"alpha": alpha, "beta": beta, "holds": value}
        _emit(args, _report(args, inp, defaults, result))
        return EXIT_OK if value else EXIT_FAIL
    tr = run(n, args.horizon, detection_limit=limit)
    result = tr.to_dict()

    def pretty(_r):
        c = tr.classification_dict()
        tail = ", ".join(f"{k}={v}" for k, v in c.items() if k not in ("kind", "state"))
        return tr.table() + f"{c['kind']}" + (f" ({tail})" if tail else "") + "\n"

    _emit(args, _report(args, inp, defaults, result), pretty)
    return EXIT_OK


def _assignment(text: str) -> dict[str, bool]:
    out = {}
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        name, eq, val = part.partition("=")
        if not eq or val.strip().upper() not in ("T", "F", "1", "0", "TRUE", "FALSE"):
            raise IbrsError(f"bad assignment {part!r}; use NAME=T or NAME=F")
        out[name.strip()] = val.strip().upper() in ("T", "1", "TRUE")
    return out


FIXTURE_NAMES = sorted(list(STRUCTURES) + list(TABLES) + list(NETLISTS) + ["paper-ibrs", "sample-diagram"])


def cmd_fixtures(args, inp: _Inputs) -> int:
    if args.list or not args.name:
        sys.stdout.write(json.dumps({"fixtures": FIXTURE_NAMES}, indent=2) + "\n")
        return EXIT_OK
    name = args.name
    if name in STRUCTURES:
        text = STRUCTURES[name]().to_json()
    elif name in TABLES:
        text = TABLES[name]().to_json()
    elif name in NETLISTS:
        text = json.dumps(NETLISTS[name](), sort_keys=True, indent=2) + "\n"
    elif name in ("paper-ibrs", "paper", "sample-diagram"):
        text = json.dumps(sample_diagram(), sort_keys=True, indent=2) + "\n"
    else:
        raise IbrsError(f"unknown fixture {name!r}; known: {', '.join(FIXTURE_NAMES)}")
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


# ---------------------------------------------------------------- parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        raise SystemExit(EXIT_INPUT)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--pretty", action="store_true", help="human-readable output instead of JSON")
    common.add_argument("--seed", type=int, default=0, help="seed for sampled modes")
    common.add_argument("--jobs", type=int, default=1, help="worker count (recorded; runs are single-process)")

    p = _Parser(prog="ibrs", description="Preferential structures with arrows on arrows.")
    p.add_argument("--version", action="version", version=f"ibrs {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(func=fn)
        return sp

    sp = add("mu", cmd_mu, "minimal elements of a set")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--set", required=True, help="comma-separated points")
    sp.add_argument("--eta", help="eta(X) for the attacking variant")

    sp = add("valid", cmd_valid, "valid arrows for X and Y")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--x", required=True)
    sp.add_argument("--y")
    sp.add_argument("--kind", choices=["xy", "ximply"], default="xy")

    sp = add("smooth", cmd_smooth, "smoothness checks")
    sp.add_argument("--structure", required=True)
    sp.add_argument("--kind", choices=["total", "essential", "classical", "sub"], default="essential")
    sp.add_argument("--set", action="append", help="set to check (repeatable); default: all subsets")
    sp.add_argument("--sup", help="X' for --kind sub")

    sp = add("represent", cmd_represent, "build a structure from a table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--mode", choices=["level2", "level3"], default="level2")
    sp.add_argument("--out")

    sp = add("search-l2ts", cmd_search, "bounded search for a level-2 totally smooth representation")
    sp.add_argument("--table", required=True)
    sp.add_argument("--max-copies", type=int, default=2)
    sp.add_argument("--max-arrow-copies", type=int, default=None)
    sp.add_argument("--no-total", action="store_true", help="drop the total smoothness requirement")
    sp.add_argument("--ceiling", type=int, default=10**7)

    sp = add("props", cmd_props, "algebraic properties of a table")
    sp.add_argument("--table", required=True)
    sp.add_argument("--property", action="append")

    sp = add("verify-row", cmd_verify_row, "brute-force one implication row")
    sp.add_argument("--row", required=True)
    sp.add_argument("--size", type=int, default=2)
    sp.add_argument("--mode", choices=["exhaustive", "filtered", "sampled"], default="exhaustive")
    sp.add_argument("--families", choices=["powerset", "all"], default="powerset")
    sp.add_argument("--samples", type=int, default=100_000)

    for name, fn, help_ in (("logic", cmd_logic, "nonmonotonic consequences of a theory"),
                            ("rules", cmd_rules, "check rule schemata")):
        sp = add(name, fn, help_)
        src = sp.add_mutually_exclusive_group()
        src.add_argument("--structure")
        src.add_argument("--table")
        sp.add_argument("--lang", required=True, help="comma-separated atoms")
        if name == "logic":
            sp.add_argument("--theory", action="append", help="formula (repeatable)")
            sp.add_argument("--query")
        else:
            sp.add_argument("--rule", action="append")

    sp = add("interp", cmd_interp, "read a labeled diagram")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--fixture", choices=["paper", "sample-diagram"])
    src.add_argument("--ibrs")
    sp.add_argument("--alg", choices=["modal", "nm", "arg", "int", "cf"], required=True)
    sp.add_argument("--world")
    sp.add_argument("--atom", default="q")
    sp.add_argument("--premise", default="p")
    sp.add_argument("--conclusion", default="q")
    sp.add_argument("--distances")
    sp.add_argument("--radius", default="2")

    sp = add("circuit", cmd_circuit, "simulate a gate network")
    sp.add_argument("--netlist", required=True)
    sp.add_argument("--horizon", type=int, default=64)
    sp.add_argument("--table", action="store_true", dest="pretty_table", help="same as --pretty")
    sp.add_argument("--detection-limit", type=int)
    sp.add_argument("--alpha", help="input assignment, e.g. In1=T,In2=F")
    sp.add_argument("--beta", help="output assignment, e.g. Out2=T")

    sp = add("fixtures", cmd_fixtures, "emit a built-in example")
    sp.add_argument("--name")
    sp.add_argument("--list", action="store_true")
    sp.add_argument("--out")
    return p


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if getattr(args, "pretty_table", False):
        args.pretty = True
    if getattr(args, "command", None) == "search-l2ts" and args.max_arrow_copies is None:
        args.max_arrow_copies = args.max_copies
    try:
        return args.func(args, _Inputs())
    except IbrsError as exc:
        sys.stderr.write(f"ibrs {args.command}: error: {exc}\n")
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError) as exc:
        sys.stderr.write(f"ibrs {args.command}: error: {exc}\n")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
