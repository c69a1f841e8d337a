"""Command-line front end.

Exit codes: 0 success, 1 error-severity violations, 2 unreadable or invalid
input, 3 insufficient causal information, 64 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import accountability as acc
from .causality import CauseResult, CauseSource, cause_results, resolve_causes
from .checks import Mode, check_all, has_errors
from .dsl import ScenarioSyntaxError, parse_scenario, resolve
from .errors import CausalityError, MissingStsError, ModelError, UnknownEntityError
from .model import Model
from .relations import constructed, informed, missed_by_ego, responsible

EXIT_OK, EXIT_VIOLATIONS, EXIT_INPUT, EXIT_NO_CAUSES, EXIT_USAGE = 0, 1, 2, 3, 64


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="acctmodel", description="Evaluate accountability notions over .acct scenarios.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name: str, help: str, strict: bool = False) -> argparse.ArgumentParser:
        p = sub.add_parser(name, help=help)
        p.add_argument("file")
        p.add_argument("--format", choices=("text", "json"), default="text")
        if strict:
            p.add_argument("--strict", action="store_true", help="check schema equalities literally")
        return p

    add("validate", "run the schema checks", strict=True)
    q = add("query", "evaluate one accountability notion")
    q.add_argument("--notion", choices=acc.NOTIONS, required=True)
    q.add_argument("--component")
    q.add_argument("--event")
    add("report", "full report: checks, relations, notions, causes", strict=True)
    c = add("causes", "explicit and computed causes of an event")
    c.add_argument("--event", required=True)
    c.add_argument("--minimal", action="store_true", help="include minimal cause sets")
    add("compare", "compare the three notions side by side")
    return parser


def _load(path: str) -> Model:
    with open(path, "rb") as fh:
        data = fh.read()
    return resolve(parse_scenario(data))


def _dump(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False)


def _list(xs) -> str:
    return "[" + ", ".join(sorted(xs)) + "]"


# -- commands ---------------------------------------------------------------


def cmd_validate(model: Model, args, out) -> int:
    mode = Mode.STRICT if args.strict else Mode.LENIENT
    violations = check_all(model, mode)
    if args.format == "json":
        print(_dump({
            "mode": mode.value,
            "scenario": model.name,
            "violations": [v.to_dict() for v in violations],
        }), file=out)
    else:
        for v in violations:
            print(v, file=out)
        errors = sum(v.severity.value == "error" for v in violations)
        print(f"{mode.value}: {errors} error(s), {len(violations) - errors} warning(s)", file=out)
    return EXIT_VIOLATIONS if has_errors(violations) else EXIT_OK


def _check_query_flags(args) -> None:
    notion = args.notion
    wanted = {acc.HALL: None, acc.LINDBERG: "component", acc.RACI: "event"}[notion]
    for flag in ("component", "event"):
        given = getattr(args, flag) is not None
        if given and flag != wanted:
            raise _UsageError(f"--{flag} is not valid with --notion {notion}")
        if not given and flag == wanted:
            raise _UsageError(f"--notion {notion} requires --{flag}")


def cmd_query(model: Model, args, out) -> int:
    notion = args.notion
    subject = None
    if notion == acc.HALL:
        result = acc.hall_accountable(model)
    elif notion == acc.LINDBERG:
        subject = args.component
        result = acc.lindberg_accountable(model, subject)
    else:
        subject = args.event
        if subject not in model.events:
            raise UnknownEntityError("event", subject)
        causes = resolve_causes(model, subject)
        if causes is None:
            print(f"no causal information for event {subject}", file=sys.stderr)
            return EXIT_NO_CAUSES
        result = acc.raci_accountable(model, subject, causes)
    if args.format == "json":
        print(_dump({"notion": notion, "subject": subject, "result": sorted(result)}), file=out)
    else:
        print(f"{notion}({subject or ''}) = {_list(result)}", file=out)
    return EXIT_OK


def _cause_dict(r: CauseResult, minimal: bool) -> dict:
    d = {"source": r.source.value, "causes": sorted(r.causes)}
    if r.source is CauseSource.COMPUTED:
        d["but_for"] = sorted(r.but_for)
        if minimal:
            d["minimal_sets"] = [sorted(s) for s in r.minimal_sets]
    return d


def _causes_block(model: Model, event: str, minimal: bool) -> dict:
    results = cause_results(model, event)
    conflict = len({r.causes for r in results}) > 1
    return {
        "event": event,
        "results": [_cause_dict(r, minimal) for r in results],
        "warnings": ["CAUSE-CONFLICT"] if conflict else [],
    }


def cmd_causes(model: Model, args, out) -> int:
    event = args.event
    if event not in model.events:
        raise UnknownEntityError("event", event)
    try:
        block = _causes_block(model, event, args.minimal)
    except CausalityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NO_CAUSES
    if not block["results"]:
        print(f"no causal information for event {event}", file=sys.stderr)
        return EXIT_NO_CAUSES
    if args.format == "json":
        print(_dump(block), file=out)
    else:
        print(f"event {event}", file=out)
        for r in block["results"]:
            print(f"{r['source']}: {_list(r['causes'])}", file=out)
            if "but_for" in r:
                print(f"  but-for: {_list(r['but_for'])}", file=out)
            for s in r.get("minimal_sets", []):
                print(f"  minimal: {_list(s)}", file=out)
        for w in block["warnings"]:
            print(f"WARNING {w}: explicit and computed causes disagree", file=out)
    return EXIT_OK


def _compare_text(report: acc.NotionReport, out) -> None:
    print(f"hall = {_list(report.hall)}", file=out)
    for c, ps in report.lindberg.items():
        print(f"lindberg({c}) = {_list(ps)}", file=out)
    for e, ps in report.raci.items():
        print(f"raci({e}) = {'unavailable' if ps is None else _list(ps)}", file=out)
    print("interfaces: " + ", ".join(f"{k}={'yes' if v else 'no'}" for k, v in sorted(report.interfaces.items())),
          file=out)
    for n in acc.NOTIONS:
        print(f"requires {n}: {', '.join(acc.REQUIRED_INTERFACES[n])}", file=out)
    for r in report.rows:
        flags = f" !{','.join(r.flags)}" if r.flags else ""
        print(f"{r.subject_kind} {r.subject}: notions={_list(r.notions)} principals={_list(r.principals)}{flags}",
              file=out)


def cmd_compare(model: Model, args, out) -> int:
    report = acc.compare_notions(model)
    if args.format == "json":
        print(_dump(report.to_dict()), file=out)
    else:
        _compare_text(report, out)
    return EXIT_OK


def build_report(model: Model, mode: Mode) -> dict:
    violations = check_all(model, mode)
    relations = {
        c: {
            "informed": sorted(informed(model, c)),
            "constructed": sorted(constructed(model, c)),
            "responsible": sorted(responsible(model, c)),
        }
        for c in sorted(model.components)
    }
    try:
        missed = sorted(missed_by_ego(model))
    except MissingStsError:
        missed = None
    causes = {}
    for e in sorted(model.events):
        try:
            causes[e] = _causes_block(model, e, minimal=True)
        except CausalityError as exc:
            causes[e] = {"event": e, "results": [], "warnings": [], "error": str(exc)}
    return {
        "scenario": model.name,
        "mode": mode.value,
        "violations": [v.to_dict() for v in violations],
        "relations": relations,
        "missed_by_ego": missed,
        "notions": acc.compare_notions(model).to_dict(),
        "causes": causes,
    }


def cmd_report(model: Model, args, out) -> int:
    mode = Mode.STRICT if args.strict else Mode.LENIENT
    data = build_report(model, mode)
    if args.format == "json":
        print(_dump(data), file=out)
    else:
        print(f"scenario {json.dumps(data['scenario'], ensure_ascii=False)} ({mode.value})", file=out)
        print("== violations", file=out)
        for v in check_all(model, mode):
            print(v, file=out)
        print("== relations", file=out)
        for c, rel in data["relations"].items():
            print(f"{c}: informed={_list(rel['informed'])} constructed={_list(rel['constructed'])} "
                  f"responsible={_list(rel['responsible'])}", file=out)
        print("== missed_by_ego", file=out)
        print("unavailable" if data["missed_by_ego"] is None else _list(data["missed_by_ego"]), file=out)
        print("== notions", file=out)
        _compare_text(acc.compare_notions(model), out)
        print("== causes", file=out)
        for e, block in data["causes"].items():
            if not block["results"]:
                print(f"{e}: unavailable", file=out)
            for r in block["results"]:
                mins = "; ".join(_list(s) for s in r.get("minimal_sets", []))
                extra = f" but-for={_list(r['but_for'])} minimal={mins or '-'}" if "but_for" in r else ""
                print(f"{e}: {r['source']} {_list(r['causes'])}{extra}", file=out)
            for w in block["warnings"]:
                print(f"{e}: WARNING {w}", file=out)
    return EXIT_VIOLATIONS if has_errors(check_all(model, mode)) else EXIT_OK


COMMANDS = {
    "validate": cmd_validate,
    "query": cmd_query,
    "report": cmd_report,
    "causes": cmd_causes,
    "compare": cmd_compare,
}


def main(argv: Sequence[str] | None = None, out=None) -> int:
    out = out or sys.stdout
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # usage errors and --help
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        if args.command == "query":
            _check_query_flags(args)
    except _UsageError as exc:
        print(f"acctmodel query: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    try:
        model = _load(args.file)
    except OSError as exc:
        print(f"error: cannot read {args.file}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_INPUT
    except ScenarioSyntaxError as exc:
        for e in exc.errors:
            print(f"{args.file}:{e}", file=sys.stderr)
        return EXIT_INPUT
    except ModelError as exc:
        for issue in exc.issues:
            print(f"{args.file}:{issue}", file=sys.stderr)
        return EXIT_INPUT
    try:
        return COMMANDS[args.command](model, args, out)
    except UnknownEntityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
