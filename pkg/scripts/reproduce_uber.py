"""Reproduce the accountability results for the self-driving-car crash scenarios.

Loads the bundled scenarios and prints each computed set next to the value
the worked example states for it. Exits non-zero if any value differs.

    python3 scripts/reproduce_uber.py
    python3 scripts/reproduce_uber.py --json
"""

import argparse
import json
import sys
from dataclasses import dataclass

from acctmodel import load, scenario_path
from acctmodel.accountability import hall_accountable, lindberg_accountable, raci_accountable
from acctmodel.causality import resolve_causes
from acctmodel.relations import informed, missed_by_ego


@dataclass(frozen=True)
class Expectation:
    scenario: str
    label: str
    expected: frozenset


def compute(label, model):
    kind, _, arg = label.partition(":")
    if kind == "hall":
        return hall_accountable(model)
    if kind == "informed":
        return informed(model, arg)
    if kind == "lindberg":
        return lindberg_accountable(model, arg)
    if kind == "raci":
        return raci_accountable(model, arg, resolve_causes(model, arg) or ())
    if kind == "missed_by_ego":
        return missed_by_ego(model)
    if kind == "causes":
        return resolve_causes(model, arg) or frozenset()
    raise ValueError(label)


EXPECTATIONS = [
    Expectation("uber-hall", "informed:AI", frozenset({"UBER"})),
    Expectation("uber-hall", "informed:CHASSIS", frozenset({"DRIVER", "UBER"})),
    Expectation("uber-hall", "hall", frozenset({"AI", "CHASSIS"})),
    Expectation("uber-lindberg", "lindberg:AI", frozenset({"UBER"})),
    Expectation("uber-lindberg", "lindberg:CHASSIS", frozenset({"DRIVER"})),
    Expectation("uber-raci", "missed_by_ego", frozenset({"DETECT_PEDESTRIAN"})),
    Expectation("uber-raci", "causes:HIT_PEDESTRIAN", frozenset({"AI", "CHASSIS"})),
    Expectation("uber-raci", "raci:HIT_PEDESTRIAN", frozenset({"UBER"})),
    Expectation("lidar-structural", "causes:HIT_PEDESTRIAN", frozenset({"LIDAR"})),
]


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--json", action="store_true", help="emit results as JSON")
    args = ap.parse_args(argv)

    models = {}
    rows = []
    for exp in EXPECTATIONS:
        if exp.scenario not in models:
            models[exp.scenario] = load(scenario_path(f"{exp.scenario}.acct"))
        got = compute(exp.label, models[exp.scenario])
        rows.append((exp, frozenset(got)))

    if args.json:
        print(json.dumps([
            {"scenario": e.scenario, "query": e.label, "expected": sorted(e.expected),
             "computed": sorted(g), "match": g == e.expected}
            for e, g in rows
        ], indent=2))
    else:
        width = max(len(e.scenario) + len(e.label) for e, _ in rows) + 3
        for e, g in rows:
            mark = "ok " if g == e.expected else "DIFF"
            print(f"{mark} {(e.scenario + ' / ' + e.label):<{width}} {sorted(g)}  (expected {sorted(e.expected)})")
    return 0 if all(g == e.expected for e, g in rows) else 1


if __name__ == "__main__":
    sys.exit(main())
