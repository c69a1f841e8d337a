"""Show how the three notions react as a scenario fills more interfaces.

The hall, lindberg and raci scenarios add correction actions and then causal
facts on top of the same observations. For each file this prints which
interfaces are filled and what every notion yields.
"""

import argparse

from acctmodel import load, scenario_path
from acctmodel.accountability import NOTIONS, REQUIRED_INTERFACES, compare_notions

DEFAULT = ["uber-hall", "uber-lindberg", "uber-raci"]


def fmt(ps):
    return "unavailable" if ps is None else "{" + ", ".join(sorted(ps)) + "}"


def describe(name):
    rep = compare_notions(load(scenario_path(f"{name}.acct")))
    filled = sorted(k for k, v in rep.interfaces.items() if v)
    print(f"== {name}")
    print(f"   interfaces: {', '.join(filled) or '-'}")
    for n in NOTIONS:
        missing = [i for i in REQUIRED_INTERFACES[n] if not rep.interfaces.get(i)]
        print(f"   {n:<9} needs {', '.join(REQUIRED_INTERFACES[n])}"
              + (f"  (missing: {', '.join(missing)})" if missing else ""))
    print(f"   hall = {fmt(rep.hall)}")
    for c, ps in rep.lindberg.items():
        if ps:
            print(f"   lindberg({c}) = {fmt(ps)}")
    for e, ps in rep.raci.items():
        print(f"   raci({e}) = {fmt(ps)}")
    flagged = [f"{r.subject}: {','.join(r.flags)}" for r in rep.rows if r.flags]
    if flagged:
        print(f"   flags: {'; '.join(flagged)}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("scenarios", nargs="*", default=DEFAULT, help="bundled scenario names")
    args = ap.parse_args(argv)
    for name in args.scenarios:
        describe(name)


if __name__ == "__main__":
    main()
