"""Time minimal-cause-set search against the number of component-mapped variables.

Each model is a disjunction of k independent "and" pairs, all true, so every
minimal cause set must flip one variable out of each pair: 2^(k/2) sets of
size k/2. That is close to the worst case for the size-ordered search.

    python3 scripts/cause_search_scaling.py --max-components 16
"""

import argparse
import time
from dataclasses import dataclass

from acctmodel.causality import And, Or, StructuralModel, Var, minimal_cause_sets


@dataclass
class Config:
    min_components: int = 2
    max_components: int = 16
    repeats: int = 3


def pairs_model(k):
    names = [f"X{i}" for i in range(k)]
    terms = tuple(And((Var(names[i]), Var(names[i + 1]))) for i in range(0, k - 1, 2))
    out = terms[0] if len(terms) == 1 else Or(terms)
    return StructuralModel(
        exogenous={n: True for n in names},
        equations={"OUT": out},
        event_map={"OUT": "EV"},
        component_map={n: f"C{n}" for n in names},
    )


def run(cfg: Config):
    print(f"{'components':>10} {'sets':>6} {'seconds':>9}")
    for k in range(cfg.min_components, cfg.max_components + 1, 2):
        sm = pairs_model(k)
        best = None
        for _ in range(cfg.repeats):
            t0 = time.perf_counter()
            sets = minimal_cause_sets(sm, "EV")
            dt = time.perf_counter() - t0
            best = dt if best is None else min(best, dt)
        assert len(sets) == 2 ** (k // 2)
        print(f"{k:>10} {len(sets):>6} {best:>9.4f}")


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--min-components", type=int, default=Config.min_components)
    ap.add_argument("--max-components", type=int, default=Config.max_components)
    ap.add_argument("--repeats", type=int, default=Config.repeats)
    args = ap.parse_args(argv)
    run(Config(args.min_components, args.max_components, args.repeats))


if __name__ == "__main__":
    main()
