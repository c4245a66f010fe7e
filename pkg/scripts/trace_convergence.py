#!/usr/bin/env python3
"""Emit convergence traces comparing plain and annealing-assisted variants.

Runs the chosen algorithm pair on one instance with a shared seed list and
writes one trace CSV per run (iteration, best_cost, active_cost,
temperature), ready for plotting the best-so-far curves against each other.
"""

import argparse
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parent.parent / "src"))

from sopkit.driver import RunConfig, run
from sopkit.harness import write_trace
from sopkit.instance import load_instance, validate


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("instance", type=Path)
    ap.add_argument("--algorithms", nargs="*", default=["acs", "acs-sa"])
    ap.add_argument("--local-search", default="none",
                    choices=["none", "sop3", "sop3-sa"])
    ap.add_argument("--iterations", type=int, default=5000)
    ap.add_argument("--seeds", type=int, nargs="*", default=[0, 1, 2])
    ap.add_argument("--lambda", dest="lam", type=float, default=0.9999)
    ap.add_argument("--gamma", type=float, default=0.1)
    ap.add_argument("--output", default="traces")
    args = ap.parse_args()

    inst = load_instance(args.instance)
    report = validate(inst)
    if report.violations:
        raise SystemExit(f"invalid instance: {report.violations}")
    out = Path(args.output)
    out.mkdir(parents=True, exist_ok=True)
    for algorithm in args.algorithms:
        for seed in args.seeds:
            config = RunConfig(algorithm=algorithm, local_search=args.local_search,
                               iterations=args.iterations, seed=seed,
                               lam=args.lam, gamma=args.gamma)
            result = run(config, inst)
            path = out / f"{inst.name}_{algorithm}_{seed}.trace.csv"
            write_trace(path, result.trace)
            print(f"{path}  best {result.best.cost}  "
                  f"worse-acceptances {result.worse_acceptances}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
