"""Command-line front end.

Exit codes: 0 success, 1 configuration error, 2 instance error.
"""

from __future__ import annotations

import argparse
import glob
import sys

from .driver import ConfigError, RunConfig
from .harness import ExperimentSpec, InstanceError, run_experiment


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse defaults to exit code 2
        self.exit(1, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="sopkit", description="SOP solver benchmark harness")
    p.add_argument("--instance", action="append", required=True,
                   help="instance file path or glob (repeatable)")
    p.add_argument("--algorithm", default="acs",
                   choices=["acs", "acs-sa", "eacs", "eacs-sa"])
    p.add_argument("--local-search", default="none",
                   choices=["none", "sop3", "sop3-sa"])
    p.add_argument("--time-limit", type=float, default=None, metavar="SEC")
    p.add_argument("--iterations", type=int, default=None, metavar="K")
    p.add_argument("--runs", type=int, default=1, help="replications per instance")
    p.add_argument("--seed", type=int, default=0, help="base seed; run r uses seed+r")
    p.add_argument("--jobs", type=int, default=1, help="concurrent replications")
    p.add_argument("--ants", type=int, default=10)
    p.add_argument("--beta", type=float, default=0.5)
    p.add_argument("--rho", type=float, default=0.1)
    p.add_argument("--psi", type=float, default=0.01)
    p.add_argument("--q0", type=float, default=None,
                   help="exploitation threshold; default (n-20)/n")
    p.add_argument("--lambda", dest="lam", type=float, default=0.9999,
                   help="colony cooling factor")
    p.add_argument("--gamma", type=float, default=0.1,
                   help="colony initial worse-acceptance probability")
    p.add_argument("--lambda-ls", dest="lam_ls", type=float, default=0.99)
    p.add_argument("--gamma-ls", dest="gamma_ls", type=float, default=0.1)
    p.add_argument("--ls-gate", type=float, default=0.2)
    p.add_argument("--candidate-size", type=int, default=25)
    p.add_argument("--colony-sample", type=int, default=1000,
                   help="random routes for the colony temperature calibration")
    p.add_argument("--ls-sample", type=int, default=100_000,
                   help="move deltas for the LS temperature calibration")
    p.add_argument("--output", default=None, metavar="DIR")
    p.add_argument("--format", dest="fmt", default="csv", choices=["csv", "json"])
    p.add_argument("--trace", action="store_true", help="write per-run trace files")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    paths: list[str] = []
    for pattern in args.instance:
        matched = sorted(glob.glob(pattern))
        paths.extend(matched if matched else [pattern])
    config = RunConfig(
        algorithm=args.algorithm, local_search=args.local_search,
        iterations=args.iterations, time_limit=args.time_limit, seed=args.seed,
        ants=args.ants, beta=args.beta, psi=args.psi, rho=args.rho, q0=args.q0,
        candidate_size=args.candidate_size, lam=args.lam, gamma=args.gamma,
        lam_ls=args.lam_ls, gamma_ls=args.gamma_ls, ls_gate=args.ls_gate,
        colony_sample=args.colony_sample, ls_sample=args.ls_sample)
    try:
        config.validate()
        spec = ExperimentSpec(instances=paths, config=config, runs=args.runs,
                              output_dir=args.output, fmt=args.fmt,
                              jobs=args.jobs, trace=args.trace)
    except (ConfigError, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 1
    try:
        rows, _records = run_experiment(spec)
    except InstanceError as exc:
        print(f"instance error: {exc}", file=sys.stderr)
        return 2
    header = f"{'instance':<20} {'algorithm':<18} {'mean':>12} {'std':>10} {'best':>10} {'iters':>10}"
    print(header)
    for row in rows:
        print(f"{row.instance:<20} {row.algorithm:<18} {row.mean_cost:>12.1f} "
              f"{row.std_cost:>10.1f} {row.best_cost:>10} {row.mean_iterations:>10.1f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
