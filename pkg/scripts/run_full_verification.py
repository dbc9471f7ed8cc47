#!/usr/bin/env python3
"""Run every property suite at full scale and print a summary table.

This mirrors the acceptance configuration (higher trial counts and a dim
mix) rather than the CLI defaults; use --quick for a fast smoke pass.
"""

import argparse
import json
import sys

from qig import verify

FULL = {
    "standardness": dict(trials=200, dims=(2, 3, 4)),
    "operator-monotone": dict(trials=100, dims=(2, 3, 4)),
    "scalar-gibi": dict(trials=200, dims=(2, 3, 4)),
    "skew-identity": dict(trials=200, dims=(2, 3, 4, 5)),
    "hessian": dict(trials=100, dims=(2, 3, 4)),
    "lemma-commuting": dict(trials=50, dims=(2, 3, 4)),
    "lemma-cross": dict(trials=50, dims=(2, 3, 4)),
    "monotonicity": dict(trials=500, dims=(2, 3, 4)),
    "concavity": dict(trials=500, dims=(2, 3, 4)),
    "det-uncertainty": dict(trials=200, dims=(2, 3, 4)),
    "oracle-equivalence": dict(trials=100, dims=(2, 3, 4, 5)),
    "wyd-consistency": dict(trials=100, dims=(2, 3, 4)),
    "renyi-limit": dict(trials=20, dims=(2, 3, 4)),
}


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--seed", type=int, default=17)
    parser.add_argument("--quick", action="store_true", help="cap every suite at 10 trials")
    parser.add_argument("--report", help="also write the reports as JSON to this path")
    args = parser.parse_args()

    reports = []
    print(f"{'suite':22s} {'trials':>6s} {'min margin':>13s} {'max residual':>13s} {'fail':>4s} {'sec':>6s}")
    for name, cfg in FULL.items():
        trials = min(cfg["trials"], 10) if args.quick else cfg["trials"]
        rep = verify.run_suite(name, trials=trials, seed=args.seed, dims=cfg["dims"])
        reports.append(rep)
        mm = "n/a" if rep.min_margin is None else f"{rep.min_margin:.3e}"
        mr = "n/a" if rep.max_residual is None else f"{rep.max_residual:.3e}"
        print(f"{name:22s} {rep.trials:6d} {mm:>13s} {mr:>13s} {len(rep.failures):4d} {rep.elapsed:6.2f}")

    if args.report:
        payload = {"seed": args.seed, "suites": [rep.to_dict() for rep in reports]}
        with open(args.report, "w", encoding="utf-8") as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
        print(f"wrote {args.report}")

    failed = [rep.suite for rep in reports if not rep.passed]
    if failed:
        print("FAILED:", ", ".join(failed), file=sys.stderr)
        return 1
    print("all suites passed")
    return 0


if __name__ == "__main__":
    sys.exit(main())
