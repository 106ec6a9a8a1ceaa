#!/usr/bin/env python3
"""Empirical power study across the reference alternatives.

Examples:
    python scripts/power_study.py --d 2 --n 50                # multivariate set
    python scripts/power_study.py --d 1 --n 100 --univariate  # univariate set
"""

import argparse
import sys

from normtest.cli import main as cli_main

MULTIVARIATE_ALTS = [
    "std",
    "nmix:p=0.1,mu=3,sigma=I",
    "nmix:p=0.5,mu=0,sigma=Bd",
    "nmix:p=0.9,mu=0,sigma=Bd",
    "mt:nu=3",
    "mt:nu=5",
    "mt:nu=10",
    "prod:cauchy",
    "prod:logistic",
    "prod:gamma(0.5,1)",
    "prod:gamma(5,1)",
    "prod:pvii(10)",
    "prod:pvii(20)",
    "spherical:exp(1)",
    "spherical:beta(1,2)",
    "spherical:chisq(5)",
]

UNIVARIATE_ALTS = [
    "std",
    "nmix:p=0.3,mu=1,sigma=0.25",
    "nmix:p=0.5,mu=1,sigma=4",
    "t(3)",
    "t(5)",
    "t(10)",
    "uniform",
    "chisq(5)",
    "chisq(15)",
    "beta(1,4)",
    "beta(2,5)",
    "gamma(1,5)",
    "gamma(5,1)",
    "weibull(1,0.5)",
    "gumbel(1,2)",
    "lognormal",
]

if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--d", type=int, default=2)
    ap.add_argument("--n", type=int, default=50)
    ap.add_argument("--reps", type=int, default=10_000)
    ap.add_argument("--crit-reps", type=int, default=100_000)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--workers", type=int, default=0)
    ap.add_argument("--univariate", action="store_true")
    ap.add_argument("--out", default="power.csv")
    args = ap.parse_args()

    alts = UNIVARIATE_ALTS if args.univariate else MULTIVARIATE_ALTS
    argv = ["power", "--d", str(args.d), "--n", str(args.n),
            "--reps", str(args.reps), "--crit-reps", str(args.crit_reps),
            "--seed", str(args.seed), "--workers", str(args.workers),
            "--format", "csv", "--output", args.out]
    for alt in alts:
        argv += ["--alt", alt]
    for a in (0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 10.0):
        argv += ["--a", str(a)]
    if args.univariate:
        for comp in ("bhep:1", "bcmr", "be:1"):
            argv += ["--competitor", comp]
    else:
        for comp in ("bhep:0.5", "bhep:1", "hv:5", "hvinf", "hjg:1.5"):
            argv += ["--competitor", comp]
    sys.exit(cli_main(argv))
