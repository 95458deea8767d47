"""Command-line entry point for running benchmark experiments."""
from __future__ import annotations

import argparse
import sys
import time

from .harness import (
    ABLATIONS,
    ALGOS,
    RESTARTS,
    STEPSIZES,
    config_from_sources,
    parse_config_file,
    run_experiment,
)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="led-cmaes",
        description="CMA-ES benchmark harness with low-effective-"
                    "dimensionality countermeasures")
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one benchmark configuration")
    run.add_argument("--config", help="key=value config file; explicit "
                                      "flags override file entries")
    run.add_argument("--algo", choices=ALGOS)
    run.add_argument("--stepsize", choices=STEPSIZES)
    run.add_argument("--restart", choices=RESTARTS)
    run.add_argument("--fn", type=int, help="benchmark function id (1-9)")
    run.add_argument("--dim", type=int, help="total dimension N")
    run.add_argument("--eff-dim", type=int, dest="eff_dim",
                     help="effective dimension of the intrinsic function")
    run.add_argument("--trials", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--budget-multiplier", type=int, dest="budget_multiplier",
                     help="evaluation budget per trial = N * multiplier")
    run.add_argument("--lambda", type=int, dest="lam",
                     help="sample size override (default 4 + floor(3 ln N))")
    run.add_argument("--out", help="output directory for CSV files")
    run.add_argument("--no-rotation", action="store_const", const=True,
                     dest="no_rotation", help="force the identity rotation")
    run.add_argument("--trace-led", action="store_const", const=True,
                     dest="trace_led",
                     help="dump per-coordinate effectiveness traces")
    run.add_argument("--jobs", type=int, help="parallel trials")
    run.add_argument("--maxiter-as-evals", action="store_const", const=True,
                     dest="maxiter_as_evals",
                     help="read the MaxIter stop bound as an evaluation count")
    run.add_argument("--ablation", choices=ABLATIONS,
                     help="run a single countermeasure of the led variant")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    file_values = parse_config_file(args.config) if args.config else {}
    overrides = {key: getattr(args, key) for key in (
        "algo", "stepsize", "restart", "fn", "dim", "eff_dim", "trials",
        "seed", "budget_multiplier", "lam", "out", "no_rotation",
        "trace_led", "jobs", "maxiter_as_evals", "ablation")}
    config = config_from_sources(file_values, overrides)

    started = time.time()
    summary = run_experiment(config)
    elapsed = time.time() - started

    label = config.algo if config.ablation == "none" \
        else f"{config.algo}[{config.ablation}]"
    print(f"{label}/{config.stepsize} restart={config.restart} "
          f"fn={config.fn} N={config.dim} N_eff={config.eff_dim}: "
          f"{summary.successes}/{summary.trials} successful "
          f"(rate {summary.success_rate:.2f}) in {elapsed:.1f}s")
    if summary.median_evals is not None:
        print(f"  median evals {summary.median_evals:.0f} "
              f"(IQR {summary.q25_evals:.0f}-{summary.q75_evals:.0f}), "
              f"median/success-rate {summary.evals_div_success:.0f}")
    if config.out:
        print(f"  wrote CSV outputs to {config.out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
