"""Command line: ``amoebot {run,oracle,verify,msd,render,sweep}``.

Exit codes: 0 success, 1 verification failure, 2 configuration error.
"""

from __future__ import annotations

import argparse
import logging
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import io as aio
from .dynamics import Kernel, Mode, run
from .metrics import FitError, displacement_summary, msd, success_rate
from .oracle import oracle_report

log = logging.getLogger("amoebot")

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _run_trial(config: aio.RunConfig, trial: int, out: Path | None):
    traj = run(config.initial_system(), config.params(trial), config.light(),
               config.iterations, config.record_interval,
               snapshot_times=config.snapshot_times())
    if out is not None:
        aio.write_trajectory_csv(out / f"trial_{trial:03d}.csv", traj)
        for t, snap in traj.snapshots.items():
            aio.write_snapshot(out / f"trial_{trial:03d}_t{t}.snap", snap)
    return traj


def run_trials(config: aio.RunConfig, out: Path | None = None, workers: int = 1) -> list:
    """All trials of ``config``, one sequential chain per worker process."""
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    if workers <= 1 or config.trials == 1:
        return [_run_trial(config, k, out) for k in range(config.trials)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(_run_trial, config, k, out) for k in range(config.trials)]
        return [f.result() for f in futures]


def _config_from_args(args) -> aio.RunConfig:
    base = aio.RunConfig()
    if args.config:
        base = aio.parse_config(Path(args.config).read_text(), base)
    overrides = {key: getattr(args, key.replace("-", "_"), None) for key in aio.CONFIG_KEYS}
    return aio.apply_overrides(base, overrides)


def _add_config_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--config", help="flat key = value config file")
    for key in aio.CONFIG_KEYS:
        p.add_argument(f"--{key}", dest=key, default=None, metavar="VALUE")


def cmd_run(args) -> int:
    config = _config_from_args(args)
    out = Path(config.output_dir)
    trajs = run_trials(config, out, workers=args.workers)
    (out / "config.txt").write_text(aio.format_config(config))
    summary = displacement_summary(trajs)
    lines = [f"trials={config.trials} success_rate_+y={success_rate(trajs, '+y'):.4f}"]
    lines += [f"{k}={v:.6g}" for k, v in summary.items()]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    print("\n".join(lines))
    return EXIT_OK


def cmd_oracle(args) -> int:
    text = oracle_report(args.n, Fraction(args.lam), Fraction(args.dim_prob))
    if args.output:
        Path(args.output).write_text(text)
    print(text, end="")
    return EXIT_OK


def cmd_verify(args) -> int:
    from .verify import run_all

    results = run_all(skip_scale=args.skip_scale, only=args.only)
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def cmd_msd(args) -> int:
    trials = [aio.read_trajectory_csv(p) for p in args.csv]
    fit_range = tuple(args.fit_range) if args.fit_range else None
    result = msd(trials, fit_range=fit_range)
    if args.output:
        aio.write_msd_csv(args.output, result)
    print(aio.fit_summary(result))
    print(f"regime={result.regime}")
    return EXIT_OK


def cmd_render(args) -> int:
    system = aio.read_snapshot(args.snapshot)
    light = aio.LightField(enabled=not args.no_light)
    text = aio.render_ascii(system, light) if args.ascii else aio.render_svg(system, light)
    if args.output:
        Path(args.output).write_text(text)
    else:
        print(text, end="")
    return EXIT_OK


def cmd_sweep(args) -> int:
    base = _config_from_args(args)
    rows = ["lambda\tdim_prob\tmean_dy\tmean_dx\tgamma"]
    for lam in args.lambdas:
        for dp in args.dim_probs:
            config = aio.apply_overrides(base, {"lambda": lam, "dim_prob": dp})
            trajs = run_trials(config, None, workers=args.workers)
            s = displacement_summary(trajs)
            try:
                gamma = msd(trajs).gamma if len(trajs) > 1 else math.nan
            except FitError:
                gamma = math.nan
            rows.append(f"{config.lam:g}\t{config.dim_prob}\t{s['mean_dy']:.6g}\t{s['mean_dx']:.6g}\t{gamma:.4g}")
    text = "\n".join(rows) + "\n"
    if args.output:
        Path(args.output).write_text(text)
    print(text, end="")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="amoebot", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", help="simulate trials and write trajectory CSVs")
    _add_config_flags(p)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("oracle", help="exact small-system verification report")
    p.add_argument("--n", type=int, default=3)
    p.add_argument("--lambda", dest="lam", default="4")
    p.add_argument("--dim_prob", default="1/4")
    p.add_argument("--output")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("verify", help="run the acceptance checks")
    p.add_argument("--skip-scale", action="store_true", help="skip the long simulations")
    p.add_argument("--only", nargs="*", type=int, help="criterion numbers to run")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("msd", help="ensemble MSD and exponent fit from trajectory CSVs")
    p.add_argument("csv", nargs="+")
    p.add_argument("--fit-range", nargs=2, type=int, metavar=("T_MIN", "T_MAX"))
    p.add_argument("--output", help="MSD CSV path")
    p.set_defaults(func=cmd_msd)

    p = sub.add_parser("render", help="draw a snapshot as SVG or ASCII")
    p.add_argument("snapshot")
    p.add_argument("--ascii", action="store_true")
    p.add_argument("--no-light", action="store_true")
    p.add_argument("--output")
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("sweep", help="grid over lambda and dim_prob")
    _add_config_flags(p)
    p.add_argument("--lambdas", nargs="+", required=True)
    p.add_argument("--dim-probs", nargs="+", required=True)
    p.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    p.add_argument("--output")
    p.set_defaults(func=cmd_sweep)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except aio.ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
