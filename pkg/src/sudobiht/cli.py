"""Command-line experiment harness.

Subcommands: ``single`` (one reconstruction, report printed), ``calibrate``
(grid-search c1 or c2), ``sweep`` (measurement-rate sweep to CSV + manifest),
``plot-data`` (aggregate a sweep CSV into per-series data files).

Exit codes: 0 success, 2 invalid configuration or arguments, 3 calibration
failure, 4 sweep with no feasible grid point.
"""

import argparse
import math
import sys

import numpy as np

from .bench import (
    CalibrationError,
    ConfigError,
    NOISY_DEFAULT_NOISE_VARIANCE,
    aggregate_series,
    calibrate_c1,
    calibrate_c2,
    derive_seed,
    direct_seeds,
    emit_plot_data,
    m1_from_c1,
    parse_config_file,
    read_results_csv,
    run_sweep,
    two_part_seeds,
)
from .biht import BihtConfig
from .pipeline import TwoPartConfig, run_direct, run_two_part

EXIT_OK = 0
EXIT_INVALID_CONFIG = 2
EXIT_CALIBRATION_FAILURE = 3
EXIT_ALL_INFEASIBLE = 4

# warn before materializing dense matrices beyond this size
_DENSE_WARN_BYTES = 1 << 30


def _build_parser():
    parser = argparse.ArgumentParser(
        prog="sudobiht",
        description="Two-part 1-bit sparse recovery experiments",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    single = sub.add_parser("single", help="run one reconstruction and print the report")
    single.add_argument("--mode", choices=["noiseless", "noisy"], default="noisy")
    single.add_argument("--algorithm", choices=["two_part", "direct"], default="two_part")
    single.add_argument("--n", type=int, default=2000)
    single.add_argument("--k", type=int, default=10)
    single.add_argument("--m-over-n", type=float, default=1.0)
    single.add_argument("--c1", type=float, default=3.0)
    single.add_argument("--c2", type=float, default=1.0)
    single.add_argument("--iters", type=int, default=None,
                        help="BIHT iteration budget (default: 100 noiseless, 130 noisy)")
    single.add_argument("--noise-variance", type=float, default=None)
    single.add_argument("--epsilon", type=float, default=None,
                        help="small-measurement threshold (default: 0 noiseless, one noise std noisy)")
    single.add_argument("--zero-threshold", type=int, default=None,
                        help="intersection count to declare a zero (default: 1 noiseless, 3 noisy)")
    single.add_argument("--seed", type=int, default=0, help="trial seed")
    single.add_argument("--float32", action="store_true",
                        help="store dense matrices in 4-byte floats")

    cal = sub.add_parser("calibrate", help="grid-search c1 (or c2) for a config")
    cal.add_argument("--config", required=True)
    cal.add_argument("--param", choices=["c1", "c2"], default="c1")
    cal.add_argument("--target", type=float, default=0.9,
                     help="target fraction of true zeros identified (c1 only)")
    cal.add_argument("--trials", type=int, default=20)

    sweep = sub.add_parser("sweep", help="run a measurement-rate sweep from a config file")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--float32", action="store_true",
                       help="store dense matrices in 4-byte floats")
    sweep.add_argument("--cal-trials", type=int, default=20)
    sweep.add_argument("--cal-target", type=float, default=0.9)
    sweep.add_argument("--no-timing", action="store_true",
                       help="leave the runtime column empty so the CSV is byte-reproducible")
    sweep.add_argument("--quiet", action="store_true")

    plot = sub.add_parser("plot-data", help="aggregate a sweep CSV into plot series files")
    plot.add_argument("--csv", required=True)
    plot.add_argument("--metric", choices=["snr", "runtime"], required=True)
    plot.add_argument("--out-dir", required=True)

    return parser


def _cmd_single(args):
    noise_variance = args.noise_variance
    if noise_variance is None:
        noise_variance = 0.0 if args.mode == "noiseless" else NOISY_DEFAULT_NOISE_VARIANCE
    epsilon = args.epsilon
    if epsilon is None:
        epsilon = 0.0 if args.mode == "noiseless" else math.sqrt(noise_variance)
    zero_threshold = args.zero_threshold
    if zero_threshold is None:
        zero_threshold = 1 if args.mode == "noiseless" else 3
    iters = args.iters
    if iters is None:
        iters = 100 if args.mode == "noiseless" else 130
    dtype = np.float32 if args.float32 else np.float64

    m = int(round(args.n * args.m_over_n))
    m1 = m1_from_c1(args.c1, args.n, args.k)
    m2 = m - m1
    biht_config = BihtConfig(
        k=args.k,
        variant="l1" if args.mode == "noiseless" else "l2",
        max_iterations=iters,
        stop_on_consistency=(args.mode == "noiseless"),
    )
    trial_seed = derive_seed(args.seed, 0, 0)

    if args.algorithm == "two_part":
        if m2 < 1:
            raise ConfigError(f"infeasible point: m={m}, m1={m1} leaves m2={m2}")
        config = TwoPartConfig(
            n=args.n, k=args.k, m1=m1, m2=m2, p=args.c2 / args.k, epsilon=epsilon,
            zero_threshold=zero_threshold, noise_variance=noise_variance,
            biht=biht_config, seeds=two_part_seeds(trial_seed), dense_dtype=dtype,
        )
        _, report = run_two_part(config)
    else:
        _, report = run_direct(
            args.n, args.k, m, noise_variance, biht_config,
            direct_seeds(trial_seed), dense_dtype=dtype,
        )

    print(f"algorithm              {args.algorithm}")
    print(f"mode                   {args.mode}")
    print(f"m / m1 / m2            {m} / {m1} / {m2}")
    print(f"snr_db                 {report.snr_db:.4f}")
    print(f"runtime_s              {report.runtime_seconds:.6f}")
    print(f"part1_zero_identified  {report.part1_zero_identified}")
    print(f"part1_false_zeros      {report.part1_false_zeros}")
    print(f"residual_size          {report.residual_problem_size}")
    print(f"iterations_used        {report.iterations_used}")
    print(f"consistent             {str(report.consistent).lower()}")
    return EXIT_OK


def _cmd_calibrate(args):
    config = parse_config_file(args.config)
    if args.param == "c1":
        c2 = 1.0 if config.c2 == "calibrate" else config.c2
        c1 = calibrate_c1(
            config.n, config.k, c2 / config.k, config.resolved_epsilon(),
            config.noise_variance, target_fraction=args.target, trials=args.trials,
            seed=derive_seed(config.base_seed, "calibrate-c1"),
            zero_threshold=config.zero_threshold,
        )
        print(f"c1 = {c1:.6g}")
        print(f"m1 = {m1_from_c1(c1, config.n, config.k)}")
    else:
        if config.c1 == "calibrate":
            raise ConfigError("calibrating c2 requires a numeric c1 in the config")
        c2 = calibrate_c2(
            config.n, config.k, config.c1, config.resolved_epsilon(),
            config.noise_variance, trials=args.trials,
            seed=derive_seed(config.base_seed, "calibrate-c2"),
            zero_threshold=config.zero_threshold,
        )
        print(f"c2 = {c2:.6g}")
    return EXIT_OK


def _cmd_sweep(args):
    config = parse_config_file(args.config)
    dtype = np.float32 if args.float32 else np.float64
    itemsize = np.dtype(dtype).itemsize
    max_m = max(int(round(config.n * r)) for r in config.m_over_n_grid)
    dense_bytes = max_m * config.n * itemsize
    if dense_bytes > _DENSE_WARN_BYTES:
        print(
            f"warning: largest dense matrix is {max_m} x {config.n} "
            f"(~{dense_bytes / 2**30:.1f} GiB at {itemsize}-byte precision); "
            "consider --float32",
            file=sys.stderr,
        )

    progress = None if args.quiet else (lambda msg: print(msg, file=sys.stderr))
    rows = run_sweep(config, dense_dtype=dtype, cal_trials=args.cal_trials,
                     cal_target=args.cal_target, progress=progress,
                     record_runtime=not args.no_timing)
    ok_rows = [r for r in rows if r["status"] == "ok"]
    print(f"wrote {len(rows)} rows to {config.output_path}")
    if not ok_rows:
        print("all grid points infeasible", file=sys.stderr)
        return EXIT_ALL_INFEASIBLE

    metrics = ("snr",) if args.no_timing else ("snr", "runtime")
    for metric in metrics:
        series = aggregate_series(ok_rows, metric)
        for (algorithm, iters), points in sorted(series.items()):
            summary = "  ".join(
                f"{pt['m_over_n']:g}:{pt['mean']:.3g}" for pt in points
            )
            print(f"{metric:7s} {algorithm:8s} iters={iters:<4d} {summary}")
    return EXIT_OK


def _cmd_plot_data(args):
    rows = read_results_csv(args.csv)
    paths, manifest = emit_plot_data(rows, args.metric, args.out_dir)
    for path in paths:
        print(path)
    print(manifest)
    return EXIT_OK


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "single": _cmd_single,
        "calibrate": _cmd_calibrate,
        "sweep": _cmd_sweep,
        "plot-data": _cmd_plot_data,
    }
    try:
        return handlers[args.command](args)
    except CalibrationError as exc:
        print(f"calibration failed: {exc}", file=sys.stderr)
        return EXIT_CALIBRATION_FAILURE
    except (ConfigError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID_CONFIG


if __name__ == "__main__":
    sys.exit(main())
