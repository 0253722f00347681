"""Experiment harness: calibration, measurement-rate sweeps, CSV and plot data.

A sweep pairs the two-part scheme against direct BIHT over a grid of
measurement rates m/n, with m1 = ceil(c1 * k * log2(n/k)) stage-1
measurements and m2 = m - m1 left for the solver. Grid points where m2 <= 0
are recorded as infeasible rather than clamped. Every random object is
seeded by a pure function of (base_seed, grid index, trial), so serial
reruns of the same config reproduce every recorded value; with runtime
recording off the CSV is byte-for-byte reproducible (wall-clock timing is
the one irreproducible column).

Seed derivation: ``derive_seed(*parts)`` hashes ``"seed-v1:" + ":".join(
repr(part) ...)`` with SHA-256 and keeps the low 63 bits of the first eight
little-endian digest bytes. The scheme is frozen; changing it would
invalidate recorded sweeps.
"""

import csv
import hashlib
import json
import math
import os
from dataclasses import dataclass

import numpy as np

from . import __version__
from .biht import BihtConfig
from .model import generate_signal, support_metrics
from .pipeline import DirectSeeds, Seeds, TwoPartConfig, run_direct, run_two_part
from .sensing import gen_bernoulli_matrix, measure, quantize_magnitude
from .zero_ident import identify_zeros, small_measurement_set

__all__ = [
    "ConfigError",
    "CalibrationError",
    "SweepConfig",
    "CSV_COLUMNS",
    "NOISY_DEFAULT_NOISE_VARIANCE",
    "parse_config_text",
    "parse_config_file",
    "canonical_config_text",
    "derive_seed",
    "m1_from_c1",
    "two_part_seeds",
    "direct_seeds",
    "calibrate_c1",
    "calibrate_c2",
    "run_sweep",
    "read_results_csv",
    "aggregate_series",
    "emit_plot_data",
]

NOISY_DEFAULT_NOISE_VARIANCE = 10.0 ** -2.5

CSV_COLUMNS = [
    "mode", "algorithm", "m_over_n", "m", "m1", "m2", "iters", "trial", "seed",
    "snr_db", "runtime_s", "part1_zero_frac", "part1_false_zeros",
    "residual_size", "consistent", "status",
]

_C1_GRID_START = 0.5
_GRID_FACTOR = 1.25
_C1_GRID_MAX = 64.0


class ConfigError(ValueError):
    """Invalid or unparseable sweep configuration."""


class CalibrationError(RuntimeError):
    """No grid point reached the calibration target."""

    def __init__(self, message, best_value=None, best_fraction=None):
        super().__init__(message)
        self.best_value = best_value
        self.best_fraction = best_fraction


@dataclass(frozen=True)
class SweepConfig:
    """Parsed sweep configuration (see ``parse_config_text`` for the file syntax)."""

    mode: str
    n: int
    k: int
    m_over_n_grid: tuple
    c1: float | str = "calibrate"
    c2: float | str = 1.0
    epsilon_rule: tuple = None
    noise_variance: float = None
    iteration_budgets: tuple = None
    trials_per_point: int = 10
    base_seed: int = 0
    output_path: str = None

    def __post_init__(self):
        if self.mode not in ("noiseless", "noisy"):
            raise ConfigError(f"mode must be 'noiseless' or 'noisy', got {self.mode!r}")
        if self.n < 2 or not 1 <= self.k < self.n:
            raise ConfigError(f"need n >= 2 and 1 <= k < n, got n={self.n}, k={self.k}")
        if len(self.m_over_n_grid) == 0:
            raise ConfigError("m_over_n_grid must be nonempty")
        for v in self.m_over_n_grid:
            if not 0.0 <= v <= 2.0:
                raise ConfigError(f"m_over_n grid value {v} outside [0, 2]")
        for name in ("c1", "c2"):
            v = getattr(self, name)
            if v != "calibrate" and (not isinstance(v, (int, float)) or v <= 0):
                raise ConfigError(f"{name} must be a positive number or 'calibrate'")
        # mode-dependent defaults
        if self.noise_variance is None:
            object.__setattr__(
                self, "noise_variance",
                0.0 if self.mode == "noiseless" else NOISY_DEFAULT_NOISE_VARIANCE,
            )
        if self.epsilon_rule is None:
            rule = ("absolute", 0.0) if self.mode == "noiseless" else ("noise_std_multiple", 1.0)
            object.__setattr__(self, "epsilon_rule", rule)
        if self.iteration_budgets is None:
            budgets = (100,) if self.mode == "noiseless" else (30, 80, 130)
            object.__setattr__(self, "iteration_budgets", budgets)
        if self.mode == "noiseless" and self.noise_variance != 0.0:
            raise ConfigError("noiseless mode requires noise_variance = 0")
        if self.mode == "noisy" and self.noise_variance <= 0.0:
            raise ConfigError("noisy mode requires noise_variance > 0")
        kind, value = self.epsilon_rule
        if kind not in ("absolute", "noise_std_multiple") or value < 0:
            raise ConfigError(f"bad epsilon_rule {self.epsilon_rule!r}")
        if self.mode == "noisy" and self.resolved_epsilon() <= 0.0:
            raise ConfigError("noisy mode requires a positive epsilon")
        if len(self.iteration_budgets) == 0 or any(b < 1 for b in self.iteration_budgets):
            raise ConfigError("iteration_budgets must be nonempty positive integers")
        if self.trials_per_point < 1:
            raise ConfigError("trials_per_point must be >= 1")

    def resolved_epsilon(self):
        kind, value = self.epsilon_rule
        if kind == "absolute":
            return value
        return value * math.sqrt(self.noise_variance)

    @property
    def zero_threshold(self):
        return 1 if self.mode == "noiseless" else 3

    @property
    def biht_variant(self):
        return "l1" if self.mode == "noiseless" else "l2"


_CONFIG_KEYS = (
    "mode", "n", "k", "m_over_n_grid", "c1", "c2", "epsilon_rule",
    "noise_variance", "iteration_budgets", "trials_per_point", "base_seed",
    "output_path",
)
_REQUIRED_KEYS = ("mode", "n", "k", "m_over_n_grid")


def _parse_epsilon_rule(text):
    kind, sep, value = text.partition(":")
    kind = kind.strip()
    if not sep or kind not in ("absolute", "noise_std_multiple"):
        raise ConfigError(
            f"epsilon_rule must look like 'absolute:<v>' or 'noise_std_multiple:<v>', got {text!r}"
        )
    try:
        return (kind, float(value))
    except ValueError:
        raise ConfigError(f"bad epsilon_rule value in {text!r}") from None


def parse_config_text(text) -> SweepConfig:
    """Parse the flat ``key = value`` sweep-config format.

    Blank lines and lines starting with ``#`` are skipped. List values are
    comma separated. Unknown or duplicate keys are errors.
    """
    raw = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        key, sep, value = stripped.partition("=")
        if not sep:
            raise ConfigError(f"line {lineno}: expected 'key = value', got {line!r}")
        key = key.strip()
        if key not in _CONFIG_KEYS:
            raise ConfigError(f"line {lineno}: unknown key {key!r}")
        if key in raw:
            raise ConfigError(f"line {lineno}: duplicate key {key!r}")
        raw[key] = value.strip()

    for key in _REQUIRED_KEYS:
        if key not in raw:
            raise ConfigError(f"missing required key {key!r}")

    def _int(key):
        try:
            return int(raw[key])
        except ValueError:
            raise ConfigError(f"key {key!r}: expected an integer, got {raw[key]!r}") from None

    def _float(key):
        try:
            return float(raw[key])
        except ValueError:
            raise ConfigError(f"key {key!r}: expected a number, got {raw[key]!r}") from None

    def _float_list(key):
        try:
            return tuple(float(v) for v in raw[key].split(","))
        except ValueError:
            raise ConfigError(f"key {key!r}: expected comma-separated numbers") from None

    def _int_list(key):
        try:
            return tuple(int(v) for v in raw[key].split(","))
        except ValueError:
            raise ConfigError(f"key {key!r}: expected comma-separated integers") from None

    kwargs = {
        "mode": raw["mode"],
        "n": _int("n"),
        "k": _int("k"),
        "m_over_n_grid": _float_list("m_over_n_grid"),
    }
    if "c1" in raw:
        kwargs["c1"] = "calibrate" if raw["c1"] == "calibrate" else _float("c1")
    if "c2" in raw:
        kwargs["c2"] = "calibrate" if raw["c2"] == "calibrate" else _float("c2")
    if "epsilon_rule" in raw:
        kwargs["epsilon_rule"] = _parse_epsilon_rule(raw["epsilon_rule"])
    if "noise_variance" in raw:
        kwargs["noise_variance"] = _float("noise_variance")
    if "iteration_budgets" in raw:
        kwargs["iteration_budgets"] = _int_list("iteration_budgets")
    if "trials_per_point" in raw:
        kwargs["trials_per_point"] = _int("trials_per_point")
    if "base_seed" in raw:
        kwargs["base_seed"] = _int("base_seed")
    if "output_path" in raw:
        kwargs["output_path"] = raw["output_path"]
    return SweepConfig(**kwargs)


def parse_config_file(path) -> SweepConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config_text(fh.read())


def canonical_config_text(config: SweepConfig) -> str:
    """Canonical serialization used for the manifest's config hash."""
    lines = [
        f"mode = {config.mode}",
        f"n = {config.n}",
        f"k = {config.k}",
        "m_over_n_grid = " + ",".join(repr(v) for v in config.m_over_n_grid),
        f"c1 = {config.c1!r}",
        f"c2 = {config.c2!r}",
        f"epsilon_rule = {config.epsilon_rule[0]}:{config.epsilon_rule[1]!r}",
        f"noise_variance = {config.noise_variance!r}",
        "iteration_budgets = " + ",".join(str(b) for b in config.iteration_budgets),
        f"trials_per_point = {config.trials_per_point}",
        f"base_seed = {config.base_seed}",
        f"output_path = {config.output_path}",
    ]
    return "\n".join(lines) + "\n"


def derive_seed(*parts) -> int:
    """Stable 63-bit seed from structured parts (see module docstring)."""
    text = "seed-v1:" + ":".join(repr(p) for p in parts)
    digest = hashlib.sha256(text.encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "little") & (2**63 - 1)


def m1_from_c1(c1, n, k) -> int:
    """Stage-1 measurement count: ceil(c1 * k * log2(n/k))."""
    if k >= n:
        raise ValueError("m1 formula requires k < n")
    return int(math.ceil(c1 * k * math.log2(n / k)))


def two_part_seeds(trial_seed) -> Seeds:
    return Seeds(
        signal=derive_seed(trial_seed, "signal"),
        matrix1=derive_seed(trial_seed, "matrix1"),
        matrix2=derive_seed(trial_seed, "matrix2"),
        noise1=derive_seed(trial_seed, "noise1"),
        noise2=derive_seed(trial_seed, "noise2"),
    )


def direct_seeds(trial_seed) -> DirectSeeds:
    # shares the signal seed with the two-part run so comparisons are paired
    return DirectSeeds(
        signal=derive_seed(trial_seed, "signal"),
        matrix=derive_seed(trial_seed, "direct_matrix"),
        noise=derive_seed(trial_seed, "direct_noise"),
    )


def _zero_fraction_one_trial(n, k, p, epsilon, noise_variance, zero_threshold, m1,
                             trial_seed):
    x = generate_signal(n, k, derive_seed(trial_seed, "signal"))
    phi1 = gen_bernoulli_matrix(m1, n, p, derive_seed(trial_seed, "matrix1"))
    y1 = measure(phi1, x.values, noise_variance, derive_seed(trial_seed, "noise1"))
    bits = quantize_magnitude(y1, epsilon)
    part1 = identify_zeros(
        phi1.col_supports, small_measurement_set(bits), m1, zero_threshold
    )
    identified, false_zeros = support_metrics(x, part1.zero_set)
    return (identified - false_zeros) / (n - k)


def _mean_zero_fraction(n, k, p, epsilon, noise_variance, zero_threshold, m1,
                        trial_seeds):
    fractions = [
        _zero_fraction_one_trial(n, k, p, epsilon, noise_variance, zero_threshold,
                                 m1, ts)
        for ts in trial_seeds
    ]
    return float(np.mean(fractions))


def calibrate_c1(n, k, p, epsilon, noise_variance, target_fraction=0.9, trials=20,
                 seed=0, zero_threshold=None) -> float:
    """Smallest c1 on the grid 0.5 * 1.25^j whose stage 1 hits the target.

    The target is the mean fraction of true zeros correctly identified over
    ``trials`` Monte Carlo runs, with m1 = ceil(c1 * k * log2(n/k)). The same
    trial seeds are reused at every grid point (common random numbers), and
    Bernoulli matrices with the same seed extend row for row as m1 grows, so
    the achieved fraction is non-decreasing along the grid. Raises
    :class:`CalibrationError` if no c1 up to 64 reaches the target.
    """
    if not 0.0 < target_fraction < 1.0:
        raise ValueError("target_fraction must be in (0, 1)")
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if zero_threshold is None:
        zero_threshold = 3 if noise_variance > 0 else 1

    trial_seeds = [derive_seed(seed, "calibration-trial", t) for t in range(trials)]
    best_fraction = -1.0
    best_c1 = None
    c1 = _C1_GRID_START
    while c1 <= _C1_GRID_MAX * (1 + 1e-12):
        m1 = m1_from_c1(c1, n, k)
        fraction = _mean_zero_fraction(
            n, k, p, epsilon, noise_variance, zero_threshold, m1, trial_seeds
        )
        if fraction > best_fraction:
            best_fraction = fraction
            best_c1 = c1
        if fraction >= target_fraction:
            return c1
        c1 *= _GRID_FACTOR
    raise CalibrationError(
        f"no c1 <= {_C1_GRID_MAX} reached target {target_fraction}; "
        f"best was {best_fraction:.4f} at c1 = {best_c1:.4g}",
        best_value=best_c1,
        best_fraction=best_fraction,
    )


def calibrate_c2(n, k, c1, epsilon, noise_variance, trials=20, seed=0,
                 zero_threshold=None) -> float:
    """Grid search over c2 (p = c2/k) maximizing zero identification at fixed m1.

    Same geometric grid and common random numbers as :func:`calibrate_c1`;
    the grid is capped at c2 = k so that p stays in (0, 1]. Returns the
    first c2 achieving the maximum mean fraction.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    if zero_threshold is None:
        zero_threshold = 3 if noise_variance > 0 else 1
    m1 = m1_from_c1(c1, n, k)
    trial_seeds = [derive_seed(seed, "calibration-trial", t) for t in range(trials)]

    best_fraction = -1.0
    best_c2 = None
    c2 = _C1_GRID_START
    while c2 <= min(float(k), _C1_GRID_MAX) * (1 + 1e-12):
        fraction = _mean_zero_fraction(
            n, k, c2 / k, epsilon, noise_variance, zero_threshold, m1, trial_seeds
        )
        if fraction > best_fraction:
            best_fraction = fraction
            best_c2 = c2
        c2 *= _GRID_FACTOR
    if best_c2 is None:
        raise CalibrationError("empty c2 grid", best_value=None, best_fraction=None)
    return best_c2


def resolve_constants(config: SweepConfig, cal_trials=20, cal_target=0.9):
    """Resolve 'calibrate' placeholders to numeric (c1, c2) for a sweep."""
    c2 = config.c2
    if c2 == "calibrate":
        c2_provisional = 1.0
    else:
        c2_provisional = c2
    c1 = config.c1
    if c1 == "calibrate":
        c1 = calibrate_c1(
            config.n, config.k, c2_provisional / config.k, config.resolved_epsilon(),
            config.noise_variance, target_fraction=cal_target, trials=cal_trials,
            seed=derive_seed(config.base_seed, "calibrate-c1"),
            zero_threshold=config.zero_threshold,
        )
    if c2 == "calibrate":
        c2 = calibrate_c2(
            config.n, config.k, c1, config.resolved_epsilon(),
            config.noise_variance, trials=cal_trials,
            seed=derive_seed(config.base_seed, "calibrate-c2"),
            zero_threshold=config.zero_threshold,
        )
    return float(c1), float(c2)


def _format_cell(value):
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        if math.isinf(value):
            return "inf"
        return repr(float(value))
    return str(value)


def _write_row(writer, fh, row):
    writer.writerow([_format_cell(row[c]) for c in CSV_COLUMNS])
    fh.flush()


def run_sweep(config: SweepConfig, dense_dtype=np.float64, cal_trials=20,
              cal_target=0.9, progress=None, record_runtime=True):
    """Run the paired two-part / direct sweep and persist results.

    Executes serially in deterministic order (grid point, budget, trial,
    two-part before direct) and appends each row to ``config.output_path``
    as soon as it is available, so partial runs are recoverable. A JSON run
    manifest with the config hash, library version, and every derived seed
    is written next to the CSV. Returns the list of row dicts.

    ``record_runtime=False`` leaves the runtime column empty; wall-clock
    values are the one source of run-to-run variation, so this mode makes
    the CSV a byte-reproducible function of the config (used by the
    determinism regression).
    """
    if config.output_path is None:
        raise ConfigError("output_path is required to run a sweep")
    c1, c2 = resolve_constants(config, cal_trials=cal_trials, cal_target=cal_target)
    p = c2 / config.k
    epsilon = config.resolved_epsilon()
    m1 = m1_from_c1(c1, config.n, config.k)

    out_dir = os.path.dirname(str(config.output_path))
    if out_dir:
        os.makedirs(out_dir, exist_ok=True)

    rows = []
    manifest_seeds = []
    with open(config.output_path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        fh.flush()
        for g_idx, ratio in enumerate(config.m_over_n_grid):
            m = int(round(config.n * ratio))
            m2 = m - m1
            if m2 <= 0:
                row = {c: None for c in CSV_COLUMNS}
                row.update(mode=config.mode, algorithm=None, m_over_n=ratio, m=m,
                           m1=m1, m2=m2, status="infeasible")
                rows.append(row)
                _write_row(writer, fh, row)
                if progress is not None:
                    progress(f"m/n={ratio:g}: infeasible (m2={m2})")
                continue
            for budget in config.iteration_budgets:
                for trial in range(config.trials_per_point):
                    trial_seed = derive_seed(config.base_seed, g_idx, trial)
                    if budget == config.iteration_budgets[0]:
                        manifest_seeds.append(_seed_record(ratio, trial, trial_seed))

                    tp_config = TwoPartConfig(
                        n=config.n, k=config.k, m1=m1, m2=m2, p=p, epsilon=epsilon,
                        zero_threshold=config.zero_threshold,
                        noise_variance=config.noise_variance,
                        biht=BihtConfig(
                            k=config.k, variant=config.biht_variant,
                            max_iterations=budget,
                            stop_on_consistency=(config.mode == "noiseless"),
                        ),
                        seeds=two_part_seeds(trial_seed),
                        dense_dtype=dense_dtype,
                    )
                    _, report = run_two_part(tp_config)
                    row = _result_row(config, "two_part", ratio, m, m1, m2, budget,
                                      trial, trial_seed, report, record_runtime)
                    rows.append(row)
                    _write_row(writer, fh, row)

                    direct_config = BihtConfig(
                        k=config.k, variant=config.biht_variant,
                        max_iterations=budget,
                        stop_on_consistency=(config.mode == "noiseless"),
                    )
                    _, report = run_direct(
                        config.n, config.k, m, config.noise_variance, direct_config,
                        direct_seeds(trial_seed), dense_dtype=dense_dtype,
                    )
                    row = _result_row(config, "direct", ratio, m, m1, m2, budget,
                                      trial, trial_seed, report, record_runtime)
                    rows.append(row)
                    _write_row(writer, fh, row)
                if progress is not None:
                    progress(f"m/n={ratio:g} iters={budget}: done")

    _write_run_manifest(config, c1, c2, m1, manifest_seeds)
    return rows


def _seed_record(ratio, trial, trial_seed):
    tp = two_part_seeds(trial_seed)
    d = direct_seeds(trial_seed)
    return {
        "m_over_n": ratio,
        "trial": trial,
        "trial_seed": trial_seed,
        "two_part": {
            "signal": tp.signal, "matrix1": tp.matrix1, "matrix2": tp.matrix2,
            "noise1": tp.noise1, "noise2": tp.noise2,
        },
        "direct": {"signal": d.signal, "matrix": d.matrix, "noise": d.noise},
    }


def _result_row(config, algorithm, ratio, m, m1, m2, budget, trial, trial_seed,
                report, record_runtime=True):
    if algorithm == "two_part":
        zero_frac = (report.part1_zero_identified - report.part1_false_zeros) / (
            config.n - config.k
        )
    else:
        zero_frac = 0.0
    return {
        "mode": config.mode,
        "algorithm": algorithm,
        "m_over_n": ratio,
        "m": m,
        "m1": m1,
        "m2": m2,
        "iters": budget,
        "trial": trial,
        "seed": trial_seed,
        "snr_db": report.snr_db,
        "runtime_s": report.runtime_seconds if record_runtime else None,
        "part1_zero_frac": zero_frac,
        "part1_false_zeros": report.part1_false_zeros,
        "residual_size": report.residual_problem_size,
        "consistent": report.consistent,
        "status": "ok",
    }


def _manifest_path(output_path):
    base = str(output_path)
    if base.endswith(".csv"):
        base = base[: -len(".csv")]
    return base + "_manifest.json"


def _write_run_manifest(config, c1, c2, m1, manifest_seeds):
    text = canonical_config_text(config)
    manifest = {
        "version": __version__,
        "config_hash": hashlib.sha256(text.encode("utf-8")).hexdigest(),
        "canonical_config": text,
        "c1": c1,
        "c2": c2,
        "m1": m1,
        "epsilon": config.resolved_epsilon(),
        "zero_threshold": config.zero_threshold,
        "seeds": manifest_seeds,
    }
    with open(_manifest_path(config.output_path), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _parse_cell(column, text):
    if text == "":
        return None
    if column in ("m", "m1", "m2", "iters", "trial", "seed", "part1_false_zeros",
                  "residual_size"):
        return int(text)
    if column in ("m_over_n", "snr_db", "runtime_s", "part1_zero_frac"):
        return float(text)
    if column == "consistent":
        return text == "true"
    return text


def read_results_csv(path):
    """Read a sweep CSV back into row dicts with native types."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != CSV_COLUMNS:
            raise ConfigError(f"unexpected CSV header in {path}")
        return [
            {c: _parse_cell(c, cell) for c, cell in zip(CSV_COLUMNS, line)}
            for line in reader
        ]


_METRIC_COLUMNS = {"snr": "snr_db", "runtime": "runtime_s"}


def aggregate_series(rows, metric):
    """Per-(algorithm, budget) aggregation of a sweep, sorted by m/n.

    Infinite SNR values (exact recovery) are excluded from dB means and
    counted separately. Returns ``{(algorithm, iters): [point, ...]}`` where
    each point has ``m_over_n``, ``mean``, ``stderr``, ``trials`` and
    ``exact_recovery``.
    """
    if metric not in _METRIC_COLUMNS:
        raise ValueError(f"unknown metric {metric!r}, expected 'snr' or 'runtime'")
    column = _METRIC_COLUMNS[metric]
    groups = {}
    for row in rows:
        if row["status"] != "ok" or row[column] is None:
            continue
        key = (row["algorithm"], row["iters"])
        groups.setdefault(key, {}).setdefault(row["m_over_n"], []).append(row[column])

    series = {}
    for key, by_ratio in groups.items():
        points = []
        for ratio in sorted(by_ratio):
            values = np.array(by_ratio[ratio], dtype=float)
            finite = values[np.isfinite(values)]
            exact = int(np.count_nonzero(np.isinf(values)))
            mean = float(finite.mean()) if finite.size else float("nan")
            stderr = (
                float(finite.std(ddof=1) / np.sqrt(finite.size))
                if finite.size > 1 else 0.0
            )
            points.append({
                "m_over_n": ratio,
                "mean": mean,
                "stderr": stderr,
                "trials": int(values.size),
                "exact_recovery": exact,
            })
        series[key] = points
    return series


def emit_plot_data(rows, metric, out_dir):
    """Write one whitespace-delimited series file per (algorithm, budget).

    Each file has a commented header and three columns: m/n, mean, standard
    error, rows sorted by m/n ascending. A JSON manifest listing the series
    (and exact-recovery counts for the SNR metric) is written alongside.
    Returns ``(series_paths, manifest_path)``.
    """
    if not rows:
        raise ValueError("results are empty, nothing to emit")
    series = aggregate_series(rows, metric)
    if not series:
        raise ValueError("no usable rows (all infeasible?)")
    os.makedirs(out_dir, exist_ok=True)

    paths = []
    manifest_series = []
    for (algorithm, iters), points in sorted(series.items()):
        name = f"{algorithm}_iters{iters}_{metric}.dat"
        path = os.path.join(out_dir, name)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("# m_over_n mean stderr\n")
            for pt in points:
                fh.write(f"{pt['m_over_n']!r} {pt['mean']!r} {pt['stderr']!r}\n")
        paths.append(path)
        manifest_series.append({
            "algorithm": algorithm,
            "iters": iters,
            "file": name,
            "points": [
                {"m_over_n": pt["m_over_n"], "trials": pt["trials"],
                 "exact_recovery": pt["exact_recovery"]}
                for pt in points
            ],
        })

    manifest_path = os.path.join(out_dir, f"plot_manifest_{metric}.json")
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump({"metric": metric, "series": manifest_series}, fh, indent=2,
                  sort_keys=True)
        fh.write("\n")
    return paths, manifest_path
