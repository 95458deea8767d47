"""Experiment runner: seeded trials, per-iteration traces, CSV emission,
and the aggregate statistics the scaling figures plot."""
from __future__ import annotations

import csv
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, fields, replace
from typing import Optional

import numpy as np

from .cmaes import default_lambda
from .objective import ConfigurationError, LedProblem, led_wrap, make_intrinsic, random_rotation
from .restart import RunResult, RunSettings, SegmentLog, StopConfig, ipop_run, run_single

TRACE_HEADER = ["trial", "seed", "iteration", "evals", "best_f", "sigma",
                "neff_hat", "segment"]
LED_TRACE_HEADER = ["trial", "iteration", "coord", "v_snr", "v", "align"]
SEGMENTS_HEADER = ["trial", "segment", "lambda", "reason", "evals", "best_f"]
SUMMARY_HEADER = ["algo", "stepsize", "restart", "ablation", "fn", "dim",
                  "eff_dim", "trials", "successes", "success_rate",
                  "median_evals", "q25_evals", "q75_evals",
                  "evals_div_success"]

ALGOS = ("cmaes", "led")
STEPSIZES = ("csa", "tpa")
RESTARTS = ("none", "ipop")
ABLATIONS = ("none", "hyper-only", "norm-only")


@dataclass(frozen=True)
class ExperimentConfig:
    """One benchmark configuration; a trial is a pure function of this
    plus its trial index."""

    algo: str = "cmaes"
    stepsize: str = "csa"
    restart: str = "none"
    fn: int = 1
    dim: int = 8
    eff_dim: int = 8
    trials: int = 20
    seed: int = 1
    budget_multiplier: int = 100_000
    out: Optional[str] = None
    no_rotation: bool = False
    trace_led: bool = False
    jobs: int = 1
    maxiter_as_evals: bool = False
    ablation: str = "none"
    lam: Optional[int] = None
    record_trace: bool = True

    def validate(self) -> None:
        if self.algo not in ALGOS:
            raise ConfigurationError(f"unknown algo {self.algo!r}")
        if self.stepsize not in STEPSIZES:
            raise ConfigurationError(f"unknown stepsize {self.stepsize!r}")
        if self.restart not in RESTARTS:
            raise ConfigurationError(f"unknown restart {self.restart!r}")
        if self.ablation not in ABLATIONS:
            raise ConfigurationError(f"unknown ablation {self.ablation!r}")
        if self.ablation != "none" and self.algo != "led":
            raise ConfigurationError("ablations apply to --algo led only")
        if self.dim < self.eff_dim:
            raise ConfigurationError("dim must be >= eff-dim")
        if self.trials < 1:
            raise ConfigurationError("trials must be >= 1")


@dataclass
class TrialRecord:
    """Outcome and per-iteration trace of a single trial."""

    trial: int
    seed: int
    success: bool
    evaluations: int
    best_f: float
    rows: list[tuple]
    segments: list[SegmentLog]
    led_rows: list[tuple] = field(default_factory=list)


@dataclass(frozen=True)
class ExperimentSummary:
    """Aggregates over one configuration's trials."""

    trials: int
    successes: int
    success_rate: float
    median_evals: Optional[float]
    q25_evals: Optional[float]
    q75_evals: Optional[float]
    evals_div_success: Optional[float]


def trial_streams(config: ExperimentConfig, trial_index: int):
    """Independent named rng streams for one trial, spawned from the master
    seed so toggling one consumer never shifts another's draws."""
    root = np.random.SeedSequence(entropy=config.seed,
                                  spawn_key=(trial_index,))
    rotation, init, sampling, tpa = [np.random.default_rng(s)
                                     for s in root.spawn(4)]
    return rotation, init, sampling, tpa


def build_problem(config: ExperimentConfig, rotation_rng,
                  value_transform=None) -> LedProblem:
    intrinsic = make_intrinsic(config.fn, config.eff_dim)
    rotation = np.eye(config.dim) if config.no_rotation \
        else random_rotation(config.dim, rotation_rng)
    budget = config.dim * config.budget_multiplier
    return led_wrap(intrinsic, config.dim, rotation=rotation, budget=budget,
                    value_transform=value_transform)


def _algo_flags(config: ExperimentConfig) -> tuple[bool, bool, bool]:
    """(led_stepsize, adapt_hyper, track_estimator) for the configuration."""
    if config.ablation == "hyper-only":
        return False, True, True
    if config.ablation == "norm-only":
        return True, False, True
    if config.algo == "led":
        return True, True, True
    return False, False, config.trace_led


def run_trial(config: ExperimentConfig, trial_index: int, *,
              value_transform=None, max_iterations: Optional[int] = None,
              stop_on_success: bool = True, initial_mean=None,
              sample_transform=None) -> TrialRecord:
    """Run one seeded trial.  The keyword-only arguments are testing hooks
    (fitness transform, bounded replay, state overrides) and leave the
    default behavior untouched."""
    config.validate()
    rotation_rng, init_rng, sampling_rng, tpa_rng = \
        trial_streams(config, trial_index)
    problem = build_problem(config, rotation_rng,
                            value_transform=value_transform)
    led_stepsize, adapt_hyper, track = _algo_flags(config)
    settings = RunSettings(
        mode=config.stepsize, led_stepsize=led_stepsize,
        adapt_hyper=adapt_hyper, track_estimator=track,
        stop=StopConfig(maxiter_as_evals=config.maxiter_as_evals))
    lam = config.lam if config.lam is not None else default_lambda(config.dim)

    rows: list[tuple] = []
    led_rows: list[tuple] = []

    def on_iteration(iteration, segment, opt, stats, prob):
        if config.record_trace:
            rows.append((iteration, prob.eval_count, prob.best_f,
                         stats.sigma, stats.n_eff_hat, segment))
        if config.trace_led and opt.estimator is not None:
            align = prob.effective_alignment_norms(opt.eigen_before.basis)
            for coord in range(prob.n_total):
                led_rows.append((iteration, coord,
                                 float(opt.estimator.snr[coord]),
                                 float(opt.estimator.v[coord]),
                                 float(align[coord])))

    if config.restart == "ipop":
        result: RunResult = ipop_run(
            problem, lam, settings, init_rng, sampling_rng, tpa_rng,
            on_iteration=on_iteration, max_iterations=max_iterations,
            stop_on_success=stop_on_success)
    else:
        result = run_single(
            problem, lam, settings, init_rng, sampling_rng, tpa_rng,
            on_iteration=on_iteration, max_iterations=max_iterations,
            stop_on_success=stop_on_success, initial_mean=initial_mean,
            sample_transform=sample_transform)

    return TrialRecord(trial=trial_index, seed=config.seed,
                       success=result.success,
                       evaluations=result.evaluations, best_f=result.best_f,
                       rows=rows, segments=result.segments,
                       led_rows=led_rows)


def run_trials(config: ExperimentConfig) -> list[TrialRecord]:
    """All trials of one configuration, optionally across processes; the
    result order (and content) is independent of the job count."""
    indices = list(range(config.trials))
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            records = list(pool.map(run_trial, [config] * len(indices),
                                    indices))
    else:
        records = [run_trial(config, i) for i in indices]
    records.sort(key=lambda r: r.trial)
    return records


def summarize(records: list[TrialRecord]) -> ExperimentSummary:
    """Success rate, median and interquartile evaluations over successful
    trials, and the median divided by the success rate."""
    trials = len(records)
    if trials == 0:
        return ExperimentSummary(0, 0, 0.0, None, None, None, None)
    evals = np.array([r.evaluations for r in records if r.success],
                     dtype=float)
    successes = len(evals)
    rate = successes / trials
    if successes == 0:
        return ExperimentSummary(trials, 0, 0.0, None, None, None, None)
    median = float(np.median(evals))
    q25, q75 = (float(q) for q in np.percentile(evals, [25.0, 75.0]))
    return ExperimentSummary(trials, successes, rate, median, q25, q75,
                             median / rate)


def _fmt(value) -> str:
    if isinstance(value, float):
        return f"{value:.17g}"
    return "" if value is None else str(value)


def emit_csv(records: list[TrialRecord], out_dir: str,
             config: ExperimentConfig,
             summary: Optional[ExperimentSummary] = None) -> dict[str, str]:
    """Write trace.csv, summary.csv, segments.csv (and led_trace.csv when
    per-coordinate rows exist).  Floats carry 17 significant digits so a
    parsed file reproduces the in-memory values exactly."""
    if summary is None:
        summary = summarize(records)
    os.makedirs(out_dir, exist_ok=True)
    paths = {"trace": os.path.join(out_dir, "trace.csv"),
             "summary": os.path.join(out_dir, "summary.csv"),
             "segments": os.path.join(out_dir, "segments.csv")}
    try:
        with open(paths["trace"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(TRACE_HEADER)
            for record in records:
                for row in record.rows:
                    writer.writerow([record.trial, record.seed]
                                    + [_fmt(v) for v in row])
        with open(paths["summary"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SUMMARY_HEADER)
            writer.writerow([config.algo, config.stepsize, config.restart,
                             config.ablation, config.fn, config.dim,
                             config.eff_dim, summary.trials,
                             summary.successes, _fmt(summary.success_rate),
                             _fmt(summary.median_evals),
                             _fmt(summary.q25_evals), _fmt(summary.q75_evals),
                             _fmt(summary.evals_div_success)])
        with open(paths["segments"], "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(SEGMENTS_HEADER)
            for record in records:
                for seg in record.segments:
                    writer.writerow([record.trial, seg.index, seg.lam,
                                     seg.reason, seg.evaluations,
                                     _fmt(seg.best_f)])
        if any(record.led_rows for record in records):
            paths["led_trace"] = os.path.join(out_dir, "led_trace.csv")
            with open(paths["led_trace"], "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(LED_TRACE_HEADER)
                for record in records:
                    for row in record.led_rows:
                        writer.writerow([record.trial]
                                        + [_fmt(v) for v in row])
    except OSError as exc:
        raise OSError(f"cannot write experiment output under "
                      f"{out_dir!r}: {exc}") from exc
    return paths


def run_experiment(config: ExperimentConfig) -> ExperimentSummary:
    """Run every trial of a configuration, write CSV outputs when an
    output directory is configured, and return the aggregates."""
    records = run_trials(config)
    summary = summarize(records)
    if config.out:
        emit_csv(records, config.out, config, summary)
    return summary


_BOOL_FIELDS = {"no_rotation", "trace_led", "maxiter_as_evals",
                "record_trace"}
_INT_FIELDS = {"fn", "dim", "eff_dim", "trials", "seed",
               "budget_multiplier", "jobs", "lam"}


def parse_config_file(path: str) -> dict:
    """key=value configuration file mirroring the CLI flags (keys use
    underscores; '#' starts a comment)."""
    known = {f.name for f in fields(ExperimentConfig)}
    values: dict = {}
    with open(path) as fh:
        for line_no, line in enumerate(fh, 1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise ConfigurationError(
                    f"{path}:{line_no}: expected key=value, got {line!r}")
            key, raw = (part.strip() for part in line.split("=", 1))
            key = key.replace("-", "_")
            if key not in known:
                raise ConfigurationError(f"{path}:{line_no}: unknown key {key!r}")
            if key in _BOOL_FIELDS:
                values[key] = raw.lower() in ("1", "true", "yes", "on")
            elif key in _INT_FIELDS:
                values[key] = int(raw)
            else:
                values[key] = raw
    return values


def config_from_sources(file_values: dict, overrides: dict) -> ExperimentConfig:
    """Defaults, then config-file values, then explicit flag overrides."""
    merged = dict(file_values)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    return replace(ExperimentConfig(), **merged)
