"""Stopping criteria and run drivers (single segment and IPOP restarts)."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .cmaes import StrategyParams, DistributionState
from .engine import CmaEs
from .linalg import condition_number
from .objective import BudgetExhausted, LedProblem

MAX_ITER = "MaxIter"
TOL_HIST_FUN = "TolHistFun"
STAGNATION = "Stagnation"
TOL_X = "TolX"
CONDITION_COV = "ConditionCov"
SUCCESS = "Success"
BUDGET = "Budget"
ITERATION_LIMIT = "IterationLimit"

HISTORY_CAP = 20000


@dataclass(frozen=True)
class StopConfig:
    """Criterion thresholds; defaults are the standard restart settings."""

    tol_hist_fun: float = 1e-12
    tol_x_factor: float = 1e-12
    cond_limit: float = 1e20
    history_capacity: int = HISTORY_CAP
    maxiter_as_evals: bool = False


class RunHistory:
    """Growable per-iteration histories of the best and median fitness."""

    def __init__(self, capacity: int = HISTORY_CAP):
        self.capacity = capacity
        self._best = np.empty(1024)
        self._median = np.empty(1024)
        self._len = 0

    def __len__(self) -> int:
        return self._len

    def append(self, best: float, median: float) -> None:
        if self._len == len(self._best):
            grow = np.empty(2 * self._len)
            grow[: self._len] = self._best
            self._best = grow
            grow = np.empty(2 * self._len)
            grow[: self._len] = self._median
            self._median = grow
        self._best[self._len] = best
        self._median[self._len] = median
        self._len += 1

    def best_tail(self, count: int) -> np.ndarray:
        return self._best[max(0, self._len - count): self._len]

    def median_tail(self, count: int) -> np.ndarray:
        return self._median[max(0, self._len - count): self._len]

    def best_window(self, start: int, count: int) -> np.ndarray:
        return self._best[start: start + count]

    def median_window(self, start: int, count: int) -> np.ndarray:
        return self._median[start: start + count]


def check_stop(state: DistributionState, params: StrategyParams,
               history: RunHistory, t: int, stop: StopConfig,
               sigma0: float, evaluations: int = 0) -> Optional[str]:
    """First matching stopping criterion after iteration ``t``, or None.

    Criteria are checked in a fixed order (MaxIter, TolHistFun, Stagnation,
    TolX, ConditionCov) so the logged reason is deterministic.
    """
    n = state.dim
    lam = params.lam

    limit = 100.0 + 50.0 * (n + 3) ** 2 / math.sqrt(lam)
    progress = evaluations if stop.maxiter_as_evals else t
    if progress > limit:
        return MAX_ITER

    window = 10 + math.ceil(30.0 * n / lam)
    if len(history) >= window:
        recent = history.best_tail(window)
        if float(np.max(recent) - np.min(recent)) < stop.tol_hist_fun:
            return TOL_HIST_FUN

    h_stag = max(min(0.2 * t, float(stop.history_capacity)),
                 120.0 + 30.0 * n / lam)
    if len(history) >= h_stag:
        span = int(h_stag)
        width = int(0.3 * h_stag)
        if width >= 1:
            start = len(history) - span
            best_old = np.median(history.best_window(start, width))
            best_new = np.median(history.best_tail(width))
            med_old = np.median(history.median_window(start, width))
            med_new = np.median(history.median_tail(width))
            if best_new >= best_old and med_new >= med_old:
                return STAGNATION

    scale = stop.tol_x_factor * sigma0
    stds = state.sigma * np.sqrt(np.diagonal(state.cov))
    if np.all(stds < scale) and np.all(np.abs(state.sigma * state.p_c) < scale):
        return TOL_X

    if condition_number(state.eigen) > stop.cond_limit:
        return CONDITION_COV

    return None


@dataclass
class SegmentLog:
    """Outcome of one restart segment."""

    index: int
    lam: int
    reason: str
    iterations: int
    evaluations: int
    best_f: float


@dataclass
class RunSettings:
    """Everything a run driver needs besides the problem and the rng."""

    mode: str = "csa"
    led_stepsize: bool = False
    adapt_hyper: bool = False
    track_estimator: bool = False
    sigma0: float = 2.0
    init_low: float = -5.0
    init_high: float = 5.0
    target_f: float = 1e-8
    stop: StopConfig = field(default_factory=StopConfig)


@dataclass
class RunResult:
    """Outcome of a full trial (one or more segments)."""

    success: bool
    evaluations: int
    best_f: float
    segments: list[SegmentLog]
    iterations: int
    final_optimizer: Optional[CmaEs] = None


def run_segment(problem: LedProblem, lam: int, settings: RunSettings,
                init_rng: np.random.Generator,
                sampling_rng: np.random.Generator,
                tpa_rng: Optional[np.random.Generator],
                segment_index: int, iteration_offset: int,
                on_iteration: Optional[Callable] = None,
                max_iterations: Optional[int] = None,
                stop_on_success: bool = True,
                initial_mean: Optional[np.ndarray] = None,
                sample_transform=None) -> tuple[str, CmaEs, int]:
    """Run one segment to success, a stopping criterion, or budget
    exhaustion; returns (reason, optimizer, iterations run)."""
    if initial_mean is None:
        m0 = init_rng.uniform(settings.init_low, settings.init_high,
                              problem.n_total)
    else:
        m0 = np.asarray(initial_mean, dtype=float)
    opt = CmaEs(problem.n_total, lam, settings.mode, m0, settings.sigma0,
                sampling_rng, tpa_rng, led_stepsize=settings.led_stepsize,
                adapt_hyper=settings.adapt_hyper,
                track_estimator=settings.track_estimator,
                sample_transform=sample_transform)
    history = RunHistory(settings.stop.history_capacity)
    t = 0
    while True:
        try:
            stats = opt.run_iteration(problem)
        except BudgetExhausted:
            return BUDGET, opt, t
        t += 1
        history.append(stats.best, stats.median)
        if on_iteration is not None:
            on_iteration(iteration_offset + t, segment_index, opt, stats,
                         problem)
        if stop_on_success and problem.best_f < settings.target_f:
            return SUCCESS, opt, t
        reason = check_stop(opt.state, opt.params, history, t, settings.stop,
                            settings.sigma0, evaluations=problem.eval_count)
        if reason is not None:
            return reason, opt, t
        if max_iterations is not None and t >= max_iterations:
            return ITERATION_LIMIT, opt, t


def run_single(problem: LedProblem, lam: int, settings: RunSettings,
               init_rng, sampling_rng, tpa_rng,
               on_iteration=None, max_iterations=None,
               stop_on_success: bool = True, initial_mean=None,
               sample_transform=None) -> RunResult:
    """One segment without restarting."""
    reason, opt, t = run_segment(
        problem, lam, settings, init_rng, sampling_rng, tpa_rng,
        segment_index=0, iteration_offset=0, on_iteration=on_iteration,
        max_iterations=max_iterations, stop_on_success=stop_on_success,
        initial_mean=initial_mean, sample_transform=sample_transform)
    segment = SegmentLog(0, lam, reason, t, problem.eval_count,
                         problem.best_f)
    return RunResult(success=reason == SUCCESS,
                     evaluations=problem.eval_count, best_f=problem.best_f,
                     segments=[segment], iterations=t, final_optimizer=opt)


def ipop_run(problem: LedProblem, base_lambda: int, settings: RunSettings,
             init_rng, sampling_rng, tpa_rng,
             on_iteration=None, max_iterations=None,
             stop_on_success: bool = True) -> RunResult:
    """Restart loop: double the sample size after every criterion-triggered
    stop, sharing the problem's evaluation counter across segments.  All
    optimizer and estimator state reinitializes per segment."""
    lam = base_lambda
    segments: list[SegmentLog] = []
    total_iterations = 0
    opt = None
    while True:
        remaining = None if max_iterations is None \
            else max_iterations - total_iterations
        reason, opt, t = run_segment(
            problem, lam, settings, init_rng, sampling_rng, tpa_rng,
            segment_index=len(segments), iteration_offset=total_iterations,
            on_iteration=on_iteration, max_iterations=remaining,
            stop_on_success=stop_on_success)
        total_iterations += t
        segments.append(SegmentLog(len(segments), lam, reason, t,
                                   problem.eval_count, problem.best_f))
        if reason in (SUCCESS, BUDGET, ITERATION_LIMIT):
            break
        lam *= 2
    return RunResult(success=segments[-1].reason == SUCCESS,
                     evaluations=problem.eval_count, best_f=problem.best_f,
                     segments=segments, iterations=total_iterations,
                     final_optimizer=opt)
