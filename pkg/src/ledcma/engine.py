"""Iteration driver wiring the distribution updates, a step-size strategy,
and (optionally) the effectiveness estimator into one generation step."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .cmaes import (
    CSA,
    DistributionState,
    StrategyParams,
    default_params,
    mean_direction,
    rank,
    rank_mu_direction,
    rank_one_direction,
    sample_population,
    update_covariance,
    update_mean,
    update_pc,
    with_constants_from,
)
from .led import LedEstimator, adapt_hyperparameters, rotate_directions
from .stepsize import Csa, EffectiveCsa, EffectiveTpa, Tpa, clamp_sigma


@dataclass(frozen=True)
class IterationStats:
    """Per-generation figures consumed by the run drivers."""

    best: float
    median: float
    sigma: float
    n_eff_hat: float


class CmaEs:
    """One optimizer instance: CMA-ES or its effective-dimension variant.

    ``led_stepsize`` switches the step-size strategy to the variant that
    measures norms on estimated-effective dimensions; ``adapt_hyper``
    refreshes the learning-rate constants from the estimated dimension
    count after every iteration.  Either flag (or ``track_estimator``)
    keeps the estimator running.
    """

    def __init__(self, dim: int, lam: int, mode: str, m0: np.ndarray,
                 sigma0: float, sampling_rng: np.random.Generator,
                 tpa_rng: Optional[np.random.Generator] = None, *,
                 led_stepsize: bool = False, adapt_hyper: bool = False,
                 track_estimator: bool = False,
                 params: Optional[StrategyParams] = None,
                 sample_transform=None):
        self.dim = dim
        self.mode = mode
        self.params = params if params is not None \
            else default_params(dim, lam, mode)
        self.state = DistributionState(m0, sigma0)
        self.sampling_rng = sampling_rng
        self.tpa_rng = tpa_rng
        self.led_stepsize = led_stepsize
        self.adapt_hyper = adapt_hyper
        self.sample_transform = sample_transform
        if mode == CSA:
            self.strategy = EffectiveCsa(dim) if led_stepsize else Csa(dim)
        else:
            self.strategy = EffectiveTpa(dim) if led_stepsize else Tpa(dim)
        track = led_stepsize or adapt_hyper or track_estimator
        self.estimator = LedEstimator(dim, self.params.lam) if track else None
        # sampling-time eigenbasis of the last completed iteration, kept for
        # diagnostics that must match the estimator's rotation
        self.eigen_before = None

    @property
    def n_eff_hat(self) -> float:
        return self.estimator.n_eff_hat if self.estimator else float(self.dim)

    def run_iteration(self, problem) -> IterationStats:
        """One generation: sample (with TPA injection when armed), evaluate,
        rank, update step-size state, evolution path, mean, covariance,
        sigma, and finally the effectiveness estimate."""
        state = self.state
        params = self.params
        t = state.iteration

        injected = None
        if self.strategy.injects:
            v = self.estimator.v if self.led_stepsize else None
            injected = self.strategy.inject(state, v, self.tpa_rng)

        pop = sample_population(state, params, self.sampling_rng,
                                z_transform=self.sample_transform)
        slot_plus = params.lam - 2
        if injected is not None:
            pop.x[slot_plus:] = injected
            pop.y[slot_plus:] = (injected - state.mean) / state.sigma
            pop.z[slot_plus:] = pop.y[slot_plus:] @ state.inv_sqrt_cov

        pop.f = problem.evaluate_batch(pop.x)
        pop.order = rank(pop.f)

        delta_m, z_avg = mean_direction(pop, params, state)
        delta_mu_c = rank_mu_direction(pop, params, state.cov)

        if isinstance(self.strategy, EffectiveCsa):
            z_rotated = state.eigen.basis.T @ z_avg
            mult, h_sigma = self.strategy.update(
                z_rotated, self.estimator.v, self.estimator.n_eff_hat,
                params, t)
        elif isinstance(self.strategy, Csa):
            mult, h_sigma = self.strategy.update(z_avg, params, t)
        else:
            if injected is None:
                mult, h_sigma = self.strategy.update(None, None, params)
            else:
                positions = np.empty(params.lam, dtype=int)
                positions[pop.order] = np.arange(1, params.lam + 1)
                mult, h_sigma = self.strategy.update(
                    int(positions[slot_plus]), int(positions[slot_plus + 1]),
                    params)

        p_c = update_pc(state.p_c, delta_m, state.sigma, h_sigma, params)
        delta_one_c = rank_one_direction(p_c, state.cov)
        new_cov = update_covariance(state.cov, delta_mu_c, delta_one_c,
                                    h_sigma, params, t)
        new_mean = update_mean(state.mean, delta_m, params)

        eigen_before = state.eigen
        state.p_c = p_c
        state.mean = new_mean
        state.set_cov(new_cov)
        state.sigma = clamp_sigma(state.sigma * mult)

        if self.estimator is not None:
            dirs = rotate_directions(delta_m, delta_mu_c, eigen_before)
            self.estimator.observe(dirs)
            if self.adapt_hyper:
                fresh = adapt_hyperparameters(self.estimator.n_eff_hat,
                                              params.lam, self.mode)
                self.params = with_constants_from(params, fresh)

        if self.strategy.injects:
            self.strategy.remember(delta_m)
        state.iteration += 1
        self.eigen_before = eigen_before

        return IterationStats(best=float(np.min(pop.f)),
                              median=float(np.median(pop.f)),
                              sigma=state.sigma,
                              n_eff_hat=self.n_eff_hat)
