"""Step-size adaptation strategies.

Four strategies share the contract: each owns its accumulator state and,
once per iteration, emits a multiplicative sigma update together with the
Heaviside gate consumed by the evolution-path update.  The two TPA
strategies additionally inject a symmetric pair of candidates along the
previous mean shift before evaluation.
"""
from __future__ import annotations

import math
from typing import Optional

import numpy as np

from .cmaes import DistributionState, StrategyParams

SIGMA_MIN = 1e-32
SIGMA_MAX = 1e32


def clamp_sigma(sigma: float) -> float:
    return min(max(sigma, SIGMA_MIN), SIGMA_MAX)


def expected_norm(n: float) -> float:
    """Standard approximation of E||N(0, I_n)||."""
    return math.sqrt(n) * (1.0 - 1.0 / (4.0 * n) + 1.0 / (21.0 * n * n))


class Csa:
    """Cumulative step-size adaptation on the whitened mean shift."""

    injects = False

    def __init__(self, n: int):
        self.n = n
        self.p_sigma = np.zeros(n)

    def update(self, z_avg: np.ndarray, params: StrategyParams,
               t: int) -> tuple[float, int]:
        c_s = params.c_sigma
        self.p_sigma = (1.0 - c_s) * self.p_sigma \
            + math.sqrt(c_s * (2.0 - c_s) * params.mu_eff) * z_avg
        norm = float(np.linalg.norm(self.p_sigma))
        chi = expected_norm(self.n)
        mult = math.exp((c_s / params.d_sigma) * (norm / chi - 1.0))
        correction = math.sqrt(1.0 - (1.0 - c_s) ** (2 * (t + 1)))
        h_sigma = int(norm / correction < (1.4 + 2.0 / (self.n + 1)) * chi)
        return mult, h_sigma


class EffectiveCsa:
    """CSA measuring the path norm only on estimated-effective dimensions.

    The path lives in the eigenbasis of the sampling covariance: callers
    pass the rotated whitened mean shift, masked here by sqrt(v).  Since
    the masked path is no longer standard-normal under random selection,
    the comparison norm is the accumulated per-coordinate effectiveness
    ``p_v`` (the expected squared norm), which makes the update a
    squared-norm rule rather than the original norm rule.
    """

    injects = False

    def __init__(self, n: int):
        self.n = n
        self.p_sigma = np.zeros(n)
        self.p_v = np.zeros(n)

    def update(self, z_avg_rotated: np.ndarray, v: np.ndarray,
               n_eff_hat: float, params: StrategyParams,
               t: int) -> tuple[float, int]:
        c_s = params.c_sigma
        self.p_sigma = (1.0 - c_s) * self.p_sigma \
            + math.sqrt(c_s * (2.0 - c_s) * params.mu_eff) \
            * (np.sqrt(v) * z_avg_rotated)
        self.p_v = (1.0 - c_s) ** 2 * self.p_v + c_s * (2.0 - c_s) * v
        p_v_sum = float(np.sum(self.p_v))
        if p_v_sum <= 0.0:
            return 1.0, 1
        sq_norm = float(self.p_sigma @ self.p_sigma)
        mult = math.exp((c_s / params.d_sigma) * (sq_norm / p_v_sum - 1.0))
        correction = 1.0 - (1.0 - c_s) ** (2 * (t + 1))
        bound = (1.4 + 2.0 / (n_eff_hat + 1.0)) ** 2 * p_v_sum
        h_sigma = int(sq_norm / correction < bound)
        return mult, h_sigma


def _symmetric_pair(state: DistributionState, direction: np.ndarray,
                    mask: Optional[np.ndarray],
                    rng: np.random.Generator) -> Optional[np.ndarray]:
    """Two points m +- sigma * len * direction, scaled so the pair spans a
    random Gaussian length measured on the (masked) effective geometry.
    Returns None when the direction is degenerate."""
    if direction is None or not np.any(direction):
        return None
    rotated = state.eigen.basis.T @ direction
    masked = rotated if mask is None else mask * rotated
    denom_sq = float(np.sum(masked * masked / state.eigen.values))
    if denom_sq <= 0.0:
        return None
    noise = rng.standard_normal(state.dim)
    length = float(np.linalg.norm(noise if mask is None else noise * mask))
    step = state.sigma * length / math.sqrt(denom_sq) * direction
    return np.array([state.mean + step, state.mean - step])


class Tpa:
    """Two-point adaptation: a rank comparison along the last mean shift."""

    injects = True

    def __init__(self, n: int):
        self.n = n
        self.s = 0.0
        self.prev_delta_m: Optional[np.ndarray] = None

    def inject(self, state: DistributionState, v: Optional[np.ndarray],
               rng: np.random.Generator) -> Optional[np.ndarray]:
        return _symmetric_pair(state, self.prev_delta_m, None, rng)

    def update(self, rank_plus: Optional[int], rank_minus: Optional[int],
               params: StrategyParams) -> tuple[float, int]:
        """Accumulate the rank difference of the injected pair (1-based
        ranks among all lambda evaluated samples); without an injection
        this iteration the accumulator simply decays."""
        c_s = params.c_sigma
        if rank_plus is None:
            self.s = (1.0 - c_s) * self.s
        else:
            self.s = (1.0 - c_s) * self.s \
                + c_s * (rank_minus - rank_plus) / (params.lam - 1)
        mult = math.exp(self.s / params.d_sigma)
        h_sigma = int(self.s < 0.5)
        return mult, h_sigma

    def remember(self, delta_m: np.ndarray) -> None:
        self.prev_delta_m = np.asarray(delta_m, dtype=float).copy()


class EffectiveTpa(Tpa):
    """TPA whose injected pair is scaled on the effective dimensions only;
    accumulation and sigma update are unchanged from the original."""

    def inject(self, state: DistributionState, v: Optional[np.ndarray],
               rng: np.random.Generator) -> Optional[np.ndarray]:
        return _symmetric_pair(state, self.prev_delta_m, v, rng)
