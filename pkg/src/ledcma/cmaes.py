"""Core CMA-ES machinery: sampling, ranked recombination, mean update,
evolution path, rank-mu / rank-one covariance updates, and the default
hyperparameter schedule."""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from .linalg import EigenPair, inv_sqrt_from_eigen, sqrt_from_eigen, sym_eigen, symmetrize
from .objective import ConfigurationError

CSA = "csa"
TPA = "tpa"


@dataclass(frozen=True)
class StrategyParams:
    """Sample size, recombination weights, and learning-rate constants."""

    lam: int
    mu: int
    weights: np.ndarray
    mu_eff: float
    c_m: float
    c_c: float
    c_1: float
    c_mu: float
    c_sigma: float
    d_sigma: float


def default_lambda(n: int) -> int:
    """Default sample size 4 + floor(3 ln N)."""
    return 4 + int(math.floor(3.0 * math.log(n)))


def recombination_weights(lam: int) -> np.ndarray:
    """Positive, strictly decreasing weights summing to one."""
    raw = np.log((lam + 1) / 2.0) - np.log(np.arange(1, lam + 1))
    positive = raw[raw > 0.0]
    return positive / positive.sum()


def default_params(n: float, lam: int, mode: str = CSA) -> StrategyParams:
    """Standard hyperparameter setting for dimension ``n``.

    ``n`` may be fractional so an estimated effective-dimension count can
    stand in for the ambient dimension.
    """
    if lam < 4:
        raise ConfigurationError(f"sample size must be >= 4, got {lam}")
    if not n > 0.0:
        raise ConfigurationError(f"dimension must be positive, got {n}")
    if mode not in (CSA, TPA):
        raise ConfigurationError(f"unknown step-size mode {mode!r}")
    weights = recombination_weights(lam)
    mu = len(weights)
    mu_eff = 1.0 / float(np.sum(weights**2))
    c_c = (4.0 + mu_eff / n) / (n + 4.0 + 2.0 * mu_eff / n)
    c_1 = 2.0 / ((n + 1.3) ** 2 + mu_eff)
    c_mu = min(1.0 - c_1,
               2.0 * (mu_eff - 2.0 + 1.0 / mu_eff) / ((n + 2.0) ** 2 + mu_eff))
    if mode == CSA:
        c_sigma = (mu_eff + 2.0) / (n + mu_eff + 5.0)
        d_sigma = 1.0 + c_sigma + 2.0 * max(
            0.0, math.sqrt((mu_eff - 1.0) / (n + 1.0)) - 1.0)
    else:
        c_sigma = 0.3
        d_sigma = math.sqrt(n)
    return StrategyParams(lam=lam, mu=mu, weights=weights, mu_eff=mu_eff,
                          c_m=1.0, c_c=c_c, c_1=c_1, c_mu=c_mu,
                          c_sigma=c_sigma, d_sigma=d_sigma)


def with_constants_from(params: StrategyParams, fresh: StrategyParams) -> StrategyParams:
    """Copy the learning-rate constants of ``fresh`` onto ``params`` while
    keeping the sample size and recombination weights untouched."""
    return replace(params, c_c=fresh.c_c, c_1=fresh.c_1, c_mu=fresh.c_mu,
                   c_sigma=fresh.c_sigma, d_sigma=fresh.d_sigma)


class DistributionState:
    """Mean, covariance (with cached eigendecomposition), step-size, and
    the rank-one evolution path of one optimizer instance."""

    def __init__(self, mean: np.ndarray, sigma: float,
                 cov: Optional[np.ndarray] = None):
        self.mean = np.asarray(mean, dtype=float).copy()
        self.sigma = float(sigma)
        self.cov = np.eye(len(self.mean)) if cov is None \
            else symmetrize(np.asarray(cov, dtype=float))
        self.p_c = np.zeros(len(self.mean))
        self.iteration = 0
        self.eigen: EigenPair
        self.sqrt_cov: np.ndarray
        self.inv_sqrt_cov: np.ndarray
        self._refresh_eigen()

    @property
    def dim(self) -> int:
        return len(self.mean)

    def _refresh_eigen(self) -> None:
        self.eigen = sym_eigen(self.cov)
        self.sqrt_cov = sqrt_from_eigen(self.eigen)
        self.inv_sqrt_cov = inv_sqrt_from_eigen(self.eigen)

    def set_cov(self, cov: np.ndarray) -> None:
        self.cov = cov
        self._refresh_eigen()


@dataclass
class Population:
    """One generation of candidates: z draws, shaped steps y, points x."""

    z: np.ndarray
    y: np.ndarray
    x: np.ndarray
    f: Optional[np.ndarray] = None
    order: Optional[np.ndarray] = None


def sample_population(state: DistributionState, params: StrategyParams,
                      rng: np.random.Generator,
                      z_transform=None) -> Population:
    """Draw lambda candidates.  Consumes exactly lambda * N standard-normal
    values in sample-major order (one candidate's coordinates at a time)."""
    z = rng.standard_normal((params.lam, state.dim))
    if z_transform is not None:
        z = z_transform(z)
    y = z @ state.sqrt_cov  # sqrt_cov is symmetric
    x = state.mean + state.sigma * y
    return Population(z=z, y=y, x=x)


def rank(f: np.ndarray) -> np.ndarray:
    """Stable ascending sort order of fitness values (ties by index)."""
    f = np.asarray(f)
    if not np.isfinite(f).all():
        raise ValueError("non-finite fitness")
    return np.argsort(f, kind="stable")


def mean_direction(pop: Population, params: StrategyParams,
                   state: DistributionState) -> tuple[np.ndarray, np.ndarray]:
    """Weighted recombination step ``delta_m`` and its whitened image
    ``z_avg = C^(-1/2) delta_m / sigma``."""
    selected = pop.order[: params.mu]
    y_bar = params.weights @ pop.y[selected]
    delta_m = state.sigma * y_bar
    z_avg = state.inv_sqrt_cov @ y_bar
    return delta_m, z_avg


def update_mean(mean: np.ndarray, delta_m: np.ndarray,
                params: StrategyParams) -> np.ndarray:
    return mean + params.c_m * delta_m


def rank_mu_direction(pop: Population, params: StrategyParams,
                      cov: np.ndarray) -> np.ndarray:
    """Weighted sample covariance of the selected steps, relative to C."""
    selected = pop.order[: params.mu]
    y_sel = pop.y[selected]
    return (params.weights[:, None] * y_sel).T @ y_sel - cov


def update_pc(p_c: np.ndarray, delta_m: np.ndarray, sigma: float,
              h_sigma: int, params: StrategyParams) -> np.ndarray:
    """Accumulate the normalized mean shift into the evolution path; the
    Heaviside gate stalls the accumulation when sigma moves too fast."""
    c_c = params.c_c
    gain = math.sqrt(c_c * (2.0 - c_c) * params.mu_eff)
    return (1.0 - c_c) * p_c + h_sigma * gain * (delta_m / sigma)


def rank_one_direction(p_c: np.ndarray, cov: np.ndarray) -> np.ndarray:
    return np.outer(p_c, p_c) - cov


def update_covariance(cov: np.ndarray, delta_mu_c: np.ndarray,
                      delta_one_c: np.ndarray, h_sigma: int,
                      params: StrategyParams, iteration: int) -> np.ndarray:
    """Combined covariance update; symmetrized, errors on non-finite."""
    c_c = params.c_c
    leak = 1.0 + (1 - h_sigma) * params.c_1 * c_c * (2.0 - c_c)
    new_cov = leak * cov + params.c_mu * delta_mu_c + params.c_1 * delta_one_c
    if not np.isfinite(new_cov).all():
        raise RuntimeError(f"non-finite covariance at iteration {iteration}")
    return symmetrize(new_cov)
