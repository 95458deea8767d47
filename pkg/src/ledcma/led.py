"""Per-dimension effectiveness estimation from update directions.

The mean shift and the rank-mu covariance direction are expressed in the
eigenbasis of the sampling covariance.  On redundant rotated coordinates
those components carry no persistent sign, so an exponentially smoothed
sign accumulator yields a per-coordinate signal-to-noise ratio close to
zero there and close to one on effective coordinates.  A sigmoid with an
adaptive threshold and gain turns the ratios into effectiveness weights
``v`` in [0, 1]; their sum estimates the number of effective dimensions,
which in turn drives the hyperparameter schedule.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .cmaes import StrategyParams, default_params
from .linalg import EigenPair

SMOOTHING = 0.01
THRESHOLD_COEFFS = (0.106, 0.0776, 0.0665, 0.947)
GAIN_LOG_MIN = -2.0
GAIN_LOG_MAX = 3.0
_EXP_CAP = 700.0


def snr_threshold(n: int, lam: int) -> float:
    """Fitted upper level of the SNR noise floor for dimension ``n`` and
    sample size ``lam``; grows with n, shrinks with lam."""
    a1, a2, a3, a4 = THRESHOLD_COEFFS
    return (a1 + a2 * math.log(n)) * (a3 + a4 / math.sqrt(lam))


def sigmoid_gain(max_snr: float) -> float:
    """Gain schedule: steep (1e3) when some ratio saturates, flat (1e-2)
    when every ratio sits at the noise floor."""
    return 10.0 ** ((GAIN_LOG_MAX - GAIN_LOG_MIN) * max_snr + GAIN_LOG_MIN)


def effectiveness_from_snr(snr: np.ndarray, threshold: float,
                           gain: float) -> tuple[np.ndarray, float]:
    """Sigmoid transform of the SNR vector, normalized so a ratio one unit
    above threshold maps to one; returns (v, estimated dimension count)."""
    arg = np.clip(-gain * (snr - threshold), None, _EXP_CAP)
    ref = 1.0 / (1.0 + math.exp(-gain))
    v = (1.0 / (1.0 + np.exp(arg))) / ref
    v = np.clip(v, 0.0, 1.0)
    return v, max(1.0, float(np.sum(v)))


@dataclass(frozen=True)
class RotatedDirections:
    """Update directions in the eigenbasis of the sampling covariance."""

    mean: np.ndarray
    cov_diag: np.ndarray


def rotate_directions(delta_m: np.ndarray, delta_mu_c: np.ndarray,
                      eigen: EigenPair) -> RotatedDirections:
    """Rotate the mean shift and take per-eigenvector quadratic forms of
    the rank-mu direction, without forming the full rotated matrix."""
    basis = eigen.basis
    mean = basis.T @ delta_m
    cov_diag = np.sum((delta_mu_c @ basis) * basis, axis=0)
    return RotatedDirections(mean=mean, cov_diag=cov_diag)


class LedEstimator:
    """Sign-based SNR accumulators and the effectiveness vector.

    All accumulators start at zero, ``v`` starts at all-ones and
    ``n_eff_hat`` at the ambient dimension, so the first iteration behaves
    like plain CMA-ES.
    """

    def __init__(self, n: int, lam: int, beta: float = SMOOTHING):
        self.n = n
        self.beta = beta
        self.threshold = snr_threshold(n, lam)
        self.s_mean = np.zeros(n)
        self.gamma_mean = np.zeros(n)
        self.s_cov = np.zeros(n)
        self.gamma_cov = np.zeros(n)
        self.snr = np.zeros(n)
        self.v = np.ones(n)
        self.n_eff_hat = float(n)
        self.updates = 0

    def update_accumulators(self, dirs: RotatedDirections) -> None:
        """Fold the signs of the rotated directions into the accumulators
        (sign(0) contributes nothing)."""
        b = self.beta
        gain = math.sqrt(b * (2.0 - b))
        step = b * (2.0 - b)
        self.s_mean = (1.0 - b) * self.s_mean + gain * np.sign(dirs.mean)
        self.gamma_mean = (1.0 - b) ** 2 * self.gamma_mean + step
        self.s_cov = (1.0 - b) * self.s_cov + gain * np.sign(dirs.cov_diag)
        self.gamma_cov = (1.0 - b) ** 2 * self.gamma_cov + step
        self.updates += 1

    def snr_estimate(self) -> np.ndarray:
        """Combined per-coordinate SNR, the larger of the mean-shift and
        covariance branches; each branch is bounded by one."""
        if self.updates == 0:
            raise RuntimeError("SNR requested before any accumulator update")
        scale = self.beta / (2.0 - self.beta)
        ratio_mean = self.s_mean**2 / self.gamma_mean
        ratio_cov = self.s_cov**2 / self.gamma_cov
        return scale * np.maximum(ratio_mean, ratio_cov)

    def observe(self, dirs: RotatedDirections) -> None:
        """One full estimator step: accumulate, re-estimate SNR, refresh
        the effectiveness vector and the dimension-count estimate."""
        self.update_accumulators(dirs)
        self.snr = self.snr_estimate()
        gain = sigmoid_gain(float(np.max(self.snr)))
        self.v, self.n_eff_hat = effectiveness_from_snr(
            self.snr, self.threshold, gain)


def adapt_hyperparameters(n_eff_hat: float, lam: int,
                          mode: str) -> StrategyParams:
    """Learning-rate constants recomputed for the estimated dimension
    count; the sample size and recombination weights stay at their
    defaults for this lambda."""
    return default_params(n_eff_hat, lam, mode)
