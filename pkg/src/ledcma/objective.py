"""Benchmark objectives and the low-effective-dimensionality wrapper.

The nine benchmark functions are defined on their effective coordinates
only.  A wrapped problem rotates the input, keeps the first ``n_eff``
rotated coordinates and feeds them to the intrinsic function, so the
remaining rotated coordinates never influence the value.
"""
from __future__ import annotations

from typing import Callable, Optional

import numpy as np

from .linalg import orthonormalize


class ConfigurationError(ValueError):
    """Invalid problem or algorithm configuration."""


class BudgetExhausted(RuntimeError):
    """Raised when an evaluation would exceed the evaluation budget."""


def _sphere(xs: np.ndarray) -> np.ndarray:
    return np.sum(xs * xs, axis=1)


def _ellipsoid(xs: np.ndarray) -> np.ndarray:
    n = xs.shape[1]
    scales = 10.0 ** (6.0 * np.arange(n) / (n - 1))
    return np.sum(scales * xs * xs, axis=1)


def _different_powers(xs: np.ndarray) -> np.ndarray:
    n = xs.shape[1]
    powers = 2.0 + 4.0 * np.arange(n) / (n - 1)
    return np.sqrt(np.sum(np.abs(xs) ** powers, axis=1))


def _ackley(xs: np.ndarray) -> np.ndarray:
    mean_sq = np.mean(xs * xs, axis=1)
    mean_cos = np.mean(np.cos(2.0 * np.pi * xs), axis=1)
    return 20.0 - 20.0 * np.exp(-0.2 * np.sqrt(mean_sq)) + np.e - np.exp(mean_cos)


def _rosenbrock(xs: np.ndarray) -> np.ndarray:
    head = xs[:, :-1]
    tail = xs[:, 1:]
    return np.sum(100.0 * (head * head - tail) ** 2 + (head - 1.0) ** 2, axis=1)


def _attractive_sector(xs: np.ndarray) -> np.ndarray:
    n = xs.shape[1]
    scales = 10.0 ** (0.5 * np.arange(n) / (n - 1))
    z = scales * xs
    s = np.where(z > 0.0, 100.0, 1.0)
    return np.sum((s * z) ** 2, axis=1)


def _sharp_ridge(xs: np.ndarray) -> np.ndarray:
    return xs[:, 0] ** 2 + 100.0 * np.sqrt(np.sum(xs[:, 1:] ** 2, axis=1))


def _bohachevsky(xs: np.ndarray) -> np.ndarray:
    head = xs[:, :-1]
    tail = xs[:, 1:]
    return np.sum(head * head + 2.0 * tail * tail
                  - 0.3 * np.cos(3.0 * np.pi * head)
                  - 0.4 * np.cos(4.0 * np.pi * tail) + 0.7, axis=1)


def _rastrigin(xs: np.ndarray) -> np.ndarray:
    return np.sum(xs * xs + 10.0 * (1.0 - np.cos(2.0 * np.pi * xs)), axis=1)


_FUNCTIONS: dict[int, tuple[str, Callable[[np.ndarray], np.ndarray], int]] = {
    1: ("sphere", _sphere, 1),
    2: ("ellipsoid", _ellipsoid, 2),
    3: ("different-powers", _different_powers, 2),
    4: ("ackley", _ackley, 1),
    5: ("rosenbrock", _rosenbrock, 2),
    6: ("attractive-sector", _attractive_sector, 2),
    7: ("sharp-ridge", _sharp_ridge, 2),
    8: ("bohachevsky", _bohachevsky, 2),
    9: ("rastrigin", _rastrigin, 1),
}


class IntrinsicFunction:
    """One of the nine benchmark functions on its effective coordinates."""

    def __init__(self, fid: int, n_eff: int, name: str,
                 batch_fn: Callable[[np.ndarray], np.ndarray]):
        self.id = fid
        self.n_eff = n_eff
        self.name = name
        self._batch_fn = batch_fn

    def batch(self, xs: np.ndarray) -> np.ndarray:
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        if xs.shape[1] != self.n_eff:
            raise ConfigurationError(
                f"expected {self.n_eff} coordinates, got {xs.shape[1]}")
        return self._batch_fn(xs)

    def __call__(self, x: np.ndarray) -> float:
        return float(self.batch(np.asarray(x, dtype=float)[None, :])[0])


def make_intrinsic(fid: int, n_eff: int) -> IntrinsicFunction:
    """Build benchmark function ``fid`` (1-9) on ``n_eff`` coordinates."""
    if fid not in _FUNCTIONS:
        raise ConfigurationError(f"unknown function id {fid}")
    name, batch_fn, min_n_eff = _FUNCTIONS[fid]
    if n_eff < min_n_eff:
        raise ConfigurationError(
            f"{name} needs n_eff >= {min_n_eff}, got {n_eff}")
    return IntrinsicFunction(fid, n_eff, name, batch_fn)


def optimum_point(fid: int, n_eff: int) -> np.ndarray:
    """Location of the global minimum (value 0) of function ``fid``."""
    if fid == 5:
        return np.ones(n_eff)
    return np.zeros(n_eff)


def random_rotation(n: int, rng: np.random.Generator) -> np.ndarray:
    """Haar-distributed proper rotation (det +1) of size n x n."""
    if n < 1:
        raise ConfigurationError("rotation size must be >= 1")
    q = orthonormalize(rng.standard_normal((n, n)))
    if np.linalg.det(q) < 0.0:
        q = q.copy()
        q[:, -1] *= -1.0
    return q


class LedProblem:
    """Rotated benchmark with redundant dimensions and budget accounting.

    Evaluating ``x`` computes the intrinsic function on the first ``n_eff``
    coordinates of ``R x``.  The evaluation counter and running best are
    per-trial mutable state; the budget check happens before evaluation,
    so the evaluation that would exceed the budget is never performed.
    """

    def __init__(self, intrinsic: IntrinsicFunction, n_total: int,
                 rotation: np.ndarray, budget: int,
                 value_transform: Optional[Callable[[np.ndarray], np.ndarray]] = None):
        if n_total < intrinsic.n_eff:
            raise ConfigurationError(
                f"n_total {n_total} below n_eff {intrinsic.n_eff}")
        rotation = np.asarray(rotation, dtype=float)
        if rotation.shape != (n_total, n_total):
            raise ConfigurationError("rotation shape mismatch")
        if budget < 1:
            raise ConfigurationError("budget must be positive")
        self.intrinsic = intrinsic
        self.n_total = n_total
        self.rotation = rotation
        self.budget = int(budget)
        self.value_transform = value_transform
        self.eval_count = 0
        self.best_f = float("inf")

    @property
    def n_eff(self) -> int:
        return self.intrinsic.n_eff

    @property
    def remaining_budget(self) -> int:
        return self.budget - self.eval_count

    def _values(self, xs: np.ndarray) -> np.ndarray:
        rotated = xs @ self.rotation.T
        vals = self.intrinsic.batch(rotated[:, : self.n_eff])
        if self.value_transform is not None:
            vals = self.value_transform(vals)
        return vals

    def evaluate(self, x: np.ndarray) -> float:
        """Evaluate a single point, counting it against the budget."""
        return float(self.evaluate_batch(np.asarray(x, dtype=float)[None, :])[0])

    def evaluate_batch(self, xs: np.ndarray) -> np.ndarray:
        """Evaluate points in order; raises ``BudgetExhausted`` once the
        budget runs out (points before the cutoff are still counted)."""
        xs = np.atleast_2d(np.asarray(xs, dtype=float))
        room = self.remaining_budget
        if room <= 0:
            raise BudgetExhausted(f"budget of {self.budget} evaluations reached")
        take = min(len(xs), room)
        vals = self._values(xs[:take])
        self.eval_count += take
        self.best_f = min(self.best_f, float(np.min(vals)))
        if take < len(xs):
            raise BudgetExhausted(f"budget of {self.budget} evaluations reached")
        return vals

    def effective_alignment_norms(self, basis: np.ndarray) -> np.ndarray:
        """Per-column alignment of an orthonormal basis with the effective
        subspace: the norm of the first ``n_eff`` coordinates of each
        rotated basis column."""
        basis = np.asarray(basis, dtype=float)
        if basis.shape != (self.n_total, self.n_total):
            raise ValueError("dimension mismatch")
        rotated = self.rotation @ basis
        return np.sqrt(np.sum(rotated[: self.n_eff, :] ** 2, axis=0))


def led_wrap(intrinsic: IntrinsicFunction, n_total: int,
             rng: Optional[np.random.Generator] = None, *,
             rotation: Optional[np.ndarray] = None,
             budget: Optional[int] = None,
             value_transform=None) -> LedProblem:
    """Embed ``intrinsic`` in ``n_total`` dimensions behind a rotation.

    The rotation is drawn from ``rng`` unless given explicitly; passing
    ``rotation=None`` with no rng forces the identity (no rotation).
    """
    if rotation is None:
        rotation = random_rotation(n_total, rng) if rng is not None \
            else np.eye(n_total)
    if budget is None:
        budget = n_total * 100_000
    return LedProblem(intrinsic, n_total, rotation, budget,
                      value_transform=value_transform)
