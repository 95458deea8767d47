"""Dense symmetric linear algebra for the optimizer.

Eigendecompositions follow a fixed convention (eigenvalues sorted in
descending order, per-column sign fix) so that per-coordinate accumulators
indexed by eigenvector column see a stable basis between iterations.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

EIGENVALUE_FLOOR = 1e-30
PSD_TOLERANCE = -1e-12


@dataclass(frozen=True)
class EigenPair:
    """Eigendecomposition of a symmetric matrix.

    ``basis`` holds orthonormal eigenvectors as columns, ordered by
    descending eigenvalue.  ``values`` are floored at ``EIGENVALUE_FLOOR``
    for safe inverse/sqrt use; ``raw_values`` keep the computed values for
    condition-number reporting.  ``degenerate`` is set when any eigenvalue
    had to be floored.
    """

    basis: np.ndarray
    values: np.ndarray
    raw_values: np.ndarray
    degenerate: bool


def symmetrize(m: np.ndarray) -> np.ndarray:
    """Return the symmetric part 0.5 * (M + M^T)."""
    return 0.5 * (m + m.T)


def sym_eigen(m: np.ndarray) -> EigenPair:
    """Eigendecompose a symmetric matrix with deterministic conventions.

    Eigenvalues are returned in descending order and each eigenvector is
    signed so that its largest-magnitude component is positive.  Raises
    ``ValueError`` on non-finite input.
    """
    m = np.asarray(m, dtype=float)
    if not np.isfinite(m).all():
        raise ValueError("non-finite matrix")
    values, basis = np.linalg.eigh(m)
    # eigh returns ascending order; reorder descending, keeping tied
    # eigenvalues in their original relative order
    order = np.argsort(-values, kind="stable")
    values = values[order]
    basis = basis[:, order]
    peak = np.argmax(np.abs(basis), axis=0)
    signs = np.where(basis[peak, np.arange(basis.shape[1])] < 0.0, -1.0, 1.0)
    basis *= signs
    floored = np.maximum(values, EIGENVALUE_FLOOR)
    degenerate = bool(np.any(values <= EIGENVALUE_FLOOR))
    return EigenPair(basis=basis, values=floored, raw_values=values,
                     degenerate=degenerate)


def sqrt_from_eigen(eigen: EigenPair) -> np.ndarray:
    """Symmetric square root B diag(sqrt(values)) B^T.

    Eigenvalues below ``PSD_TOLERANCE`` raise; small negatives inside the
    tolerance are treated as zero.
    """
    values = eigen.values
    if np.min(values) < PSD_TOLERANCE:
        raise ValueError("not PSD")
    roots = np.sqrt(np.clip(values, 0.0, None))
    return symmetrize((eigen.basis * roots) @ eigen.basis.T)


def inv_sqrt_from_eigen(eigen: EigenPair) -> np.ndarray:
    """Symmetric inverse square root B diag(values^-1/2) B^T.

    Floored eigenvalues keep the product finite; callers can consult
    ``eigen.degenerate`` to detect that the floor was active.
    """
    values = np.maximum(eigen.values, EIGENVALUE_FLOOR)
    inv_roots = 1.0 / np.sqrt(values)
    return symmetrize((eigen.basis * inv_roots) @ eigen.basis.T)


def condition_number(eigen: EigenPair) -> float:
    """Ratio of extreme eigenvalues before flooring (inf if non-positive)."""
    low = float(np.min(eigen.raw_values))
    high = float(np.max(eigen.raw_values))
    if low <= 0.0:
        return float("inf")
    return high / low


def orthonormalize(a: np.ndarray) -> np.ndarray:
    """QR-based orthonormal basis of a square matrix with a fixed sign
    convention (positive R diagonal), so the result is deterministic."""
    q, r = np.linalg.qr(np.asarray(a, dtype=float))
    diag = np.diagonal(r)
    signs = np.where(diag < 0.0, -1.0, 1.0)
    return q * signs
