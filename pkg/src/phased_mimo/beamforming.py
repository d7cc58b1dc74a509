"""Conventional and MVDR transmit/receive weights, sample covariance."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg as la

from .arrays import ArrayConfig, Partition, subarray_steering, virtual_steering

DEFAULT_DIAGONAL_LOAD = 10.0


def conventional_tx_weights(cfg: ArrayConfig, part: Partition, theta_s: float) -> list[np.ndarray]:
    """Unit-norm subarray weights matched to the target direction."""
    weights = []
    for k in range(part.k_subarrays):
        a_k = subarray_steering(cfg, part, k, theta_s)
        weights.append(a_k / np.linalg.norm(a_k))
    return weights


def conventional_rx_weights(cfg: ArrayConfig, part: Partition, tx_weights, theta_s: float) -> np.ndarray:
    """Receive weights equal to the virtual steering vector at the target."""
    return virtual_steering(tx_weights, cfg, part, theta_s)


@dataclass(frozen=True)
class CovarianceEstimate:
    """Hermitian covariance with the load and snapshot count that built it.

    ``n_snapshots`` is 0 for an exact (model) covariance.
    """

    matrix: np.ndarray
    n_snapshots: int = 0
    diagonal_load: float = 0.0

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]


def sample_covariance(snapshots, diagonal_load: float = DEFAULT_DIAGONAL_LOAD) -> CovarianceEstimate:
    """Unnormalized outer-product sum of snapshots plus ``diagonal_load * I``.

    Args:
        snapshots: sequence of equal-length vectors, or a 2-D array with one
            snapshot per row.
        diagonal_load: nonnegative loading added to the diagonal.
    """
    if diagonal_load < 0:
        raise ValueError(f"diagonal_load must be nonnegative, got {diagonal_load}")
    if isinstance(snapshots, np.ndarray) and snapshots.ndim == 2:
        Y = snapshots
    else:
        snapshots = [np.asarray(y) for y in snapshots]
        if not snapshots:
            raise ValueError("at least one snapshot is required")
        lengths = {y.shape for y in snapshots}
        if len(lengths) != 1 or snapshots[0].ndim != 1:
            raise ValueError(f"inconsistent snapshot shapes: {sorted(lengths)}")
        Y = np.stack(snapshots)
    if Y.shape[0] == 0:
        raise ValueError("at least one snapshot is required")
    R = Y.T @ Y.conj()
    R = 0.5 * (R + R.conj().T)
    R[np.diag_indices_from(R)] += diagonal_load
    return CovarianceEstimate(R, Y.shape[0], float(diagonal_load))


def _as_matrix(cov) -> np.ndarray:
    return cov.matrix if isinstance(cov, CovarianceEstimate) else np.asarray(cov)


def whiten_solve(cov, rhs: np.ndarray) -> np.ndarray:
    """Solve ``R x = rhs`` through a Cholesky factorization.

    Raises:
        numpy.linalg.LinAlgError: ``R`` is not positive definite.
    """
    R = _as_matrix(cov)
    try:
        factor = la.cho_factor(R, lower=True, check_finite=True)
    except la.LinAlgError as exc:
        raise np.linalg.LinAlgError(
            "covariance is not positive definite; add diagonal loading"
        ) from exc
    return la.cho_solve(factor, rhs)


def mvdr_weights(cov, u_s: np.ndarray) -> np.ndarray:
    """Minimum-variance distortionless weights ``R^-1 u / (u^H R^-1 u)``."""
    u_s = np.asarray(u_s, dtype=complex)
    R = _as_matrix(cov)
    if R.shape != (u_s.size, u_s.size):
        raise ValueError(f"covariance {R.shape} does not match steering length {u_s.size}")
    x = whiten_solve(R, u_s)
    return x / np.vdot(u_s, x)
