"""Array geometry, transmit-array partitioning and composite steering vectors.

All steering functions accept either a scalar angle (returning a 1-D vector)
or an array of angles (returning a matrix with one column per angle). Angles
are in radians; element 0 is the phase reference.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np


class Scheme(str, enum.Enum):
    """Transmit-array partitioning schemes."""

    FULLY_OVERLAPPED = "fully-overlapped"
    NON_OVERLAPPED = "non-overlapped"
    WHOLE_ARRAY = "whole-array"


@dataclass(frozen=True)
class ArrayConfig:
    """Transmit/receive uniform linear arrays, spacings in wavelengths."""

    m_tx: int = 10
    n_rx: int = 10
    d_tx: float = 0.5
    d_rx: float = 0.5

    def __post_init__(self):
        if int(self.m_tx) != self.m_tx or self.m_tx < 1:
            raise ValueError(f"m_tx must be a positive integer, got {self.m_tx!r}")
        if int(self.n_rx) != self.n_rx or self.n_rx < 1:
            raise ValueError(f"n_rx must be a positive integer, got {self.n_rx!r}")
        if not self.d_tx > 0:
            raise ValueError(f"d_tx must be positive, got {self.d_tx!r}")
        if not self.d_rx > 0:
            raise ValueError(f"d_rx must be positive, got {self.d_rx!r}")


@dataclass(frozen=True)
class Partition:
    """K transmit subarrays, each an index set into ``0..M-1``.

    Build instances with :func:`make_partition`; the constructor only
    validates an already-computed index layout.
    """

    scheme: Scheme
    k_subarrays: int
    m_tx: int
    subarrays: tuple[tuple[int, ...], ...] = field(repr=False)

    def __post_init__(self):
        if not 1 <= self.k_subarrays <= self.m_tx:
            raise ValueError(
                f"k_subarrays must lie in [1, {self.m_tx}], got {self.k_subarrays}"
            )
        if len(self.subarrays) != self.k_subarrays:
            raise ValueError("number of index sets does not match k_subarrays")
        for idx in self.subarrays:
            if not idx or min(idx) < 0 or max(idx) >= self.m_tx:
                raise ValueError(f"subarray indices {idx} outside 0..{self.m_tx - 1}")

    @property
    def subarray_size(self) -> int:
        return len(self.subarrays[0])

    def first_elements(self) -> np.ndarray:
        """Index of the leading antenna of each subarray."""
        return np.array([idx[0] for idx in self.subarrays])


def make_partition(scheme: Scheme | str, k_subarrays: int, m_tx: int) -> Partition:
    """Partition an M-element transmit array into K subarrays.

    Args:
        scheme: ``fully-overlapped`` (subarray k spans antennas k..k+M-K),
            ``non-overlapped`` (contiguous blocks of M/K antennas) or
            ``whole-array`` (every subarray is the full array).
        k_subarrays: number of subarrays K, 1 <= K <= M.
        m_tx: number of transmit antennas M.

    Raises:
        ValueError: K out of range, or K does not divide M for the
            non-overlapped scheme.
    """
    scheme = Scheme(scheme)
    k, m = int(k_subarrays), int(m_tx)
    if not 1 <= k <= m:
        raise ValueError(f"k_subarrays must lie in [1, {m}], got {k_subarrays}")
    if scheme is Scheme.FULLY_OVERLAPPED:
        size = m - k + 1
        subarrays = tuple(tuple(range(i, i + size)) for i in range(k))
    elif scheme is Scheme.NON_OVERLAPPED:
        if m % k:
            raise ValueError(f"non-overlapped partition needs K | M, got M={m}, K={k}")
        size = m // k
        subarrays = tuple(tuple(range(i * size, (i + 1) * size)) for i in range(k))
    else:
        subarrays = tuple(tuple(range(m)) for _ in range(k))
    return Partition(scheme, k, m, subarrays)


def _check_angles(theta) -> np.ndarray:
    theta = np.asarray(theta, dtype=float)
    if np.any(np.abs(theta) > np.pi / 2 + 1e-12) or np.any(np.isnan(theta)):
        raise ValueError("angles must lie in [-pi/2, pi/2] radians")
    return theta


def ula_steering(n: int, spacing: float, theta) -> np.ndarray:
    """Phase-only ULA response ``exp(-j 2 pi i d sin(theta))``, i = 0..n-1."""
    theta = _check_angles(theta)
    phase = np.multiply.outer(np.arange(n) * spacing, np.sin(theta))
    return np.exp(-2j * np.pi * phase)


def tx_steering(cfg: ArrayConfig, theta) -> np.ndarray:
    return ula_steering(cfg.m_tx, cfg.d_tx, theta)


def rx_steering(cfg: ArrayConfig, theta) -> np.ndarray:
    return ula_steering(cfg.n_rx, cfg.d_rx, theta)


def _check_partition(cfg: ArrayConfig, part: Partition):
    if part.m_tx != cfg.m_tx:
        raise ValueError(
            f"partition built for M={part.m_tx} but array has M={cfg.m_tx}"
        )


def subarray_steering(cfg: ArrayConfig, part: Partition, k: int, theta) -> np.ndarray:
    """Steering vector of subarray ``k``, re-phased so its first entry is 1.

    The inter-subarray phase is carried by :func:`diversity_vector`, so on a
    ULA every fully-overlapped subarray shares the same steering vector.
    """
    _check_partition(cfg, part)
    if not 0 <= k < part.k_subarrays:
        raise IndexError(f"subarray index {k} out of range 0..{part.k_subarrays - 1}")
    idx = np.asarray(part.subarrays[k])
    a = tx_steering(cfg, theta)
    return a[idx] / a[idx[0]]


def diversity_vector(cfg: ArrayConfig, part: Partition, theta) -> np.ndarray:
    """Waveform-diversity vector: transmit phase at each subarray's lead element."""
    _check_partition(cfg, part)
    return tx_steering(cfg, theta)[part.first_elements()]


def _check_weights(weights, part: Partition) -> list[np.ndarray]:
    if len(weights) != part.k_subarrays:
        raise ValueError(
            f"expected {part.k_subarrays} subarray weight vectors, got {len(weights)}"
        )
    out = []
    for k, (w, idx) in enumerate(zip(weights, part.subarrays)):
        w = np.asarray(w, dtype=complex)
        if w.shape != (len(idx),):
            raise ValueError(
                f"weight {k} has shape {w.shape}, subarray {k} has {len(idx)} elements"
            )
        out.append(w)
    return out


def coherent_vector(weights, cfg: ArrayConfig, part: Partition, theta) -> np.ndarray:
    """Transmit coherent-processing vector, entry k = w_k^H a_k(theta)."""
    weights = _check_weights(weights, part)
    return np.stack(
        [w.conj() @ subarray_steering(cfg, part, k, theta) for k, w in enumerate(weights)]
    )


def virtual_steering(weights, cfg: ArrayConfig, part: Partition, theta) -> np.ndarray:
    """KN-element virtual steering vector ``(c * d) kron b``.

    Ordering is waveform-major, receive-element-minor: entry ``k*N + n``
    belongs to waveform k at receive element n.
    """
    cd = coherent_vector(weights, cfg, part, theta) * diversity_vector(cfg, part, theta)
    b = rx_steering(cfg, theta)
    if cd.ndim == 1:
        return np.kron(cd, b)
    # Column-wise Kronecker product for a batch of angles.
    return (cd[:, None, :] * b[None, :, :]).reshape(-1, cd.shape[-1])


def mimo_virtual_steering(cfg: ArrayConfig, theta) -> np.ndarray:
    """MN-element MIMO virtual steering vector ``a kron b``."""
    a = tx_steering(cfg, theta)
    b = rx_steering(cfg, theta)
    if a.ndim == 1:
        return np.kron(a, b)
    return (a[:, None, :] * b[None, :, :]).reshape(-1, a.shape[-1])


class RadarMode(str, enum.Enum):
    """The three transmit configurations compared throughout."""

    PHASED_ARRAY = "PH"
    MIMO = "MIMO"
    PHASED_MIMO = "PH-MIMO"


def mode_partition(mode: RadarMode | str, cfg: ArrayConfig, k_subarrays: int) -> Partition:
    """Fully-overlapped partition realizing ``mode``.

    Phased-array radar is the single-subarray case and MIMO radar the
    K = M case; ``k_subarrays`` is only used for the phased-MIMO mode.
    """
    mode = RadarMode(mode)
    k = {RadarMode.PHASED_ARRAY: 1, RadarMode.MIMO: cfg.m_tx}.get(mode, k_subarrays)
    return make_partition(Scheme.FULLY_OVERLAPPED, k, cfg.m_tx)
