"""Orthonormal waveform bank, transmit signal synthesis and matched filtering."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .arrays import ArrayConfig, Partition, _check_weights, rx_steering, tx_steering

DEFAULT_SAMPLES = 256
_UNIT_NORM_TOL = 1e-9


@dataclass(frozen=True)
class WaveformBank:
    """K orthonormal waveforms sampled over one pulse (row k = waveform k)."""

    table: np.ndarray

    @property
    def k_waveforms(self) -> int:
        return self.table.shape[0]

    @property
    def samples_per_pulse(self) -> int:
        return self.table.shape[1]

    def gram(self) -> np.ndarray:
        return self.table @ self.table.conj().T


def make_bank(k: int, samples: int = DEFAULT_SAMPLES) -> WaveformBank:
    """Complex-exponential bank with tones 1..K cycles per pulse.

    Samples are scaled by ``1/sqrt(L)`` so the discrete Gram matrix is the
    identity.
    """
    if k < 1 or samples < 1:
        raise ValueError("bank needs k >= 1 and samples >= 1")
    if k > samples:
        raise ValueError(f"cannot fit {k} orthogonal waveforms in {samples} samples")
    freqs = np.arange(1, k + 1)[:, None]
    l = np.arange(samples)[None, :]
    table = np.exp(2j * np.pi * freqs * l / samples) / np.sqrt(samples)
    return WaveformBank(table)


@dataclass(frozen=True)
class TransmitSignalSet:
    """Per-antenna transmit signals and the weight matrix that produced them."""

    samples: np.ndarray
    weight_matrix: np.ndarray

    @property
    def m_antennas(self) -> int:
        return self.samples.shape[0]

    def antenna_energies(self) -> np.ndarray:
        return np.sum(np.abs(self.samples) ** 2, axis=1)

    def total_energy(self) -> float:
        return float(np.sum(self.antenna_energies()))


def weight_matrix(weights, cfg: ArrayConfig, part: Partition) -> np.ndarray:
    """M x K matrix whose column k holds w_k on the rows of subarray k."""
    weights = _check_weights(weights, part)
    W = np.zeros((cfg.m_tx, part.k_subarrays), dtype=complex)
    for k, (w, idx) in enumerate(zip(weights, part.subarrays)):
        W[list(idx), k] = w
    return W


def _require_unit_norm(weights):
    for k, w in enumerate(weights):
        norm = np.linalg.norm(w)
        if abs(norm - 1.0) > _UNIT_NORM_TOL:
            raise ValueError(
                f"transmit weight {k} has norm {norm:.12g}; normalize it first"
            )


def synthesize_tx(bank: WaveformBank, weights, cfg: ArrayConfig, part: Partition) -> TransmitSignalSet:
    """Antenna signals ``sqrt(M/K) W^* Phi`` for unit-norm subarray weights."""
    if bank.k_waveforms != part.k_subarrays:
        raise ValueError(
            f"bank has {bank.k_waveforms} waveforms, partition has {part.k_subarrays} subarrays"
        )
    weights = _check_weights(weights, part)
    _require_unit_norm(weights)
    W = weight_matrix(weights, cfg, part)
    scale = np.sqrt(cfg.m_tx / part.k_subarrays)
    return TransmitSignalSet(scale * W.conj() @ bank.table, W)


def subarray_energies(bank: WaveformBank, weights, cfg: ArrayConfig, part: Partition) -> np.ndarray:
    """Pulse energy of each subarray signal ``sqrt(M/K) phi_k w_k^*``."""
    weights = _check_weights(weights, part)
    _require_unit_norm(weights)
    scale = cfg.m_tx / part.k_subarrays
    row_energy = np.sum(np.abs(bank.table) ** 2, axis=1)
    return np.array([scale * row_energy[k] * np.vdot(w, w).real for k, w in enumerate(weights)])


def transmit_power(weights, cfg: ArrayConfig, part: Partition, theta, sigma2: float = 1.0):
    """Power radiated towards ``theta``: ``(M/K) sigma2 ||W^H a(theta)||^2``."""
    weights = _check_weights(weights, part)
    _require_unit_norm(weights)
    W = weight_matrix(weights, cfg, part)
    g = W.conj().T @ tx_steering(cfg, theta)
    return cfg.m_tx / part.k_subarrays * sigma2 * np.sum(np.abs(g) ** 2, axis=0)


def matched_filter(rx_pulse: np.ndarray, bank: WaveformBank) -> np.ndarray:
    """Correlate an N x L receive pulse with every waveform in the bank.

    Returns the KN virtual snapshot, block k holding the N receive outputs
    matched to waveform k.
    """
    rx_pulse = np.asarray(rx_pulse)
    if rx_pulse.ndim != 2 or rx_pulse.shape[1] != bank.samples_per_pulse:
        raise ValueError(
            f"receive pulse shape {rx_pulse.shape} does not match "
            f"{bank.samples_per_pulse} samples per pulse"
        )
    blocks = rx_pulse @ bank.table.conj().T  # N x K
    return blocks.T.reshape(-1)


def receive_pulse(bank: WaveformBank, tx: TransmitSignalSet, cfg: ArrayConfig, sources) -> np.ndarray:
    """Noise-free N x L receive pulse for far-field point reflectors.

    Args:
        sources: iterable of ``(theta, beta)`` pairs, angle in radians and
            complex reflection coefficient.
    """
    x = np.zeros((cfg.n_rx, bank.samples_per_pulse), dtype=complex)
    for theta, beta in sources:
        r = beta * (tx_steering(cfg, theta) @ tx.samples)
        x += np.outer(rx_steering(cfg, theta), r)
    return x
