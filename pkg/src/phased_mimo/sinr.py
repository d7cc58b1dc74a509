"""Output SINR: exact covariance, analytic and optimal SINR, Monte-Carlo estimates.

Powers are linear and element-level: SNR = target_power / noise_power and
INR = interferer power / noise_power, both before any beamforming.
"""
from __future__ import annotations

import dataclasses
import enum
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .arrays import ArrayConfig, Partition, RadarMode, mode_partition, virtual_steering
from .beamforming import (
    DEFAULT_DIAGONAL_LOAD,
    CovarianceEstimate,
    conventional_rx_weights,
    conventional_tx_weights,
    mvdr_weights,
    sample_covariance,
    whiten_solve,
)

DEFAULT_PATCHES = 61


@dataclass(frozen=True)
class PointSource:
    theta: float
    power: float

    def __post_init__(self):
        if abs(self.theta) > np.pi / 2 or self.power < 0:
            raise ValueError(f"invalid point source {self!r}")


@dataclass(frozen=True)
class DistributedSource:
    """Interference spread uniformly over ``[theta_lo, theta_hi]``.

    Discretized into ``n_patches`` equal-power point sources whose powers sum
    to ``total_power``.
    """

    theta_lo: float
    theta_hi: float
    total_power: float
    n_patches: int = DEFAULT_PATCHES

    def __post_init__(self):
        if not -np.pi / 2 <= self.theta_lo <= self.theta_hi <= np.pi / 2:
            raise ValueError("distributed source sector must lie in [-pi/2, pi/2]")
        if self.total_power < 0 or self.n_patches < 1:
            raise ValueError("distributed source needs power >= 0 and n_patches >= 1")

    def patches(self) -> tuple[PointSource, ...]:
        angles = np.linspace(self.theta_lo, self.theta_hi, self.n_patches)
        p = self.total_power / self.n_patches
        return tuple(PointSource(float(t), p) for t in angles)


@dataclass(frozen=True)
class Scenario:
    cfg: ArrayConfig
    part: Partition
    theta_s: float
    target_power: float
    interferers: tuple[PointSource, ...] = ()
    distributed: DistributedSource | None = None
    noise_power: float = 1.0
    snapshot_count: int = 100
    pulse_runs: int = 100
    seed: int = 0
    diagonal_load: float = DEFAULT_DIAGONAL_LOAD

    def __post_init__(self):
        if self.interferers and self.distributed is not None:
            raise ValueError("use either point interferers or one distributed source")
        if abs(self.theta_s) > np.pi / 2:
            raise ValueError("target angle must lie in [-pi/2, pi/2]")
        if self.target_power < 0 or self.noise_power < 0:
            raise ValueError("powers must be nonnegative")
        if self.snapshot_count < 1 or self.pulse_runs < 1:
            raise ValueError("snapshot_count and pulse_runs must be positive")

    @property
    def sources(self) -> tuple[PointSource, ...]:
        if self.distributed is not None:
            return self.distributed.patches()
        return tuple(self.interferers)

    @property
    def gain(self) -> float:
        """Per-waveform power factor M/K."""
        return self.cfg.m_tx / self.part.k_subarrays

    def for_mode(self, mode: RadarMode | str, k_subarrays: int) -> "Scenario":
        return dataclasses.replace(self, part=mode_partition(mode, self.cfg, k_subarrays))


def _tx(scenario, weights):
    if weights is None:
        return conventional_tx_weights(scenario.cfg, scenario.part, scenario.theta_s)
    return weights


def _interference_steering(scenario, weights) -> np.ndarray:
    src = scenario.sources
    dim = scenario.part.k_subarrays * scenario.cfg.n_rx
    if not src:
        return np.zeros((dim, 0), dtype=complex)
    theta = np.array([s.theta for s in src])
    return virtual_steering(weights, scenario.cfg, scenario.part, theta)


def interference_noise_covariance(scenario: Scenario, weights=None) -> CovarianceEstimate:
    """Exact interference-plus-noise covariance of the virtual snapshot."""
    weights = _tx(scenario, weights)
    U = _interference_steering(scenario, weights)
    p = np.array([s.power for s in scenario.sources])
    R = scenario.gain * (U * p) @ U.conj().T
    R = 0.5 * (R + R.conj().T)
    R[np.diag_indices_from(R)] += scenario.noise_power
    return CovarianceEstimate(R)


def analytic_sinr(scenario: Scenario, weights=None, rx_weights=None) -> float:
    """Output SINR of receive weights against the exact covariance.

    Defaults to conventional transmit and receive weights.
    """
    weights = _tx(scenario, weights)
    u_s = virtual_steering(weights, scenario.cfg, scenario.part, scenario.theta_s)
    w = u_s if rx_weights is None else np.asarray(rx_weights, dtype=complex)
    if not np.any(w):
        raise ValueError("receive weights are identically zero")
    R = interference_noise_covariance(scenario, weights).matrix
    num = scenario.gain * scenario.target_power * np.abs(np.vdot(w, u_s)) ** 2
    return float(num / np.vdot(w, R @ w).real)


def conventional_sinr_closed_form(scenario: Scenario) -> float:
    """Closed-form SINR of the conventional beamformer pair."""
    cfg, K = scenario.cfg, scenario.part.k_subarrays
    L, N = scenario.part.subarray_size, cfg.n_rx
    weights = conventional_tx_weights(cfg, scenario.part, scenario.theta_s)
    u_s = virtual_steering(weights, cfg, scenario.part, scenario.theta_s)
    g = scenario.gain
    interf = sum(
        g * s.power * np.abs(np.vdot(u_s, virtual_steering(weights, cfg, scenario.part, s.theta))) ** 2
        for s in scenario.sources
    )
    num = g * scenario.target_power * (L * K * N) ** 2
    return float(num / (interf + scenario.noise_power * L * K * N))


def optimal_sinr(scenario: Scenario, weights=None) -> float:
    """Maximum attainable output SINR, ``(M/K) sigma_s^2 u^H R^-1 u``."""
    weights = _tx(scenario, weights)
    u_s = virtual_steering(weights, scenario.cfg, scenario.part, scenario.theta_s)
    R = interference_noise_covariance(scenario, weights)
    return float(scenario.gain * scenario.target_power * np.vdot(u_s, whiten_solve(R, u_s)).real)


class Beamformer(str, enum.Enum):
    CONVENTIONAL = "conventional"
    MVDR = "mvdr"


def _cn(rng: np.random.Generator, *shape) -> np.ndarray:
    """Unit-variance circular complex Gaussian draws.

    Real/imaginary pairs are interleaved so a shorter draw is a prefix of a
    longer one from the same stream.
    """
    z = rng.standard_normal((*shape, 2))
    return (z[..., 0] + 1j * z[..., 1]) / np.sqrt(2.0)


@dataclass(frozen=True)
class MonteCarloResult:
    """Ratio-of-mean-powers SINR estimate with its delta-method standard error."""

    sinr: float
    signal_power: float
    interference_noise_power: float
    std_error_db: float
    runs: int
    per_run: np.ndarray = field(repr=False, compare=False)

    @property
    def sinr_db(self) -> float:
        return 10.0 * np.log10(self.sinr)


class _RunKernel:
    def __init__(self, scenario: Scenario, weights, beamformer: Beamformer):
        self.s = scenario
        self.bf = Beamformer(beamformer)
        self.u_s = virtual_steering(weights, scenario.cfg, scenario.part, scenario.theta_s)
        self.U = _interference_steering(scenario, weights)
        self.amp_i = np.sqrt(np.array([p.power for p in scenario.sources]))
        self.g = np.sqrt(scenario.gain)
        self.w_conv = conventional_rx_weights(scenario.cfg, scenario.part, weights, scenario.theta_s) \
            if self.bf is Beamformer.CONVENTIONAL else None

    def _interference_noise(self, rng, n):
        dim = self.u_s.size
        beta_i = self.amp_i[:, None] * _cn(rng, self.U.shape[1], n)
        noise = np.sqrt(self.s.noise_power) * _cn(rng, n, dim).T
        return self.g * self.U @ beta_i + noise

    def train(self, rng) -> np.ndarray:
        train = self._interference_noise(rng, self.s.snapshot_count)
        cov = sample_covariance(train.T, self.s.diagonal_load)
        return mvdr_weights(cov, self.u_s)

    def __call__(self, run: int) -> tuple[float, float]:
        s = self.s
        rng = np.random.default_rng([s.seed, run])
        beta_s = np.sqrt(s.target_power) * _cn(rng, 1)[0]
        y_in = self._interference_noise(rng, 1)[:, 0]
        if self.bf is Beamformer.MVDR:
            w = self.train(rng)
        else:
            w = self.w_conv
        sig = np.abs(np.vdot(w, self.g * beta_s * self.u_s)) ** 2
        inn = np.abs(np.vdot(w, y_in)) ** 2
        return float(sig), float(inn)


def trained_mvdr_weights(scenario: Scenario, weights=None, run: int = 0) -> np.ndarray:
    """MVDR weights from one draw of target-free training snapshots.

    Uses the generator seeded by ``(seed, run)``, independent of the
    Monte-Carlo pulse draws.
    """
    weights = _tx(scenario, weights)
    kernel = _RunKernel(scenario, weights, Beamformer.MVDR)
    rng = np.random.default_rng([scenario.seed, run, 1])
    return kernel.train(rng)


def monte_carlo_sinr(
    scenario: Scenario,
    weights=None,
    beamformer: Beamformer | str = Beamformer.CONVENTIONAL,
    runs: int | None = None,
    workers: int = 1,
) -> MonteCarloResult:
    """Estimate output SINR from simulated pulses.

    Each run draws fresh reflection coefficients and noise from a generator
    seeded by ``(seed, run)``; for MVDR it also draws ``snapshot_count``
    target-free training snapshots and rebuilds the weights. Results do not
    depend on ``workers``.
    """
    weights = _tx(scenario, weights)
    runs = scenario.pulse_runs if runs is None else int(runs)
    kernel = _RunKernel(scenario, weights, beamformer)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            out = list(pool.map(kernel, range(runs), chunksize=max(1, runs // (4 * workers))))
    else:
        out = [kernel(r) for r in range(runs)]
    per_run = np.array(out)
    sig, inn = per_run[:, 0], per_run[:, 1]
    ms, mi = float(np.sum(sig) / runs), float(np.sum(inn) / runs)
    if runs > 1 and ms > 0 and mi > 0:
        cov = np.cov(sig, inn)
        rel_var = (cov[0, 0] / ms**2 + cov[1, 1] / mi**2 - 2 * cov[0, 1] / (ms * mi)) / runs
        se_db = 10.0 / np.log(10.0) * float(np.sqrt(max(rel_var, 0.0)))
    else:
        se_db = float("nan")
    return MonteCarloResult(ms / mi, ms, mi, se_db, runs, per_run)


@dataclass(frozen=True)
class SinrCurve:
    """SINR versus SNR for each radar mode; values in dB."""

    snr_db: np.ndarray
    analytic: dict[str, np.ndarray]
    monte_carlo: dict[str, np.ndarray]
    beamformer: Beamformer
    metadata: dict = field(default_factory=dict)


def sinr_curve(
    base: Scenario,
    snr_db,
    k_subarrays: int,
    beamformer: Beamformer | str = Beamformer.CONVENTIONAL,
    inr_db: float | None = None,
    inr_equals_snr: bool = False,
    runs: int | None = None,
    workers: int = 1,
) -> SinrCurve:
    """Sweep target SNR for all three radar modes.

    The analytic series is the conventional-beamformer SINR for
    ``beamformer="conventional"`` and the optimal SINR for MVDR.

    Args:
        base: scenario supplying geometry, interferer angles, noise power,
            seed and run counts; its target power is overridden.
        inr_db: per-interferer INR (or total INR of a distributed source);
            ``None`` keeps the powers in ``base``.
        inr_equals_snr: set the INR equal to the SNR at every point.
    """
    bf = Beamformer(beamformer)
    snr_db = np.asarray(snr_db, dtype=float)
    analytic = {m.value: np.empty(snr_db.size) for m in RadarMode}
    mc = {m.value: np.empty(snr_db.size) for m in RadarMode}
    for i, snr in enumerate(snr_db):
        sc = _with_powers(base, snr, snr if inr_equals_snr else inr_db)
        for mode in RadarMode:
            msc = sc.for_mode(mode, k_subarrays)
            a = analytic_sinr(msc) if bf is Beamformer.CONVENTIONAL else optimal_sinr(msc)
            analytic[mode.value][i] = 10.0 * np.log10(a)
            mc[mode.value][i] = monte_carlo_sinr(msc, None, bf, runs, workers).sinr_db
    return SinrCurve(snr_db, analytic, mc, bf)


def _with_powers(base: Scenario, snr_db: float, inr_db: float | None) -> Scenario:
    sc = dataclasses.replace(base, target_power=base.noise_power * 10.0 ** (snr_db / 10.0))
    if inr_db is None:
        return sc
    p = base.noise_power * 10.0 ** (inr_db / 10.0)
    if sc.distributed is not None:
        return dataclasses.replace(sc, distributed=dataclasses.replace(sc.distributed, total_power=p))
    return dataclasses.replace(sc, interferers=tuple(PointSource(s.theta, p) for s in sc.interferers))
