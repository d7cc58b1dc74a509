"""Beampatterns, sidelobe analysis and the sinc-product sidelobe bound.

Curves hold linear power normalized to 1 at the steering direction. The
sidelobe region is everything outside the first local minima on either side
of the steering direction.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize_scalar

from .arrays import (
    ArrayConfig,
    Partition,
    Scheme,
    diversity_vector,
    make_partition,
    rx_steering,
    subarray_steering,
    virtual_steering,
)
from .beamforming import conventional_rx_weights, conventional_tx_weights

PLOT_RESOLUTION_DEG = 0.1
CHECK_RESOLUTION_DEG = 0.02
HIGH_LOBE_DB = -3.0


@dataclass(frozen=True)
class AngleGrid:
    """Increasing angles over [-pi/2, pi/2] that contain the steering angle."""

    angles: np.ndarray
    resolution: float

    @property
    def degrees(self) -> np.ndarray:
        return np.rad2deg(self.angles)

    def index_of(self, theta: float) -> int:
        i = int(np.argmin(np.abs(self.angles - theta)))
        if abs(self.angles[i] - theta) > 1e-12:
            raise ValueError(f"angle {theta!r} is not on the grid")
        return i


def make_grid(theta_s: float, resolution_deg: float = PLOT_RESOLUTION_DEG) -> AngleGrid:
    if not 0 < resolution_deg <= PLOT_RESOLUTION_DEG + 1e-12:
        raise ValueError(
            f"grid resolution must be in (0, {PLOT_RESOLUTION_DEG}] degrees, got {resolution_deg}"
        )
    n = int(np.ceil(180.0 / resolution_deg - 1e-9))
    deg = np.linspace(-90.0, 90.0, n + 1)
    angles = np.deg2rad(deg)
    angles[0], angles[-1] = -np.pi / 2, np.pi / 2
    if np.min(np.abs(angles - theta_s)) > 1e-12:
        angles = np.sort(np.append(angles, theta_s))
    else:
        angles[np.argmin(np.abs(angles - theta_s))] = theta_s
    return AngleGrid(angles, np.deg2rad(180.0 / n))


class CurveKind(str, enum.Enum):
    TRANSMIT = "C"
    DIVERSITY = "D"
    RECEIVE = "R"
    OVERALL = "G"
    HK = "H"


@dataclass(frozen=True)
class BeampatternCurve:
    """Sampled power pattern; ``axis`` is in radians (angle or Omega)."""

    axis: np.ndarray
    values: np.ndarray
    kind: CurveKind
    params: dict = field(default_factory=dict)

    def db(self) -> np.ndarray:
        with np.errstate(divide="ignore"):
            return 10.0 * np.log10(self.values)


def _params(cfg, part, theta_s):
    return {
        "m_tx": cfg.m_tx, "n_rx": cfg.n_rx, "k_subarrays": part.k_subarrays,
        "scheme": part.scheme.value, "d_tx": cfg.d_tx, "d_rx": cfg.d_rx,
        "theta_s": theta_s,
    }


def _normalized_inner(v_s: np.ndarray, V: np.ndarray) -> np.ndarray:
    return np.abs(v_s.conj() @ V) ** 2 / np.vdot(v_s, v_s).real ** 2


def component_patterns(cfg: ArrayConfig, part: Partition, theta_s: float, grid: AngleGrid):
    """Transmit, waveform-diversity and receive patterns of a fully-overlapped ULA.

    Returns:
        Tuple ``(C, D, R)`` of :class:`BeampatternCurve`.
    """
    if part.scheme is not Scheme.FULLY_OVERLAPPED:
        raise ValueError("component patterns are defined for fully-overlapped partitions")
    th = grid.angles
    p = _params(cfg, part, theta_s)
    a_s = subarray_steering(cfg, part, 0, theta_s)
    d_s = diversity_vector(cfg, part, theta_s)
    b_s = rx_steering(cfg, theta_s)
    C = _normalized_inner(a_s, subarray_steering(cfg, part, 0, th))
    D = _normalized_inner(d_s, diversity_vector(cfg, part, th))
    R = _normalized_inner(b_s, rx_steering(cfg, th))
    return (
        BeampatternCurve(th, C, CurveKind.TRANSMIT, p),
        BeampatternCurve(th, D, CurveKind.DIVERSITY, p),
        BeampatternCurve(th, R, CurveKind.RECEIVE, p),
    )


def response_pattern(rx_weights, tx_weights, cfg, part, theta_s, grid) -> BeampatternCurve:
    """``|w^H u(theta)|^2`` for arbitrary receive weights, normalized at ``theta_s``.

    ``grid`` may be an :class:`AngleGrid` or a plain array of angles.
    """
    w = np.asarray(rx_weights, dtype=complex)
    angles = np.atleast_1d(getattr(grid, "angles", grid))
    resp = np.abs(w.conj() @ virtual_steering(tx_weights, cfg, part, angles)) ** 2
    ref = np.abs(np.vdot(w, virtual_steering(tx_weights, cfg, part, theta_s))) ** 2
    if ref == 0:
        raise ValueError("receive weights have zero response at the steering angle")
    return BeampatternCurve(angles, resp / ref, CurveKind.OVERALL, _params(cfg, part, theta_s))


def overall_pattern(cfg, part, tx_weights, theta_s, grid, rx_weights=None) -> BeampatternCurve:
    """Transmit/receive pattern evaluated directly from the virtual steering vector.

    Receive weights default to the conventional (matched) beamformer.
    """
    if tx_weights is None:
        tx_weights = conventional_tx_weights(cfg, part, theta_s)
    if rx_weights is None:
        rx_weights = conventional_rx_weights(cfg, part, tx_weights, theta_s)
    return response_pattern(rx_weights, tx_weights, cfg, part, theta_s, grid)


def factored_overall_pattern(cfg, part, theta_s, grid) -> BeampatternCurve:
    """Overall pattern as the product C * D * R (conventional weights only)."""
    C, D, R = component_patterns(cfg, part, theta_s, grid)
    return BeampatternCurve(grid.angles, C.values * D.values * R.values, CurveKind.OVERALL, C.params)


def mvdr_pattern(cfg, part, tx_weights, w_R, theta_s, grid) -> BeampatternCurve:
    return response_pattern(w_R, tx_weights, cfg, part, theta_s, grid)


@dataclass(frozen=True)
class SidelobeReport:
    mainlobe_bounds: tuple[float, float]
    peak_sidelobe_level: float
    peak_sidelobe_angle: float
    valid: bool = True
    high_lobes: tuple[float, ...] = ()

    @property
    def peak_sidelobe_db(self) -> float:
        return 10.0 * np.log10(self.peak_sidelobe_level) if self.peak_sidelobe_level > 0 else -np.inf


def _mainlobe_bracket(values: np.ndarray, i0: int) -> tuple[int, int]:
    left = i0
    while left > 0 and values[left - 1] <= values[left]:
        left -= 1
    right = i0
    while right < len(values) - 1 and values[right + 1] <= values[right]:
        right += 1
    return left, right


def sidelobe_report(curve: BeampatternCurve, center: float) -> SidelobeReport:
    """Mainlobe bracket and peak sidelobe of a normalized curve.

    A curve whose mainlobe walk reaches both ends of the axis has no
    sidelobes; the report then spans the whole axis, carries level 1 and is
    flagged ``valid=False``.
    """
    x, v = curve.axis, curve.values
    i0 = int(np.argmin(np.abs(x - center)))
    left, right = _mainlobe_bracket(v, i0)
    outside = np.r_[0:left, right + 1:len(v)]
    if outside.size == 0:
        return SidelobeReport((float(x[0]), float(x[-1])), 1.0, float("nan"), valid=False)
    j = outside[np.argmax(v[outside])]
    # Local maxima above the high-lobe threshold, e.g. grating lobes.
    interior = np.arange(1, len(v) - 1)
    peaks = interior[(v[interior] >= v[interior - 1]) & (v[interior] > v[interior + 1])]
    edge = [i for i in (0, len(v) - 1) if i in outside]
    peaks = np.union1d(peaks, edge)
    thresh = 10.0 ** (HIGH_LOBE_DB / 10.0)
    high = tuple(float(x[i]) for i in peaks if (i < left or i > right) and v[i] >= thresh)
    return SidelobeReport((float(x[left]), float(x[right])), float(v[j]), float(x[j]), True, high)


def dirichlet(kappa: int, omega) -> np.ndarray:
    """``sin(kappa Omega / 2) / sin(Omega / 2)`` with its limit ``kappa`` at 0."""
    omega = np.asarray(omega, dtype=float)
    half = omega / 2.0
    den = np.sin(half)
    small = np.abs(den) < 1e-12
    safe = np.where(small, 1.0, den)
    out = np.sin(kappa * half) / safe
    # Limit at the removable singularity Omega = 2 pi n.
    n = np.round(omega / (2 * np.pi))
    limit = kappa * np.cos(np.pi * n * (kappa - 1))
    return np.where(small, limit, out)


def hk_function(m_tx: int, k: int, omega) -> np.ndarray:
    """Normalized product of the subarray and diversity sinc magnitudes."""
    if not 1 <= k <= m_tx:
        raise ValueError(f"K must lie in [1, {m_tx}], got {k}")
    L = m_tx - k + 1
    return np.abs(dirichlet(L, omega)) * np.abs(dirichlet(k, omega)) / (k * L)


def hk_curve(m_tx: int, k: int, omega) -> BeampatternCurve:
    omega = np.asarray(omega, dtype=float)
    return BeampatternCurve(omega, hk_function(m_tx, k, omega), CurveKind.HK, {"m_tx": m_tx, "k_subarrays": k})


def omega_grid(n: int = 20001) -> np.ndarray:
    return np.linspace(-np.pi, np.pi, n)


@dataclass(frozen=True)
class SincSidelobe:
    """Highest sidelobe of ``|sinc(kappa Omega)| / kappa`` on [0, pi]."""

    kappa: int
    level: float
    location: float


def sinc_peak_sidelobe(kappa: int, n: int = 20001) -> SincSidelobe:
    """Peak sidelobe level and location of the normalized sinc of order ``kappa``.

    ``kappa = 1`` is flat (level 1, no location); ``kappa = 2`` has no
    sidelobe on (0, pi] (level and location NaN).
    """
    if kappa == 1:
        return SincSidelobe(1, 1.0, float("nan"))
    f = lambda w: np.abs(dirichlet(kappa, w)) / kappa
    om = np.linspace(0.0, np.pi, n)
    v = f(om)
    left, right = _mainlobe_bracket(v, 0)
    if right == len(v) - 1:
        return SincSidelobe(kappa, float("nan"), float("nan"))
    j = right + 1 + int(np.argmax(v[right + 1:]))
    lo, hi = om[max(j - 1, right)], om[min(j + 1, len(om) - 1)]
    if j == len(om) - 1:
        return SincSidelobe(kappa, float(v[j]), float(om[j]))
    res = minimize_scalar(lambda w: -f(w), bounds=(lo, hi), method="bounded",
                          options={"xatol": 1e-12})
    if -res.fun >= v[j]:
        return SincSidelobe(kappa, float(-res.fun), float(res.x))
    return SincSidelobe(kappa, float(v[j]), float(om[j]))


@dataclass(frozen=True)
class Prop1Row:
    k: int
    k_mirror: int
    max_deviation: float
    passed: bool


def verify_proposition1(cfg: ArrayConfig, theta_s: float, grid: AngleGrid, tol: float = 1e-10) -> list[Prop1Row]:
    """Compare the overall pattern of K fully-overlapped subarrays with M-K+1."""
    patterns = {}
    for k in range(1, cfg.m_tx + 1):
        part = make_partition(Scheme.FULLY_OVERLAPPED, k, cfg.m_tx)
        patterns[k] = overall_pattern(cfg, part, None, theta_s, grid).values
    rows = []
    for k in range(1, cfg.m_tx + 1):
        mirror = cfg.m_tx - k + 1
        dev = float(np.max(np.abs(patterns[k] - patterns[mirror])))
        rows.append(Prop1Row(k, mirror, dev, dev <= tol))
    return rows


@dataclass(frozen=True)
class Prop2Row:
    k: int
    psl_gk: float
    psl_g1: float
    zeta1: float
    zeta2: float
    zeta3: float
    gamma: float
    alpha1: float
    alpha2: float
    alpha3: float
    ordering_ok: bool
    zeta_ok: bool | None
    alpha1_ok: bool


def verify_proposition2(cfg: ArrayConfig, theta_s: float, grid: AngleGrid) -> list[Prop2Row]:
    """Peak sidelobes of every fully-overlapped K against the phased array.

    ``ordering_ok`` requires a strictly lower peak sidelobe for 1 < K < M and
    equality (within 1e-12) for K in {1, M}. ``zeta_ok`` is evaluated only
    where both sinc orders exceed 3 and is ``None`` elsewhere.
    """
    m = cfg.m_tx
    g1_part = make_partition(Scheme.FULLY_OVERLAPPED, 1, m)
    psl_g1 = sidelobe_report(overall_pattern(cfg, g1_part, None, theta_s, grid), theta_s).peak_sidelobe_level
    s1 = sinc_peak_sidelobe(m)
    rows = []
    for k in range(1, m + 1):
        L = m - k + 1
        part = make_partition(Scheme.FULLY_OVERLAPPED, k, m)
        psl = sidelobe_report(overall_pattern(cfg, part, None, theta_s, grid), theta_s).peak_sidelobe_level
        s2, s3 = sinc_peak_sidelobe(L), sinc_peak_sidelobe(k)
        gamma = s2.level * s3.level / s1.level
        alpha1 = m / (k * L)
        half = lambda w: np.sin(w / 2.0)
        alpha2 = half(s1.location) / (half(s2.location) * half(s3.location))
        alpha3 = (np.sin(L * s2.location / 2) * np.sin(k * s3.location / 2)
                  / np.sin(m * s1.location / 2))
        if 1 < k < m:
            ordering_ok = psl < psl_g1
        else:
            ordering_ok = abs(psl - psl_g1) <= 1e-12
        zeta_ok = bool(s2.level * s3.level < s1.level) if (k > 3 and L > 3) else None
        rows.append(Prop2Row(k, psl, psl_g1, s1.level, s2.level, s3.level, gamma,
                             alpha1, float(alpha2), float(abs(alpha3)), bool(ordering_ok),
                             zeta_ok, alpha1 <= 1.0))
    return rows
