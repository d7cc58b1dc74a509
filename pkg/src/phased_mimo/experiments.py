"""Experiment runners: one function per experiment kind, each returning tables."""
from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .arrays import RadarMode, mode_partition
from .beampattern import (
    component_patterns,
    hk_function,
    make_grid,
    mvdr_pattern,
    overall_pattern,
    sidelobe_report,
    verify_proposition1,
    verify_proposition2,
)
from .beamforming import conventional_tx_weights
from .config import Experiment, ExperimentConfig
from .results import ResultTable, emit_csv, metadata_block, to_db
from .sinr import sinr_curve, trained_mvdr_weights

MODES = tuple(RadarMode)


@dataclass
class ExperimentOutput:
    tables: list[ResultTable]
    summary: list[str] = field(default_factory=list)
    passed: bool | None = None


def run_beampattern(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    arr, th_s = cfg.array, cfg.theta_s
    grid = make_grid(th_s, cfg.resolution_deg())
    theta_deg = np.rad2deg(grid.angles)
    transmit, diversity, overall, summary = {}, {}, {}, []
    for mode in MODES:
        part = mode_partition(mode, arr, cfg.k_subarrays)
        C, D, _ = component_patterns(arr, part, th_s, grid)
        G = overall_pattern(arr, part, None, th_s, grid)
        transmit[f"{mode.value}_db"] = to_db(C.values)
        diversity[f"{mode.value}_db"] = to_db(D.values)
        overall[f"{mode.value}_db"] = to_db(G.values)
        rep = sidelobe_report(G, th_s)
        summary.append(
            f"{mode.value:8s} K={part.k_subarrays:<3d} peak sidelobe {rep.peak_sidelobe_db:8.3f} dB "
            f"at {np.rad2deg(rep.peak_sidelobe_angle):8.3f} deg"
        )
    part = mode_partition(RadarMode.PHASED_MIMO, arr, cfg.k_subarrays)
    C, D, R = component_patterns(arr, part, th_s, grid)
    G = overall_pattern(arr, part, None, th_s, grid)
    components = {"theta_deg": theta_deg, "C_db": to_db(C.values), "D_db": to_db(D.values),
                  "R_db": to_db(R.values), "G_db": to_db(G.values)}
    return ExperimentOutput([
        ResultTable.from_columns("beampattern_transmit", {"theta_deg": theta_deg, **transmit}),
        ResultTable.from_columns("beampattern_diversity", {"theta_deg": theta_deg, **diversity}),
        ResultTable.from_columns("beampattern_overall", {"theta_deg": theta_deg, **overall}),
        ResultTable.from_columns("beampattern_components", components),
    ], summary)


def run_sinr_curve(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    base = cfg.scenario()
    inr = None if cfg.inr_equals_snr else cfg.inr_db
    curve = sinr_curve(base, cfg.snr_db, cfg.k_subarrays, cfg.beamformer, inr_db=inr,
                       inr_equals_snr=cfg.inr_equals_snr, runs=cfg.runs, workers=workers)
    label = "analytic" if cfg.beamformer.value == "conventional" else "optimal"
    data = {"snr_db": curve.snr_db}
    for mode in MODES:
        data[f"{mode.value}_{label}_db"] = curve.analytic[mode.value]
    for mode in MODES:
        data[f"{mode.value}_mc_db"] = curve.monte_carlo[mode.value]
    summary = [
        f"SNR {snr:6.1f} dB: " + "  ".join(
            f"{m.value} {curve.monte_carlo[m.value][i]:7.2f}" for m in MODES)
        for i, snr in enumerate(curve.snr_db)
    ]
    return ExperimentOutput([ResultTable.from_columns("sinr_curve", data)], summary)


def run_mvdr_pattern(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    base = cfg.scenario()
    grid = make_grid(base.theta_s, cfg.resolution_deg())
    data = {"theta_deg": np.rad2deg(grid.angles)}
    summary = []
    for mode in MODES:
        sc = base.for_mode(mode, cfg.k_subarrays)
        tx = conventional_tx_weights(sc.cfg, sc.part, sc.theta_s)
        w = trained_mvdr_weights(sc, tx)
        curve = mvdr_pattern(sc.cfg, sc.part, tx, w, sc.theta_s, grid)
        data[f"{mode.value}_db"] = to_db(curve.values)
        for src in sc.sources[:8]:
            resp = mvdr_pattern(sc.cfg, sc.part, tx, w, sc.theta_s, src.theta).values[0]
            summary.append(f"{mode.value:8s} response at {np.rad2deg(src.theta):7.2f} deg: "
                           f"{10 * np.log10(resp):8.2f} dB")
    return ExperimentOutput([ResultTable.from_columns("mvdr_pattern", data)], summary)


def run_verify_prop1(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    grid = make_grid(cfg.theta_s, cfg.resolution_deg())
    rows = verify_proposition1(cfg.array, cfg.theta_s, grid)
    table = ResultTable("prop1", ["K", "K_mirror", "max_deviation", "pass"],
                        [[r.k, r.k_mirror, r.max_deviation, r.passed] for r in rows])
    summary = [f"K={r.k:<3d} vs K={r.k_mirror:<3d} max deviation {r.max_deviation:.3e} "
               f"{'PASS' if r.passed else 'FAIL'}" for r in rows]
    return ExperimentOutput([table], summary, all(r.passed for r in rows))


def _flag(v):
    return float("nan") if v is None else float(bool(v))


def run_verify_prop2(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    grid = make_grid(cfg.theta_s, cfg.resolution_deg())
    rows = verify_proposition2(cfg.array, cfg.theta_s, grid)
    cols = ["K", "psl_GK_db", "psl_G1_db", "zeta1", "zeta2", "zeta3", "gamma",
            "alpha1", "alpha2", "alpha3", "ordering_pass", "zeta_pass", "alpha1_pass"]
    data = [[r.k, 10 * np.log10(r.psl_gk), 10 * np.log10(r.psl_g1), r.zeta1, r.zeta2, r.zeta3,
             r.gamma, r.alpha1, r.alpha2, r.alpha3, r.ordering_ok, _flag(r.zeta_ok), r.alpha1_ok]
            for r in rows]
    summary = []
    for r in rows:
        ok = r.ordering_ok and r.alpha1_ok and r.zeta_ok is not False
        summary.append(
            f"K={r.k:<3d} PSL {10 * np.log10(r.psl_gk):8.3f} dB vs {10 * np.log10(r.psl_g1):8.3f} dB, "
            f"Gamma {r.gamma:.4f} (bound {3 / (2 * np.pi):.4f}), alpha1 {r.alpha1:.4f} "
            f"{'PASS' if ok else 'FAIL'}"
        )
    passed = all(r.ordering_ok and r.alpha1_ok and r.zeta_ok is not False for r in rows)
    return ExperimentOutput([ResultTable("prop2", cols, data)], summary, passed)


def run_hk_curves(cfg: ExperimentConfig, workers: int = 1) -> ExperimentOutput:
    n = int(round(360.0 / cfg.resolution_deg())) + 1
    omega = np.linspace(-np.pi, np.pi, n)
    data = {"omega_rad": omega}
    for k in range(1, cfg.m_tx + 1):
        data[f"H_{k}_db"] = to_db(hk_function(cfg.m_tx, k, omega))
    return ExperimentOutput([ResultTable.from_columns("hk_curves", data)])


RUNNERS = {
    Experiment.BEAMPATTERN: run_beampattern,
    Experiment.SINR_CURVE: run_sinr_curve,
    Experiment.MVDR_PATTERN: run_mvdr_pattern,
    Experiment.VERIFY_PROP1: run_verify_prop1,
    Experiment.VERIFY_PROP2: run_verify_prop2,
    Experiment.HK_CURVES: run_hk_curves,
}


def run_experiment(cfg: ExperimentConfig, out_dir, workers: int = 1) -> tuple[list[Path], ExperimentOutput]:
    """Run the configured experiment and write its CSV files into ``out_dir``.

    Files already written are removed if a later step fails.
    """
    out = RUNNERS[cfg.experiment](cfg, workers)
    meta = metadata_block(cfg.experiment.value, cfg.seed, cfg.canonical_json())
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    try:
        for table in out.tables:
            table.metadata = {**meta, "table": table.name}
            written.append(emit_csv(table, out_dir / f"{table.name}.csv"))
    except BaseException:
        for p in written:
            p.unlink(missing_ok=True)
        raise
    return written, out
