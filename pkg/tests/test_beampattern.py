import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from phased_mimo.arrays import ArrayConfig, make_partition
from phased_mimo.beampattern import (
    BeampatternCurve, CurveKind, component_patterns, dirichlet, factored_overall_pattern,
    hk_function, make_grid, mvdr_pattern, omega_grid, overall_pattern, sidelobe_report,
    sinc_peak_sidelobe, verify_proposition1, verify_proposition2,
)
from phased_mimo.beamforming import conventional_rx_weights, conventional_tx_weights, mvdr_weights
from phased_mimo.sinr import PointSource, Scenario, interference_noise_covariance, trained_mvdr_weights

CFG = ArrayConfig()
DEG = np.pi / 180
TH_S = 10 * DEG


@pytest.fixture(scope="module")
def grid():
    return make_grid(TH_S, 0.1)


def fo(k, m=10):
    return make_partition("fully-overlapped", k, m)


def test_grid_contains_target():
    g = make_grid(0.123, 0.1)
    assert g.angles[g.index_of(0.123)] == 0.123
    assert np.all(np.diff(g.angles) > 0)
    assert g.angles[0] == -np.pi / 2 and g.angles[-1] == np.pi / 2
    with pytest.raises(ValueError):
        make_grid(0.0, 0.5)


def test_component_limits(grid):
    _, D1, _ = component_patterns(CFG, fo(1), TH_S, grid)
    assert np.allclose(D1.values, 1)
    C10, _, _ = component_patterns(CFG, fo(10), TH_S, grid)
    assert np.allclose(C10.values, 1)
    for curve in component_patterns(CFG, fo(5), TH_S, grid):
        assert np.isclose(curve.values[grid.index_of(TH_S)], 1)
        assert np.all(curve.values <= 1 + 1e-12)


def test_component_patterns_need_fully_overlapped(grid):
    with pytest.raises(ValueError):
        component_patterns(CFG, make_partition("non-overlapped", 5, 10), TH_S, grid)


def test_c5_mainlobe_wider_than_c1():
    g = make_grid(TH_S, 0.02)
    C5 = component_patterns(CFG, fo(5), TH_S, g)[0]
    C1 = component_patterns(CFG, fo(1), TH_S, g)[0]
    w5 = np.ptp(np.sin(sidelobe_report(C5, TH_S).mainlobe_bounds))
    w1 = np.ptp(np.sin(sidelobe_report(C1, TH_S).mainlobe_bounds))
    assert w5 / w1 == pytest.approx(10 / 6, rel=0.01)


def test_overall_normalized(grid):
    for k in (1, 3, 5, 10):
        g = overall_pattern(CFG, fo(k), None, TH_S, grid)
        assert g.kind is CurveKind.OVERALL
        assert g.values[grid.index_of(TH_S)] == pytest.approx(1, abs=1e-12)


def test_phased_equals_mimo(grid):
    g1 = overall_pattern(CFG, fo(1), None, TH_S, grid).values
    g10 = overall_pattern(CFG, fo(10), None, TH_S, grid).values
    assert np.max(np.abs(g1 - g10)) <= 1e-10


@pytest.mark.parametrize("d_tx", [0.5, 2.5])
def test_factorization(d_tx, grid):
    cfg = ArrayConfig(d_tx=d_tx)
    for k in range(1, 11):
        direct = overall_pattern(cfg, fo(k), None, TH_S, grid).values
        fact = factored_overall_pattern(cfg, fo(k), TH_S, grid).values
        assert np.max(np.abs(direct - fact)) <= 1e-10


def test_explicit_rx_weights_match_default(grid):
    tx = conventional_tx_weights(CFG, fo(4), TH_S)
    wd = conventional_rx_weights(CFG, fo(4), tx, TH_S)
    a = overall_pattern(CFG, fo(4), tx, TH_S, grid, rx_weights=wd).values
    b = overall_pattern(CFG, fo(4), None, TH_S, grid).values
    assert np.allclose(a, b, atol=1e-14)


def test_c1_sidelobe_level():
    g = make_grid(TH_S, 0.02)
    C1 = component_patterns(CFG, fo(1), TH_S, g)[0]
    assert sidelobe_report(C1, TH_S).peak_sidelobe_db == pytest.approx(-13.26, abs=0.3)


def test_flat_curve_is_degenerate(grid):
    C10 = component_patterns(CFG, fo(10), TH_S, grid)[0]
    rep = sidelobe_report(C10, TH_S)
    assert not rep.valid and rep.peak_sidelobe_level == 1


def test_report_peak_outside_mainlobe(grid):
    g = overall_pattern(CFG, fo(5), None, TH_S, grid)
    rep = sidelobe_report(g, TH_S)
    lo, hi = rep.mainlobe_bounds
    assert rep.valid and rep.peak_sidelobe_level < 1
    assert not lo <= rep.peak_sidelobe_angle <= hi


def test_grating_lobes_listed(grid):
    g = overall_pattern(ArrayConfig(d_tx=2.5), fo(1), None, TH_S, grid)
    rep = sidelobe_report(g, TH_S)
    assert len(rep.high_lobes) == 0
    g = overall_pattern(ArrayConfig(d_tx=2.5, d_rx=2.5), fo(1), None, TH_S, grid)
    assert len(sidelobe_report(g, TH_S).high_lobes) > 0


def test_g5_below_g1():
    g = make_grid(TH_S, 0.02)
    r5 = sidelobe_report(overall_pattern(CFG, fo(5), None, TH_S, g), TH_S)
    r1 = sidelobe_report(overall_pattern(CFG, fo(1), None, TH_S, g), TH_S)
    assert r5.peak_sidelobe_level < r1.peak_sidelobe_level


def test_dirichlet_limit():
    assert dirichlet(7, 0.0) == 7
    # odd kappa has +kappa at 2 pi, even has -kappa
    assert dirichlet(5, 2 * np.pi) == pytest.approx(5)
    assert dirichlet(4, 2 * np.pi) == pytest.approx(-4)
    assert dirichlet(4, 2 * np.pi + 1e-7) == pytest.approx(-4, rel=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 16), st.floats(-np.pi, np.pi))
def test_dirichlet_matches_sum(kappa, w):
    direct = np.sum(np.exp(1j * w * (np.arange(kappa) - (kappa - 1) / 2))).real
    assert dirichlet(kappa, w) == pytest.approx(direct, abs=1e-9)


def test_hk_at_zero():
    for k in range(1, 11):
        assert hk_function(10, k, 0.0) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        hk_function(10, 11, 0.0)


def test_h1_first_sidelobe():
    w = 3 * np.pi / 10
    expected = abs(np.sin(10 * w / 2) / np.sin(w / 2)) / 10
    assert hk_function(10, 1, w) == pytest.approx(expected)
    assert 20 * np.log10(expected) == pytest.approx(-13.4, abs=0.3)


@pytest.mark.parametrize("kappa", range(2, 13))
def test_sinc_properties(kappa):
    assert abs(dirichlet(kappa, 2 * np.pi / kappa)) < 1e-12
    s = sinc_peak_sidelobe(kappa)
    if kappa == 2:
        assert np.isnan(s.level)
    elif kappa >= 4:
        assert 2 * np.pi / kappa <= s.location <= 4 * np.pi / kappa
        assert s.location == pytest.approx(3 * np.pi / kappa, rel=0.1)
        om = omega_grid(200001)
        side = om[om >= 2 * np.pi / kappa]
        assert s.level >= np.max(np.abs(dirichlet(kappa, side))) / kappa - 1e-12


def test_sinc_flat():
    s = sinc_peak_sidelobe(1)
    assert s.level == 1 and np.isnan(s.location)


def test_proposition1():
    rows = verify_proposition1(CFG, TH_S, make_grid(TH_S, 0.02))
    assert [(r.k, r.k_mirror) for r in rows] == [(k, 11 - k) for k in range(1, 11)]
    assert all(r.passed and r.max_deviation <= 1e-10 for r in rows)


def test_proposition2():
    rows = verify_proposition2(CFG, TH_S, make_grid(TH_S, 0.02))
    assert all(r.ordering_ok and r.alpha1_ok for r in rows)
    r5 = rows[4]
    assert r5.alpha1 == pytest.approx(1 / 3)
    assert r5.gamma < 1 and r5.gamma <= 3 / (2 * np.pi)
    assert rows[0].alpha1 == 1 and rows[0].gamma == pytest.approx(1)
    assert [r.zeta_ok for r in rows] == [None] * 3 + [True] * 4 + [None] * 3


def test_mvdr_pattern_identity_cov(grid):
    tx = conventional_tx_weights(CFG, fo(5), TH_S)
    u_s = conventional_rx_weights(CFG, fo(5), tx, TH_S)
    w = mvdr_weights(np.eye(50), u_s)
    a = mvdr_pattern(CFG, fo(5), tx, w, TH_S, grid).values
    b = overall_pattern(CFG, fo(5), tx, TH_S, grid).values
    assert np.allclose(a, b, atol=1e-12)


def _two_interferers(cfg, k, inr_db=50.0):
    p = 10 ** (inr_db / 10)
    return Scenario(cfg, fo(k, cfg.m_tx), TH_S, 1.0,
                    (PointSource(-30 * DEG, p), PointSource(-10 * DEG, p)))


@pytest.mark.parametrize("k", [1, 5, 10])
def test_mvdr_pattern_nulls(k):
    sc = _two_interferers(CFG, k)
    tx = conventional_tx_weights(CFG, sc.part, TH_S)
    w = trained_mvdr_weights(sc, tx)
    vals = mvdr_pattern(CFG, sc.part, tx, w, TH_S, np.array([-30 * DEG, -10 * DEG])).values
    assert np.all(vals < 1e-4)


def test_mvdr_pattern_single_receiver():
    cfg = ArrayConfig(n_rx=1)
    sc = _two_interferers(cfg, 5, 30.0)
    tx = conventional_tx_weights(cfg, sc.part, TH_S)
    u_s = conventional_rx_weights(cfg, sc.part, tx, TH_S)
    w = mvdr_weights(interference_noise_covariance(sc, tx), u_s)
    vals = mvdr_pattern(cfg, sc.part, tx, w, TH_S, np.array([-30 * DEG, -10 * DEG])).values
    assert np.all(vals < 1e-3)


def test_curve_db():
    c = BeampatternCurve(np.zeros(2), np.array([1.0, 0.01]), CurveKind.OVERALL, {})
    assert np.allclose(c.db(), [0, -20])
