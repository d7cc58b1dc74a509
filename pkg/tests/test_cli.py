import json

import pytest

from phased_mimo.cli import main
from phased_mimo.results import read_csv


def run(tmp_path, *args):
    return main([*args, "--out", str(tmp_path)])


def test_beampattern_outputs(tmp_path, capsys):
    assert run(tmp_path, "beampattern") == 0
    names = sorted(p.name for p in tmp_path.iterdir())
    assert names == ["beampattern_components.csv", "beampattern_diversity.csv",
                     "beampattern_overall.csv", "beampattern_transmit.csv"]
    comp = read_csv(tmp_path / "beampattern_components.csv")
    assert comp.columns == ["theta_deg", "C_db", "D_db", "R_db", "G_db"]
    ov = read_csv(tmp_path / "beampattern_overall.csv")
    assert ov.columns == ["theta_deg", "PH_db", "MIMO_db", "PH-MIMO_db"]
    assert ov.metadata["seed"] == "0" and len(ov.metadata["scenario_hash"]) == 64
    assert "peak sidelobe" in capsys.readouterr().out


def test_verify_subcommands(tmp_path, capsys):
    assert run(tmp_path, "verify-prop1") == 0
    t = read_csv(tmp_path / "prop1.csv")
    assert len(t.rows) == 10 and all(r[3] == 1 for r in t.rows)
    assert capsys.readouterr().out.count("PASS") == 10
    assert run(tmp_path, "verify-prop2", "--grid-deg", "0.05") == 0


def test_hk_curves(tmp_path):
    assert run(tmp_path, "hk-curves") == 0
    t = read_csv(tmp_path / "hk_curves.csv")
    assert t.columns == ["omega_rad"] + [f"H_{k}_db" for k in range(1, 11)]


def test_sinr_and_mvdr(tmp_path):
    assert run(tmp_path, "sinr-curve", "--runs", "5", "--seed", "42") == 0
    t = read_csv(tmp_path / "sinr_curve.csv")
    assert t.columns[0] == "snr_db" and "PH-MIMO_mc_db" in t.columns
    assert t.metadata["seed"] == "42"
    cfg = tmp_path / "c.json"
    cfg.write_text(json.dumps({"beamformer": "mvdr", "inr_db": 50}))
    assert main(["mvdr-pattern", "--config", str(cfg), "--out", str(tmp_path)]) == 0
    assert (tmp_path / "mvdr_pattern.csv").exists()


def test_config_error_exit_code(tmp_path, capsys):
    cfg = tmp_path / "c.json"
    cfg.write_text('{"k_subarrays": 0}')
    assert main(["beampattern", "--config", str(cfg), "--out", str(tmp_path)]) == 2
    assert "k_subarrays" in capsys.readouterr().err


def test_verify_files(tmp_path, capsys):
    run(tmp_path, "hk-curves")
    f = tmp_path / "hk_curves.csv"
    assert main(["verify", str(f)]) == 0
    f.write_text(f.read_text().replace('"m_tx":10', '"m_tx":11'))
    assert main(["verify", str(f)]) == 1
    assert main(["verify", str(tmp_path / "missing.csv")]) == 1


def test_bad_seed_rejected(tmp_path):
    with pytest.raises(SystemExit):
        run(tmp_path, "beampattern", "--seed", "-3")
