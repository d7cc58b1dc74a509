import json

import numpy as np
import pytest

from phased_mimo.arrays import Scheme
from phased_mimo.config import ConfigError, Experiment, load_config, parse_config


def test_empty_object_defaults(tmp_path):
    p = tmp_path / "c.json"
    p.write_text("{}")
    cfg = load_config(p)
    assert (cfg.m_tx, cfg.n_rx, cfg.k_subarrays, cfg.d_tx, cfg.d_rx) == (10, 10, 5, 0.5, 0.5)
    assert cfg.theta_s_deg == 10 and cfg.interferers_deg == [-30, -10]
    assert cfg.snapshot_count == 100 and cfg.diagonal_load == 10
    assert cfg.scheme is Scheme.FULLY_OVERLAPPED
    assert cfg.theta_s == pytest.approx(np.deg2rad(10))


def test_aliasing_config():
    cfg = parse_config({"d_tx": 2.5})
    assert cfg.array.d_tx == 2.5 and cfg.array.d_rx == 0.5


def test_k_zero_names_field():
    with pytest.raises(ConfigError, match="k_subarrays"):
        parse_config({"k_subarrays": 0})


@pytest.mark.parametrize("data,field", [
    ({"m_tx": "ten"}, "m_tx"),
    ({"bogus": 1}, "bogus"),
    ({"distributed": {"lo_deg": 0, "hi_deg": -10}}, "distributed"),
    ({"grid_deg": 0.5}, "grid_deg"),
    ({"seed": -1}, "seed"),
    ({"seed": 2**64}, "seed"),
    ({"experiment": "plot"}, "experiment"),
])
def test_schema_errors(data, field):
    with pytest.raises(ConfigError, match=field):
        parse_config(data)


def test_invariant_errors():
    with pytest.raises(ConfigError, match="exceeds m_tx"):
        parse_config({"k_subarrays": 11})
    with pytest.raises(ConfigError, match="divide"):
        parse_config({"scheme": "non-overlapped", "k_subarrays": 3})
    with pytest.raises(ConfigError, match="either"):
        parse_config({"distributed": {}, "interferers_deg": [0.0]})


def test_file_errors(tmp_path):
    with pytest.raises(ConfigError):
        load_config(tmp_path / "missing.json")
    bad = tmp_path / "bad.json"
    bad.write_text("{nope")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_config(bad)
    arr = tmp_path / "arr.json"
    arr.write_text("[]")
    with pytest.raises(ConfigError):
        load_config(arr)


def test_overrides():
    cfg = parse_config({"seed": 3, "runs": 7}, seed=9, runs=None)
    assert cfg.seed == 9 and cfg.runs == 7


def test_resolution_defaults():
    assert parse_config({}).resolution_deg() == 0.1
    assert parse_config({"experiment": "verify-prop2"}).resolution_deg() == 0.02
    assert parse_config({"grid_deg": 0.05}).resolution_deg() == 0.05


def test_scenario_powers():
    sc = parse_config({"target_snr_db": 10, "inr_db": 20, "noise_power": 2}).scenario()
    assert sc.target_power == pytest.approx(20)
    assert [p.power for p in sc.interferers] == pytest.approx([200, 200])
    sc = parse_config({"distributed": {}, "inr_equals_snr": True}).scenario(snr_db=5)
    assert sum(p.power for p in sc.sources) == pytest.approx(10 ** 0.5)
    assert sc.interferers == ()


def test_hash_is_canonical():
    a = parse_config({"seed": 1, "m_tx": 10})
    b = parse_config({"m_tx": 10, "seed": 1})
    assert a.scenario_hash() == b.scenario_hash()
    assert a.scenario_hash() != parse_config({"seed": 2}).scenario_hash()
    assert json.loads(a.canonical_json())["experiment"] == Experiment.BEAMPATTERN.value
