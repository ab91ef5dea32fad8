import json
import subprocess
import sys

import numpy as np
import pytest
import yaml
from hypothesis import given, settings
from hypothesis import strategies as st

from raqr import config as cfgmod
from raqr import io
from raqr.cli import dispatch
from raqr.exceptions import ConfigError

FAST = ["--set", "bits_per_point=2000", "--set", "link.tx_power_step_db=10"]


def _read(path):
    return path.read_bytes()


# ---- config ------------------------------------------------------------------------------

def test_empty_file_gives_defaults(tmp_path):
    f = tmp_path / "empty.yaml"
    f.write_text("")
    assert cfgmod.load_config(f) == cfgmod.load_defaults()


def test_file_and_override_layering(tmp_path):
    f = tmp_path / "c.yaml"
    f.write_text("link:\n  distance_m: 150\n  pathloss_exponent: 3.0\n")
    cfg = cfgmod.load_config(f, ["link.pathloss_exponent=3.8", "seed=7"])
    assert cfg["link"]["distance_m"] == 150.0
    assert cfg["link"]["pathloss_exponent"] == 3.8
    assert cfg["seed"] == 7


def test_unique_leaf_override():
    cfg = cfgmod.load_config(None, ["pathloss_exponent=2.5"])
    assert cfg["link"]["pathloss_exponent"] == 2.5


def test_ambiguous_leaf_override():
    with pytest.raises(ConfigError, match="ambiguous"):
        cfgmod.load_config(None, ["density_m3=1e16"])


def test_misspelled_key_is_named(tmp_path):
    f = tmp_path / "bad.yaml"
    f.write_text("link:\n  pathlos_exponent: 3.8\n")
    with pytest.raises(ConfigError, match="link.pathlos_exponent"):
        cfgmod.load_config(f)


def test_unit_mismatch_key():
    with pytest.raises(ConfigError, match="unit mismatch.*distance_m"):
        cfgmod.load_config(None, ["link.distance_km=0.2"])


def test_unit_mismatch_value():
    with pytest.raises(ConfigError, match="unit mismatch"):
        cfgmod.load_config(None, ["link.distance_m=200m"])


def test_type_errors():
    with pytest.raises(ConfigError):
        cfgmod.load_config(None, ["eit.doppler=3"])
    with pytest.raises(ConfigError):
        cfgmod.load_config(None, ["link.array.elements=2.5"])
    with pytest.raises(ConfigError):
        cfgmod.load_config(None, ["link.distance_m=.inf"])


def test_dump_roundtrip():
    cfg = cfgmod.load_config(None, ["seed=11"])
    assert cfgmod.merge(cfgmod.load_defaults(), yaml.safe_load(cfgmod.dump_config(cfg))) == cfg


@settings(max_examples=25)
@given(st.floats(10.0, 1000.0), st.floats(2.0, 6.0), st.integers(0, 2**31))
def test_override_roundtrip_property(d, exp, seed):
    cfg = cfgmod.load_config(None, [f"link.distance_m={d!r}", f"link.pathloss_exponent={exp!r}", f"seed={seed}"])
    again = cfgmod.merge(cfgmod.load_defaults(), yaml.safe_load(cfgmod.dump_config(cfg)))
    assert again == cfg
    assert cfgmod.channel_from_config(cfg).distance == d


def test_builders_follow_config():
    cfg = cfgmod.load_config(None, ["receiver.f_if_hz=2e5"])
    sc = cfgmod.superhet_from_config(cfg, "link")
    assert sc.f_c - sc.f_l == pytest.approx(2e5)
    assert sc.photodetect_mode == "BCOD"
    with pytest.raises(ConfigError):
        cfgmod.superhet_from_config(cfg, "nope")


# ---- io ------------------------------------------------------------------------------------

@given(st.lists(st.floats(-1e6, 1e6), min_size=1, max_size=50))
def test_timeseries_roundtrip(vals):
    import tempfile
    from pathlib import Path

    with tempfile.TemporaryDirectory() as d:
        p = Path(d) / "ts.csv"
        t = np.arange(len(vals)) * 1e-7
        io.write_timeseries(p, t, vals)
        t2, v2 = io.read_timeseries(p)
    np.testing.assert_array_equal(t2, t)
    np.testing.assert_array_equal(v2, vals)


def test_complex_raw_roundtrip(tmp_path, rng):
    x = rng.standard_normal(1000) + 1j * rng.standard_normal(1000)
    p = tmp_path / "iq.raw"
    io.write_complex_raw(p, x, 2.4e6)
    y, fs = io.read_complex_raw(p)
    assert fs == 2.4e6
    np.testing.assert_array_equal(x, y)
    assert p.read_bytes().startswith(b"RAQR-IQ 1")


def test_json_numpy(tmp_path):
    io.write_json(tmp_path / "a.json", {"a": np.arange(3), "b": np.float64(1.5), "c": 1 + 2j})
    assert json.loads((tmp_path / "a.json").read_text()) == {"a": [0, 1, 2], "b": 1.5, "c": [1.0, 2.0]}


# ---- cli -----------------------------------------------------------------------------------

def test_exit_codes(tmp_path, capsys):
    assert dispatch(["no-such-command"]) == 1
    assert dispatch([]) == 1
    assert dispatch(["siso-ber", "--out", str(tmp_path), "--set", "link.pathlos_exponent=3"]) == 1
    assert "pathlos_exponent" in capsys.readouterr().err
    assert dispatch(["siso-ber", "--out", str(tmp_path), "--threads", "-1"]) == 1
    assert dispatch(["ats-readout", "--out", str(tmp_path / "a"), "--set", "ats.rabi_rf_hz=1e3"]) == 2
    m = json.loads((tmp_path / "a" / "manifest.json").read_text())
    assert m["status"].startswith("numerical failure")


def test_manifest_contents(tmp_path):
    out = tmp_path / "run"
    assert dispatch(["siso-ber", "--out", str(out), "--seed", "5", "--set", "pathloss_exponent=3.8"] + FAST) == 0
    m = json.loads((out / "manifest.json").read_text())
    for key in ("command", "argv", "resolved_config", "seed", "tool_version", "git_describe", "started",
                "finished", "status", "output_paths"):
        assert key in m
    assert m["status"] == "ok" and m["seed"] == 5
    assert m["resolved_config"]["link"]["pathloss_exponent"] == 3.8
    assert sorted(p.split("/")[-1] for p in m["output_paths"]) == [
        "siso_ber_conv.csv", "siso_ber_raqr.csv", "siso_snr_conv.csv", "siso_snr_raqr.csv"]


def test_determinism_and_replay(tmp_path):
    a, b, c = tmp_path / "a", tmp_path / "b", tmp_path / "c"
    assert dispatch(["siso-ber", "--out", str(a), "--seed", "3"] + FAST) == 0
    assert dispatch(["siso-ber", "--out", str(b), "--seed", "3", "--threads", "2"] + FAST) == 0
    assert dispatch(["siso-ber", "--out", str(c), "--config", str(a / "manifest.json")]) == 0
    for name in ("siso_ber_raqr.csv", "siso_ber_conv.csv"):
        assert _read(a / name) == _read(b / name) == _read(c / name)
    d = tmp_path / "d"
    assert dispatch(["siso-ber", "--out", str(d), "--seed", "4"] + FAST) == 0
    assert _read(a / "siso_ber_conv.csv") != _read(d / "siso_ber_conv.csv")


def test_json_format(tmp_path):
    assert dispatch(["doa-crb", "--out", str(tmp_path), "--format", "json"]) == 0
    data = json.loads((tmp_path / "doa_crb.json").read_text())
    assert set(data) == {"doa_crb_raqr", "doa_crb_conv"}
    r, c = np.array(data["doa_crb_raqr"]["crb_rad2"]), np.array(data["doa_crb_conv"]["crb_rad2"])
    assert np.all(r < c)


def test_sensitivity_command(tmp_path):
    assert dispatch(["sensitivity", "--out", str(tmp_path)]) == 0
    rows = (tmp_path / "sensitivity.csv").read_text().splitlines()
    assert rows[0].startswith("receiver,")
    conv = [r for r in rows if r.startswith("conventional")][0].split(",")
    assert float(conv[4]) == pytest.approx(1.5e-9, rel=1e-12)


def test_eit_scenario_flag(tmp_path):
    assert dispatch(["eit-spectrum", "--out", str(tmp_path), "--scenario", "i", "--set", "eit.points=401"]) == 0
    m = json.loads((tmp_path / "manifest.json").read_text())
    assert m["resolved_config"]["eit"]["scenario"] == "i"
    data = np.loadtxt(tmp_path / "spectrum.csv", delimiter=",", skiprows=1)
    assert data[:, 1].argmin() == 200  # single absorption dip at line center


def test_dump_config_stdout(capsys):
    assert dispatch(["dump-config", "--seed", "9"]) == 0
    assert yaml.safe_load(capsys.readouterr().out)["seed"] == 9


def test_console_entry_point(tmp_path):
    r = subprocess.run([sys.executable, "-m", "raqr.cli", "bogus"], capture_output=True, text=True)
    assert r.returncode == 1
