"""Hierarchical YAML configuration: defaults < file < command-line overrides."""

import copy
import json
import math
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

from .eit.scheme import scheme_from_config
from .exceptions import ConfigError

UNIT_SUFFIXES = (
    "hz", "ghz", "mhz", "khz", "m", "m3", "s", "k", "u", "db", "dbm", "rad", "w", "ea0",
    "v_per_cm", "v_per_cm_s", "a_per_w", "a_per_rthz", "wavelengths",
    # recognised only to report unit mismatches
    "km", "cm", "mm", "nm", "ms", "us", "ns", "mw", "dbw", "thz", "v_per_m", "mrad", "deg",
)


def load_defaults():
    text = resources.files("raqr.data").joinpath("defaults.yaml").read_text()
    return yaml.safe_load(text)


def _unit_of(key):
    for suf in sorted(UNIT_SUFFIXES, key=len, reverse=True):
        if key.endswith("_" + suf):
            return suf
    return None


def _stem(key):
    u = _unit_of(key)
    return key[: -len(u) - 1] if u else key


def _check_value(path, default, value):
    unit = _unit_of(path[-1])
    if isinstance(default, bool):
        if not isinstance(value, bool):
            raise ConfigError(f"{'.'.join(path)}: expected true/false, got {value!r}")
        return value
    numeric = isinstance(default, (int, float)) or (default is None and unit is not None)
    if numeric:
        if value is None and default is None:
            return None
        if isinstance(value, str):
            try:
                value = float(value)
            except ValueError:
                raise ConfigError(
                    f"{'.'.join(path)}: unit mismatch, give a bare number in {unit or 'the key unit'} "
                    f"(got {value!r})"
                ) from None
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(f"{'.'.join(path)}: expected a number, got {value!r}")
        if not math.isfinite(value):
            raise ConfigError(f"{'.'.join(path)}: value must be finite")
        if isinstance(default, int) and not isinstance(default, bool):
            if value != int(value):
                raise ConfigError(f"{'.'.join(path)}: expected an integer, got {value!r}")
            return int(value)
        return float(value) if isinstance(default, float) or default is None else value
    if isinstance(default, str) and not isinstance(value, str):
        raise ConfigError(f"{'.'.join(path)}: expected a string, got {value!r}")
    return value


def _unknown(path, key, known):
    stem = _stem(key)
    for k in known:
        if _stem(k) == stem and k != key and _unit_of(k) != _unit_of(key):
            raise ConfigError(
                f"unit mismatch for {'.'.join(path + [key])}: this key is spelled {'.'.join(path + [k])}"
            )
    raise ConfigError(f"unknown config key {'.'.join(path + [key])}")


def merge(base, overlay, path=None):
    """Validated deep overlay; returns a new tree."""
    path = path or []
    out = copy.deepcopy(base)
    if overlay is None:
        return out
    if not isinstance(overlay, dict):
        raise ConfigError(f"{'.'.join(path) or 'config'}: expected a mapping")
    for key, value in overlay.items():
        key = str(key)
        if key not in base:
            _unknown(path, key, list(base))
        default = base[key]
        if isinstance(default, dict):
            if not isinstance(value, dict):
                raise ConfigError(f"{'.'.join(path + [key])}: expected a mapping")
            out[key] = merge(default, value, path + [key])
        else:
            out[key] = _check_value(path + [key], default, value)
    return out


def _leaf_paths(tree, prefix=()):
    for k, v in tree.items():
        if isinstance(v, dict):
            yield from _leaf_paths(v, prefix + (k,))
        else:
            yield prefix + (k,)


def parse_override(text, defaults):
    """``a.b.c=value`` (or a unique leaf name) into a nested mapping."""
    if "=" not in text:
        raise ConfigError(f"override {text!r} must look like key=value")
    key, raw = text.split("=", 1)
    key = key.strip()
    value = yaml.safe_load(raw) if raw.strip() else None
    parts = key.split(".")
    if len(parts) == 1:
        hits = [p for p in _leaf_paths(defaults) if p[-1] == key]
        if len(hits) == 1:
            parts = list(hits[0])
        elif len(hits) > 1:
            raise ConfigError(f"ambiguous key {key}; use one of {', '.join('.'.join(h) for h in hits)}")
    tree = value
    for p in reversed(parts):
        tree = {p: tree}
    return tree


def read_config_file(path):
    """YAML config, or the resolved_config of a JSON run manifest."""
    p = Path(path)
    if not p.exists():
        raise ConfigError(f"config file not found: {p}")
    text = p.read_text()
    try:
        data = json.loads(text) if p.suffix == ".json" else yaml.safe_load(text)
    except (yaml.YAMLError, json.JSONDecodeError) as exc:
        raise ConfigError(f"cannot parse {p}: {exc}") from None
    if isinstance(data, dict) and "resolved_config" in data:
        data = data["resolved_config"]
    return data or {}


def load_config(path=None, overrides=()):
    defaults = load_defaults()
    cfg = merge(defaults, read_config_file(path)) if path else defaults
    for o in overrides:
        cfg = merge(cfg, o if isinstance(o, dict) else parse_override(o, defaults))
    return cfg


def dump_config(cfg):
    return yaml.safe_dump(cfg, sort_keys=False, default_flow_style=False)


def build_scheme(cfg, **eit_changes):
    e = copy.deepcopy(cfg["eit"])
    cell = e["cell"]
    for k in ("density_m3", "length_m", "temperature_k"):
        if k in eit_changes:
            cell[k] = eit_changes.pop(k)
    e.update(eit_changes)
    return scheme_from_config(e)


def superhet_from_config(cfg, profile=None):
    from .receiver.superhet import SuperhetConfig

    rc = cfg["receiver"]
    name = profile or rc["sensitivity_profile"]
    if name not in rc["profiles"]:
        raise ConfigError(f"unknown receiver profile {name!r}")
    p = rc["profiles"][name]
    scheme = build_scheme(cfg, rabi_probe_hz=p["rabi_probe_hz"], rabi_coupling_hz=p["rabi_coupling_hz"],
                          density_m3=p["density_m3"], length_m=p["length_m"])
    f_c = cfg["link"]["carrier_hz"]
    return SuperhetConfig(
        scheme=scheme,
        f_c=f_c,
        f_l=f_c - rc["f_if_hz"],
        lo_field=p["lo_field_v_per_cm"],
        probe_power=p["probe_power_w"],
        photodetect_mode=p["photodetect_mode"],
        pd_responsivity=rc["pd_responsivity_a_per_w"],
        pd_noise_current=p["pd_noise_current_a_per_rthz"],
        bcod_lo_power=p["bcod_lo_power_w"],
        if_bandwidth=rc["if_bandwidth_hz"],
        instantaneous_bandwidth=rc["instantaneous_bandwidth_hz"],
        doppler=p["doppler"],
        atom_number=rc["atom_number"],
        coherence_time=rc["coherence_time_s"],
        integration_time=rc["integration_time_s"],
        sql_calibration=rc["sql_calibration_v_per_cm_s"],
    )


def conventional_from_config(cfg):
    from .receiver.noise import conventional_baseline

    c = cfg["receiver"]["conventional"]
    return conventional_baseline(temperature=c["temperature_k"], noise_figure_db=c["noise_figure_db"],
                                 bandwidth=cfg["receiver"]["if_bandwidth_hz"], carrier=cfg["link"]["carrier_hz"])


def channel_from_config(cfg):
    from .link.channel import ChannelConfig

    lk = cfg["link"]
    grid = np.arange(lk["tx_power_min_dbm"], lk["tx_power_max_dbm"] + 1e-9, lk["tx_power_step_db"])
    ref = None if lk["reference_gain_db"] is None else 10.0 ** (lk["reference_gain_db"] / 10.0)
    try:
        return ChannelConfig(distance=lk["distance_m"], pathloss_exponent=lk["pathloss_exponent"],
                             fading=lk["fading"], carrier=lk["carrier_hz"], tx_power_grid=tuple(grid),
                             seed=cfg["seed"], reference_gain=ref)
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
