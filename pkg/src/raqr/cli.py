"""Command-line front end: one subcommand per experiment, files plus a JSON run manifest."""

import argparse
import datetime as dt
import subprocess
import sys
from fractions import Fraction
from importlib import metadata
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import io
from .exceptions import (
    BelowATSThresholdError,
    ConfigError,
    EstimationFailureError,
    IllPosedError,
    LinearStarkError,
    NumericalFailureError,
    ZeroGainBiasError,
)

COMMANDS = ("stark-map", "eit-spectrum", "ats-readout", "sensitivity", "siso-ber", "mimo-rate", "doa-crb",
            "doa-mse", "dump-config")
NUMERICAL_ERRORS = (NumericalFailureError, IllPosedError, EstimationFailureError, ZeroGainBiasError,
                    BelowATSThresholdError, LinearStarkError, ArithmeticError, np.linalg.LinAlgError)
EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


def build_parser():
    common = _Parser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML config file or a previous run manifest")
    common.add_argument("--out", type=Path, default=Path("raqr-out"), help="output directory")
    common.add_argument("--seed", type=int, help="master seed (overrides config)")
    common.add_argument("--threads", type=int, help="worker threads, 0 = auto")
    common.add_argument("--format", choices=("csv", "json"), default="csv")
    common.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                        help="config override, dotted path or unique leaf name")
    parser = _Parser(prog="raqr", description="Rydberg atomic receiver simulator")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    for name in COMMANDS:
        p = sub.add_parser(name, parents=[common])
        if name == "eit-spectrum":
            p.add_argument("--scenario", choices=("i", "ii", "iii"))
    return parser


class Run:
    """Tracks outputs of one subcommand run."""

    def __init__(self, cfg, out, fmt):
        self.cfg = cfg
        self.out = out
        self.fmt = fmt
        self.paths = []
        self._json = {}

    def path(self, name):
        p = self.out / name
        self.paths.append(str(p))
        return p

    def curve(self, stem, x, y, stderr=None, x_name="x", y_name="y"):
        if self.fmt == "json":
            self._json[stem] = {x_name: list(map(float, x)), y_name: list(map(float, y)),
                                "stderr": list(map(float, np.zeros(len(x)) if stderr is None else stderr))}
        else:
            io.write_curve(self.path(stem + ".csv"), x, y, stderr, x_name, y_name)

    def table(self, stem, header, rows):
        if self.fmt == "json":
            self._json[stem] = [dict(zip(header, r)) for r in rows]
        else:
            io.write_rows(self.path(stem + ".csv"), header, rows)

    def finish(self, command):
        if self.fmt == "json" and self._json:
            io.write_json(self.path(command.replace("-", "_") + ".json"), self._json)


def _git_describe():
    try:
        r = subprocess.run(["git", "describe", "--always", "--dirty", "--tags"], capture_output=True, text=True,
                           cwd=Path(__file__).resolve().parent, timeout=10)
        return r.stdout.strip() or "unknown"
    except (OSError, subprocess.SubprocessError):
        return "unknown"


def _version():
    try:
        return metadata.version("artifact")
    except metadata.PackageNotFoundError:
        return "0+unknown"


def _now():
    return dt.datetime.now(dt.timezone.utc).isoformat()


def cmd_stark_map(run):
    from .atomic import RydbergState, load_species, stark_map

    c = run.cfg["stark"]
    species = load_species(run.cfg["species"])
    m = Fraction(c["m_j"]).limit_denominator(2)
    center = RydbergState.parse(c["center"], m)
    fields = np.linspace(0.0, c["field_max_v_per_cm"], c["field_points"])
    smap = stark_map(species, center, c["energy_window_ghz"], fields, max_delta_n=c["max_delta_n"])
    if run.fmt == "json":
        run._json["stark_map"] = {"field_V_per_cm": fields, "labels": [s.label for s in smap.basis],
                                  "center": center.label, "energies_GHz": smap.eigen_traces}
    else:
        smap.to_csv(run.path("stark_map.csv"))


def cmd_eit_spectrum(run):
    from .eit import scenario_scheme, transmission_spectrum

    e = run.cfg["eit"]
    scheme = scenario_scheme(cfgmod.build_scheme(run.cfg), e["scenario"],
                             2 * np.pi * e["scenario_rabi_rf_hz"])
    grid = 2 * np.pi * np.linspace(-e["span_hz"] / 2, e["span_hz"] / 2, e["points"])
    tr = transmission_spectrum(scheme, grid, doppler=e["doppler"], velocity_classes=e["velocity_classes"])
    _write_trace(run, "spectrum", tr)
    return tr


def _write_trace(run, stem, tr):
    if run.fmt == "json":
        run._json[stem] = {"detuning_Hz": tr.detuning_grid / (2 * np.pi), "transmission": tr.transmission,
                           "re_chi": tr.susceptibility.real, "im_chi": tr.susceptibility.imag}
    else:
        tr.to_csv(run.path(stem + ".csv"))


def cmd_ats_readout(run):
    from .eit import ats_splitting, field_from_splitting, transmission_spectrum

    e, a = run.cfg["eit"], run.cfg["ats"]
    scheme = cfgmod.build_scheme(run.cfg, rabi_rf_hz=a["rabi_rf_hz"], detune_rf_hz=a["detune_rf_hz"])
    grid = 2 * np.pi * np.linspace(-e["span_hz"] / 2, e["span_hz"] / 2, e["points"])
    tr = transmission_spectrum(scheme, grid, doppler=e["doppler"], velocity_classes=e["velocity_classes"])
    split = ats_splitting(tr)
    est = field_from_splitting(split, scheme.rf_dipole)
    _write_trace(run, "ats_spectrum", tr)
    run.table("ats_readout", ["quantity", "value"], [
        ("splitting_hz", split), ("field_estimate_v_per_cm", est), ("field_true_v_per_cm", scheme.rf_field),
    ])


def _models(cfg):
    from .receiver import baseband_model

    raqr = baseband_model(cfgmod.superhet_from_config(cfg, cfg["receiver"]["link_profile"]))
    return raqr, cfgmod.conventional_from_config(cfg)


def cmd_sensitivity(run):
    from .receiver import baseband_model, noise_budget

    rows = []
    rc = run.cfg["receiver"]
    for label, name in (("sensitivity_profile", rc["sensitivity_profile"]), ("link_profile", rc["link_profile"])):
        sc = cfgmod.superhet_from_config(run.cfg, name)
        b = noise_budget(sc)
        m = baseband_model(sc)
        rows.append((f"{name}", b.sql, b.photon_shot, b.pd_electrical, b.total, m.rho, m.phi, m.noise_psd))
    conv = cfgmod.conventional_from_config(run.cfg)
    rows.append(("conventional", 0.0, 0.0, 0.0, conv.sensitivity, conv.rho, conv.phi, conv.noise_psd))
    run.table("sensitivity", ["receiver", "sql_v_per_cm_rthz", "photon_shot_v_per_cm_rthz",
                              "pd_electrical_v_per_cm_rthz", "total_v_per_cm_rthz", "rho", "phi_rad",
                              "noise_psd"], rows)


def cmd_siso_ber(run):
    from .link import simulate_siso

    ch = cfgmod.channel_from_config(run.cfg)
    lk = run.cfg["link"]
    for tag, model in zip(("raqr", "conv"), _models(run.cfg)):
        res = simulate_siso(ch, model, lk["modulation"], lk["bits_per_point"], threads=run.cfg["threads"])
        run.curve(f"siso_ber_{tag}", [r["tx_power_dbm"] for r in res], [r["ber"] for r in res],
                  [r["stderr"] for r in res], "tx_power_dbm", "ber")
        run.curve(f"siso_snr_{tag}", [r["tx_power_dbm"] for r in res], [r["snr_db"] for r in res], None,
                  "tx_power_dbm", "snr_db")


def _geometry(cfg):
    from .link import ArrayGeometry

    a = cfg["link"]["array"]
    return ArrayGeometry(a["elements"], a["spacing_wavelengths"])


def cmd_mimo_rate(run):
    from .link import simulate_mimo_rate

    ch = cfgmod.channel_from_config(run.cfg)
    raqr, conv = _models(run.cfg)
    res = simulate_mimo_rate(ch, _geometry(run.cfg), raqr, conv, draws=run.cfg["link"]["mimo_draws"])
    x = [r["tx_power_dbm"] for r in res]
    run.curve("mimo_rate_raqr", x, [r["rate_raqr"] for r in res], [r["stderr_raqr"] for r in res],
              "tx_power_dbm", "rate_bps_per_hz")
    run.curve("mimo_rate_conv", x, [r["rate_conv"] for r in res], [r["stderr_conv"] for r in res],
              "tx_power_dbm", "rate_bps_per_hz")


def cmd_doa_crb(run):
    from .link import doa_crb
    from .link.channel import model_snr

    ch = cfgmod.channel_from_config(run.cfg)
    d = run.cfg["link"]["doa"]
    geom = _geometry(run.cfg)
    for tag, model in zip(("raqr", "conv"), _models(run.cfg)):
        snr = model_snr(model, ch)
        crb = [doa_crb(geom, s, d["samples"], d["theta_rad"]) for s in snr]
        run.curve(f"doa_crb_{tag}", ch.tx_power_grid, crb, None, "tx_power_dbm", "crb_rad2")


def cmd_doa_mse(run):
    from .link import doa_mse

    d = run.cfg["link"]["doa"]
    geom = _geometry(run.cfg)
    grid = np.arange(d["snr_min_db"], d["snr_max_db"] + 1e-9, d["snr_step_db"])
    mse, se, crb = [], [], []
    for k, s_db in enumerate(grid):
        m, c, recs = doa_mse(geom, d["theta_rad"], 10 ** (s_db / 10), d["samples"], d["trials"],
                             seed=run.cfg["seed"] * 1000 + k, grid_step=d["grid_step_rad"])
        sq = np.array([(r.theta_hat - r.theta_true) ** 2 for r in recs])
        mse.append(m)
        se.append(float(sq.std(ddof=1) / np.sqrt(len(sq))))
        crb.append(c)
    run.curve("doa_mse", grid, mse, se, "snr_db", "mse_rad2")
    run.curve("doa_crb", grid, crb, None, "snr_db", "crb_rad2")


HANDLERS = {
    "stark-map": cmd_stark_map,
    "eit-spectrum": cmd_eit_spectrum,
    "ats-readout": cmd_ats_readout,
    "sensitivity": cmd_sensitivity,
    "siso-ber": cmd_siso_ber,
    "mimo-rate": cmd_mimo_rate,
    "doa-crb": cmd_doa_crb,
    "doa-mse": cmd_doa_mse,
}


def _resolve(args):
    overrides = list(args.set)
    cfg = cfgmod.load_config(args.config, overrides)
    if args.seed is not None:
        cfg = cfgmod.merge(cfg, {"seed": args.seed})
    if args.threads is not None:
        if args.threads < 0:
            raise ConfigError("--threads must be >= 0")
        cfg = cfgmod.merge(cfg, {"threads": args.threads})
    if getattr(args, "scenario", None):
        cfg = cfgmod.merge(cfg, {"eit": {"scenario": args.scenario}})
    return cfg


def dispatch(argv=None):
    """Run one subcommand; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise UsageError("raqr: a subcommand is required (" + ", ".join(COMMANDS) + ")")
        cfg = _resolve(args)
    except (UsageError, ConfigError) as exc:
        print(exc, file=sys.stderr)
        return EXIT_USAGE

    if args.command == "dump-config":
        sys.stdout.write(cfgmod.dump_config(cfg))
        return EXIT_OK

    out = args.out
    out.mkdir(parents=True, exist_ok=True)
    run = Run(cfg, out, args.format)
    manifest_path = out / "manifest.json"
    manifest = {
        "command": args.command,
        "argv": list(sys.argv[1:] if argv is None else argv),
        "resolved_config": cfg,
        "seed": cfg["seed"],
        "tool_version": _version(),
        "git_describe": _git_describe(),
        "started": _now(),
        "finished": None,
        "status": "running",
        "output_paths": [],
    }
    io.write_json(manifest_path, manifest)
    code = EXIT_OK
    try:
        HANDLERS[args.command](run)
        run.finish(args.command)
        manifest["status"] = "ok"
    except NUMERICAL_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        manifest["status"] = f"numerical failure: {exc}"
        code = EXIT_NUMERICAL
    except (ConfigError, ValueError) as exc:
        print(f"invalid argument: {exc}", file=sys.stderr)
        manifest["status"] = f"invalid argument: {exc}"
        code = EXIT_USAGE
    manifest["finished"] = _now()
    manifest["output_paths"] = run.paths
    io.write_json(manifest_path, manifest)
    for p in run.paths:
        print(p, file=sys.stderr)
    return code


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
