"""Batch front-end: ``isores --config run.json [--output DIR] [--threads K] [--verbose]``.

The config is a JSON object with a ``command`` (resonances, invariants,
compare, sobolev, heat-trace, det-sweep) and its parameters; potential
files (paths relative to the config file) use the schema of
``isoresonance.potential.dumps``.  Every JSON report embeds the resolved
config.  Exit status: 0 success, 2 invalid input, 3 numerical failure.
"""
import argparse
import csv
import json
import logging
import os
import sys
import warnings

import numpy as np

from . import determinant
from .errors import ConvergenceError, IsoresError, ValidationError
from .invariants import (fit_heat_coefficients, heat_invariants, invariant_vector,
                         verify_invariants_equal)
from .invariants.heat import DEFAULT_T_GRID
from .potential import core as pcore
from .potential.inequalities import verify_inequality_suite
from .resonances import SearchRegion, compare_resonance_sets, locate_resonances

log = logging.getLogger("isoresonance")

COMMANDS = ("resonances", "invariants", "compare", "sobolev", "heat-trace", "det-sweep")
EXIT_OK, EXIT_INVALID, EXIT_NUMERICAL = 0, 2, 3

DEFAULTS = {
    "region": {"re_min": 0.1, "re_max": 8.0, "im_min": -3.0, "im_max": -1e-3,
               "exclusion_radius": 1e-3},
    "tol": 1e-8,
    "n": 200,
    "ell_max": 8,
    "seed": 0,
    "J": 3,
    "t_grid": [float(t) for t in DEFAULT_T_GRID],
    "count": 100,
    "j": 4,
    "grid": {"re_min": 0.1, "re_max": 10.0, "im_min": -3.0, "im_max": -1e-3,
             "n_re": 20, "n_im": 20},
}

# the defaults each command actually reads (and therefore records)
USES = {
    "resonances": ("region", "tol", "n", "ell_max"),
    "invariants": ("J",),
    "compare": ("region", "tol", "n", "ell_max", "J"),
    "sobolev": ("seed", "count", "j"),
    "heat-trace": ("t_grid", "J"),
    "det-sweep": ("grid", "n", "ell_max"),
}


# ------------------------------------------------------------------ config

def _require(cond, msg):
    if not cond:
        raise ValidationError(msg)


def _load_json(path):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError as exc:
        raise ValidationError(f"file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: malformed JSON ({exc})") from exc


def resolve_config(raw, base_dir="."):
    """Defaults filled in and fields validated; potential paths kept as given."""
    _require(isinstance(raw, dict), "config must be a JSON object")
    cfg = dict(raw)
    _require(cfg.get("command") in COMMANDS,
             f"command must be one of {', '.join(COMMANDS)} (got {cfg.get('command')!r})")
    cmd = cfg["command"]
    for key in USES[cmd]:
        cfg.setdefault(key, DEFAULTS[key])
    for key in ("region", "grid"):
        if key in cfg:
            _require(isinstance(cfg[key], dict), f"{key} must be an object")
            merged = dict(DEFAULTS[key])
            merged.update(cfg[key])
            cfg[key] = merged
    casts = {"tol": float, "n": int, "ell_max": int, "seed": int, "J": int, "count": int, "j": int}
    try:
        for key, cast in casts.items():
            if key in cfg:
                cfg[key] = cast(cfg[key])
        if "t_grid" in cfg:
            cfg["t_grid"] = [float(t) for t in cfg["t_grid"]]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"bad numeric config field: {exc}") from exc
    _require(cfg.get("tol", 1.0) > 0, "tol must be positive")
    _require(cfg.get("n", 8) >= 8, "n must be >= 8")
    if cmd == "compare":
        _require(isinstance(cfg.get("potentials"), list) and len(cfg["potentials"]) == 2,
                 "compare needs \"potentials\": [first, second]")
        refs = cfg["potentials"]
    elif cmd == "sobolev" and "potential" not in cfg and "potentials" not in cfg:
        refs = []                                   # seeded random suite
    else:
        if "potentials" in cfg and cmd == "sobolev":
            refs = list(cfg["potentials"])
        else:
            _require("potential" in cfg, f"{cmd} needs a \"potential\"")
            refs = [cfg["potential"]]
    for ref in refs:
        if isinstance(ref, str):
            _require(os.path.isfile(os.path.join(base_dir, ref)), f"file not found: {ref}")
        else:
            _require(isinstance(ref, dict), "a potential is a file path or an inline object")
    return cfg


def _potential(ref, base_dir):
    if isinstance(ref, str):
        return pcore.from_dict(_load_json(os.path.join(base_dir, ref)))
    return pcore.from_dict(ref)


# ------------------------------------------------------------------ output

def write_json(obj, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(json.dumps(obj, sort_keys=True, indent=2, default=_json_default))
        fh.write("\n")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, complex):
        return {"re": o.real, "im": o.imag}
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _fmt(x):
    return "%.17g" % x


def emit_plot_data(data, path):
    """CSV plot data for a determinant sweep (list of DeterminantValue) or a
    resonance set; header row always present, complex values split re/im."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        if hasattr(data, "entries"):
            writer.writerow(["re(lambda)", "im(lambda)", "multiplicity"])
            for lam, m in data.entries:
                writer.writerow([_fmt(lam.real), _fmt(lam.imag), m])
        else:
            writer.writerow(determinant.SWEEP_HEADER)
            for dv in data:
                writer.writerow([_fmt(x) for x in (dv.lam.real, dv.lam.imag, dv.value.real,
                                                   dv.value.imag, dv.log_scale)])


# ------------------------------------------------------------------ commands

def _region(cfg):
    return SearchRegion.from_dict(cfg["region"])


def cmd_resonances(cfg, base, out, threads):
    V = _potential(cfg["potential"], base)
    rs = locate_resonances(V, _region(cfg), cfg["tol"], cfg["n"],
                           ell_max=cfg["ell_max"] if V.dimension == 3 else None, threads=threads)
    log.info("%d resonances (total multiplicity %d)", len(rs), rs.total_multiplicity)
    report = rs.to_dict()
    report["config"] = cfg
    write_json(report, os.path.join(out, "resonances.json"))
    emit_plot_data(rs, os.path.join(out, "resonances.csv"))
    return EXIT_OK


def cmd_invariants(cfg, base, out, threads):
    V = _potential(cfg["potential"], base)
    report = invariant_vector(V, cfg["J"]).to_dict()
    report["config"] = cfg
    write_json(report, os.path.join(out, "invariants.json"))
    return EXIT_OK


def cmd_compare(cfg, base, out, threads):
    V0, V1 = (_potential(p, base) for p in cfg["potentials"])
    _require(V0.dimension == V1.dimension, "potentials must share the dimension")
    region = _region(cfg)
    kw = dict(ell_max=cfg["ell_max"] if V0.dimension == 3 else None, threads=threads)
    A = locate_resonances(V0, region, cfg["tol"], cfg["n"], **kw)
    B = locate_resonances(V1, region, cfg["tol"], cfg["n"], **kw)
    cfg["match_tol"] = match_tol = float(cfg.get("match_tol", max(1e-6, 10 * cfg["tol"])))
    cfg["invariant_tol"] = float(cfg.get("invariant_tol", 1e-10))
    iso = compare_resonance_sets(A, B, match_tol)
    report = iso.to_dict()
    report["resonances"] = [A.to_dict(), B.to_dict()]
    smooth = all(v.smooth for v in (V0, V1))
    J = min(cfg["J"], 3) if smooth else min(cfg["J"], 2)
    report["invariants"] = verify_invariants_equal(V0, V1, J, cfg["invariant_tol"]).to_dict()
    report["config"] = cfg
    write_json(report, os.path.join(out, "compare.json"))
    log.info("iso_resonant = %s", iso.iso_resonant)
    return EXIT_OK


def cmd_sobolev(cfg, base, out, threads):
    if "potential" in cfg:
        pots = [_potential(cfg["potential"], base)]
    elif "potentials" in cfg:
        pots = [_potential(p, base) for p in cfg["potentials"]]
    else:
        rng = np.random.default_rng(cfg["seed"])
        pots = [pcore.random_bump_sum(rng) for _ in range(cfg["count"])]
    rows = []
    for i, V in enumerate(pots):
        rep = verify_inequality_suite(V, j=cfg["j"], strict=False)
        rows.append({"index": i, "all_hold": rep.all_hold, "sup_ratio": rep.sup_ratio,
                     "sobolev_constants": {str(k): v for k, v in
                                           sorted(rep.sobolev_constants.items())},
                     "failures": [c.name for c in rep.failures]})
    ok = all(r["all_hold"] for r in rows)
    report = {"all_hold": ok, "potentials": rows, "config": cfg}
    write_json(report, os.path.join(out, "sobolev.json"))
    if not ok:
        log.error("inequality suite failed on %d potential(s)",
                  sum(not r["all_hold"] for r in rows))
        return EXIT_NUMERICAL
    return EXIT_OK


def cmd_heat_trace(cfg, base, out, threads):
    from .invariants import heat_trace_oracle
    V = _potential(cfg["potential"], base)
    ts = np.asarray(cfg["t_grid"], dtype=float)
    traces = heat_trace_oracle(V, ts, threads=threads)
    fit = fit_heat_coefficients(V, ts, cfg["J"], traces=traces)
    closed = heat_invariants(V, min(cfg["J"], 3 if V.smooth else 2))
    report = {"t": [float(t) for t in ts], "trace": [float(x) for x in traces],
              "gamma": {str(j): g for j, g in fit.gamma.items()},
              "c": {str(j): c for j, c in closed.items()},
              "kappa_fitted": {str(j): fit.gamma[j] / closed[j] for j in closed
                               if j in fit.gamma and closed[j] != 0},
              "fit_residual": fit.residual, "fit_condition": fit.condition, "config": cfg}
    write_json(report, os.path.join(out, "heat_trace.json"))
    with open(os.path.join(out, "heat_trace.csv"), "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["t", "trace"])
        for t, x in zip(ts, traces):
            writer.writerow([_fmt(t), _fmt(x)])
    return EXIT_OK


def cmd_det_sweep(cfg, base, out, threads):
    V = _potential(cfg["potential"], base)
    g = cfg["grid"]
    _require(int(g["n_re"]) >= 1 and int(g["n_im"]) >= 1, "grid needs n_re, n_im >= 1")
    res = np.linspace(g["re_min"], g["re_max"], int(g["n_re"]))
    ims = np.linspace(g["im_min"], g["im_max"], int(g["n_im"]))
    lams = [complex(a, b) for b in ims for a in res]
    values = determinant.determinant_sweep(
        V, lams, cfg["n"], ell_max=cfg["ell_max"] if V.dimension == 3 else None)
    emit_plot_data(values, os.path.join(out, "det_sweep.csv"))
    report = {"points": len(values), "max_abs_log": max(abs(v.log_scale) for v in values),
              "config": cfg}
    write_json(report, os.path.join(out, "det_sweep.json"))
    return EXIT_OK


HANDLERS = {"resonances": cmd_resonances, "invariants": cmd_invariants, "compare": cmd_compare,
            "sobolev": cmd_sobolev, "heat-trace": cmd_heat_trace, "det-sweep": cmd_det_sweep}


def run(raw_config, base_dir=".", output=".", threads=1):
    """Execute one config; returns the exit status (reports go to ``output``)."""
    cfg = resolve_config(raw_config, base_dir)
    os.makedirs(output, exist_ok=True)
    with warnings.catch_warnings():
        warnings.simplefilter("default")
        return HANDLERS[cfg["command"]](cfg, base_dir, output, threads)


def build_parser():
    p = argparse.ArgumentParser(prog="isores", description=__doc__.splitlines()[0])
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--output", default=None, help="report directory (default: config \"output\" or .)")
    p.add_argument("--threads", type=int, default=1, help="worker threads")
    p.add_argument("--verbose", action="store_true", help="progress on standard error")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="isores: %(levelname)s: %(message)s", stream=sys.stderr)
    try:
        _require(args.threads >= 1, "--threads must be >= 1")
        raw = _load_json(args.config)
        base = os.path.dirname(os.path.abspath(args.config))
        output = args.output or (raw.get("output") if isinstance(raw, dict) else None) or "."
        return run(raw, base, output, args.threads)
    except ValidationError as exc:
        print(f"isores: invalid input: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except ConvergenceError as exc:
        print(f"isores: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except IsoresError as exc:
        print(f"isores: error: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except OSError as exc:
        print(f"isores: I/O error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
