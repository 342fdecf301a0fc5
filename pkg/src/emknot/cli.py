"""
``emknot`` command-line front end.

Every flag can also be given in a JSON file passed with ``--config``; keys are
the long flag names with dashes replaced by underscores. Flags given on the
command line win over the file. Unknown keys are rejected.

Exit codes: 0 success, 1 check failure, 2 usage or configuration error,
3 numerical failure.
"""

import argparse
import json
import sys
from pathlib import Path

import numpy as np
import scipy.fft

from . import fieldlines, helicity, io, spectral, verify
from .errors import EmknotError
from .knotfields import KnotParams, eval_eb, eval_initial

EXIT_OK, EXIT_CHECK, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class ConfigError(Exception):
    pass


# ---------------------------------------------------------------- parsing


def _float_triple(text):
    parts = [float(v) for v in str(text).split(",")]
    if len(parts) != 3:
        raise argparse.ArgumentTypeError(f"expected x,y,z, got {text!r}")
    return parts


def _common(p, grid=True):
    p.add_argument("--config", help="JSON file with default values for any flag")
    p.add_argument("--params", help="torus-knot integers n,m,l,s (default 1,1,1,1)")
    p.add_argument("--a", type=float, help="amplitude constant a")
    p.add_argument("--L0", type=float, help="length scale L0")
    p.add_argument("--threads", type=int, help="FFT worker cap")
    if grid:
        p.add_argument("--n", type=int, help="grid points per axis")
        p.add_argument("--extent", type=float, help="half-width of the box")


def build_parser():
    parser = argparse.ArgumentParser(prog="emknot", description="Torus-knot vacuum electromagnetic fields.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fields", help="sample closed-form E and B on a grid")
    _common(p)
    p.add_argument("--time", type=float, action="append", help="time T (repeatable)")
    p.add_argument("--format", choices=("vtk", "csv"))
    p.add_argument("--out", help="output file; a _T<t> suffix is added for several times")

    p = sub.add_parser("propagate", help="spectral propagation of knot or file initial data")
    _common(p)
    p.add_argument("--input", help="initial-data grid file (.vtk or .csv)")
    p.add_argument("--time", type=float, action="append", help="time T (repeatable)")
    p.add_argument("--project", action="store_const", const=True, help="project input onto transverse fields")
    p.add_argument("--check-closed-form", action="store_const", const=True, help="compare with the closed form")
    p.add_argument("--tol", type=float, help="closed-form relative L2 tolerance (default 0.01)")
    p.add_argument("--format", choices=("vtk", "csv"))
    p.add_argument("--out", help="output grid file")
    p.add_argument("--report", help="JSON report path ('-' for stdout, the default)")

    p = sub.add_parser("helicity", help="helicities and photon numbers")
    _common(p)
    p.add_argument("--time", type=float, action="append", help="time T for the real-space integrals")
    p.add_argument("--out", help="JSON report path ('-' for stdout, the default)")

    p = sub.add_parser("lines", help="trace field lines and compute linking numbers")
    _common(p, grid=False)
    p.add_argument("--field", choices=("B", "E"))
    p.add_argument("--time", type=float, help="time T")
    p.add_argument("--seed", type=_float_triple, action="append", help="seed point x,y,z (repeatable; write --seed=-1,0,0 for a leading minus)")
    p.add_argument("--step", type=float, help="RK4 arc-length step")
    p.add_argument("--max-steps", type=int)
    p.add_argument("--closure-tol", type=float)
    p.add_argument("--out", help="output directory (default: current)")

    p = sub.add_parser("verify", help="run the verification suites")
    p.add_argument("--config", help="JSON file with default values for any flag")
    p.add_argument("--threads", type=int, help="FFT worker cap")
    p.add_argument("--suite", choices=verify.SUITES + ("all",))
    p.add_argument("--quick", action="store_const", const=True, help="n=64, extent=8, tolerances x4")
    p.add_argument("--out", help="JSON results path ('-' for stdout)")
    return parser


DEFAULTS = {
    "params": "1,1,1,1",
    "a": 1.0,
    "L0": 1.0,
    "threads": None,
    "n": 64,
    "extent": 8.0,
    "time": None,
    "format": None,
    "out": None,
    "input": None,
    "project": False,
    "check_closed_form": False,
    "tol": 0.01,
    "report": "-",
    "field": "B",
    "seed": None,
    "step": 0.01,
    "max_steps": 40000,
    "closure_tol": 1e-3,
    "suite": "all",
    "quick": False,
}


def merge_config(args):
    """Fold ``--config`` values under the explicit flags; returns a plain dict."""
    flags = {k: v for k, v in vars(args).items() if k not in ("command", "config")}
    merged = {}
    if args.config:
        try:
            loaded = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {args.config}: {exc}") from exc
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        unknown = sorted(set(loaded) - set(flags))
        if unknown:
            raise ConfigError(f"unknown config keys for '{args.command}': {', '.join(unknown)}")
        merged.update(loaded)
    merged.update({k: v for k, v in flags.items() if v is not None})
    out = {k: merged.get(k, DEFAULTS[k]) for k in flags}
    if out.get("suite") not in (None,) + verify.SUITES + ("all",):
        raise ConfigError(f"unknown suite {out['suite']!r}")
    return out


def knot_params(cfg):
    given = cfg["params"]
    try:
        if isinstance(given, dict):
            return KnotParams(**{**{"a": cfg["a"], "L0": cfg["L0"]}, **given})
        if isinstance(given, (list, tuple)):
            return KnotParams(*(int(v) for v in given), a=cfg["a"], L0=cfg["L0"])
        return KnotParams.parse(str(given), a=cfg["a"], L0=cfg["L0"])
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad params: {exc}") from exc


def grid_spec(cfg):
    try:
        return spectral.GridSpec(int(cfg["n"]), float(cfg["extent"]))
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"bad grid: {exc}") from exc


def _times(cfg, default=(0.0,)):
    t = cfg.get("time")
    if t is None:
        return list(default)
    return [float(v) for v in (t if isinstance(t, (list, tuple)) else [t])]


def _suffixed(path, t, many):
    if not many:
        return Path(path)
    path = Path(path)
    return path.with_name(f"{path.stem}_T{t:g}{path.suffix}")


def _fmt(cfg, path):
    if cfg.get("format"):
        return cfg["format"]
    return "csv" if path and str(path).lower().endswith(".csv") else "vtk"


def _header(params, T, extra=None):
    head = {"T": T, "params": list(params.integers), "a": params.a, "L0": params.L0, "units": "c=mu0=hbar=1"}
    head.update(extra or {})
    return head


# ---------------------------------------------------------------- commands


def cmd_fields(cfg):
    params, grid = knot_params(cfg), grid_spec(cfg)
    times = _times(cfg)
    fmt = _fmt(cfg, cfg["out"])
    base = cfg["out"] or f"fields.{fmt}"
    X, Y, Z = grid.mesh()
    for T in times:
        # T = 0 uses the initial-data closed form, same as the propagator's input
        E, B = eval_initial(X, Y, Z, params) if T == 0 else eval_eb(X, Y, Z, T, params)
        path = _suffixed(base, T, len(times) > 1)
        io.write_grid(path, spectral.RealVectorFieldGrid(grid, E), spectral.RealVectorFieldGrid(grid, B), _header(params, T), fmt)
        print(f"wrote {path}", file=sys.stderr)
    return EXIT_OK


def cmd_propagate(cfg):
    times = _times(cfg, default=(1.0,))
    if cfg["input"]:
        try:
            E0, B0, head = io.read_grid(cfg["input"])
        except (OSError, ValueError, KeyError) as exc:
            raise ConfigError(f"cannot read {cfg['input']}: {exc}") from exc
        params = knot_params({
            **cfg,
            "params": head.get("params", cfg["params"]),
            "a": head.get("a", cfg["a"]),
            "L0": head.get("L0", cfg["L0"]),
        })
        state = spectral.CauchyState.from_grids(E0, B0, project=bool(cfg["project"]))
    else:
        params = knot_params(cfg)
        state = spectral.knot_state(grid_spec(cfg), params)
    grid = state.grid
    report = {"grid": grid.to_dict(), "params": params.to_dict(), "projected": bool(cfg["project"]) or not cfg["input"], "results": []}
    fmt = _fmt(cfg, cfg["out"])
    mask = grid.inner_mask()
    X, Y, Z = grid.mesh()
    status = EXIT_OK
    for T in times:
        E, B = spectral.propagate(state, T)
        entry = {"T": T, "energy": spectral.field_energy(E, B)}
        if cfg["out"]:
            path = _suffixed(cfg["out"], T, len(times) > 1)
            io.write_grid(path, E, B, _header(params, T), fmt)
            entry["file"] = str(path)
        if cfg["check_closed_form"]:
            Ec, Bc = eval_eb(X[mask], Y[mask], Z[mask], T, params)
            err = spectral.relative_l2_error(E.samples[mask], B.samples[mask], Ec, Bc)
            entry.update(relative_l2_error_inner=err, tolerance=cfg["tol"], passed=bool(err < cfg["tol"]))
            if not entry["passed"]:
                status = EXIT_CHECK
        report["results"].append(entry)
    io.write_json(cfg["report"], report)
    return status


def cmd_helicity(cfg):
    params, grid = knot_params(cfg), grid_spec(cfg)
    state = spectral.knot_state(grid, params)
    tolerances = {"quad_epsabs": 1e-12, "n_theta": 8, "n_phi": 16, "k_max": 40.0}
    rep = helicity.helicity_report(params, state, _times(cfg), tolerances=tolerances)
    io.write_json(cfg["out"] or "-", rep.to_dict())
    return EXIT_OK


def cmd_lines(cfg):
    params = knot_params(cfg)
    seeds = cfg["seed"] or fieldlines.default_seeds()
    try:
        tc = fieldlines.TraceConfig(step=float(cfg["step"]), max_steps=int(cfg["max_steps"]), closure_tol=float(cfg["closure_tol"]))
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    T = float(cfg["time"] if cfg["time"] is not None else 0.0)
    M = fieldlines.linking_matrix(params, cfg["field"], T, seeds, tc)
    outdir = Path(cfg["out"] or ".")
    outdir.mkdir(parents=True, exist_ok=True)
    for i, c in enumerate(M.curves):
        if c is not None:
            io.write_curve_csv(outdir / f"line_{cfg['field']}_{i}.csv", c, {"seed": list(map(float, seeds[i])), "field": cfg["field"], "T": T})
    io.write_curves_vtk(outdir / f"lines_{cfg['field']}.vtk", M.curves)
    doc = {"params": params.to_dict(), "field": cfg["field"], "T": T, "seeds": [list(map(float, s)) for s in seeds]}
    doc.update(M.to_dict())
    io.write_json(outdir / f"linking_{cfg['field']}.json", doc)
    io.write_json("-", doc)
    n = len(seeds)
    all_failed = all(np.isnan(M.values[i, j]) for i in range(n) for j in range(i + 1, n))
    return EXIT_CHECK if all_failed else EXIT_OK


def cmd_verify(cfg):
    checks = verify.run(cfg["suite"], quick=bool(cfg["quick"]))
    for c in checks:
        print(c.line())
    failed = [c for c in checks if not c.passed]
    print(f"{len(checks) - len(failed)}/{len(checks)} checks passed")
    if cfg["out"]:
        io.write_json(cfg["out"], {"suite": cfg["suite"], "quick": bool(cfg["quick"]), "passed": not failed, "checks": [c.to_dict() for c in checks]})
    if failed:
        print("failing: " + ", ".join(f"{c.suite}/{c.name}" for c in failed), file=sys.stderr)
        return EXIT_CHECK
    return EXIT_OK


COMMANDS = {
    "fields": cmd_fields,
    "propagate": cmd_propagate,
    "helicity": cmd_helicity,
    "lines": cmd_lines,
    "verify": cmd_verify,
}


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        cfg = merge_config(args)
        if cfg.get("threads") is not None:
            if cfg["threads"] < 1:
                raise ConfigError("--threads must be at least 1")
            with scipy.fft.set_workers(cfg["threads"]):
                return COMMANDS[args.command](cfg)
        return COMMANDS[args.command](cfg)
    except ConfigError as exc:
        print(f"emknot {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except EmknotError as exc:
        print(f"emknot {args.command}: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"emknot {args.command}: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
