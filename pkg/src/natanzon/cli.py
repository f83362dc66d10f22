"""Command-line front end: ``natanzon <command> [options]``.

Exit status is 0 on success, 1 when a verification fails and 2 on a
configuration or domain error; errors are written to stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import algebra, satellites, scattering, verify
from .coordmap import build_map, potential_in_r
from .errors import ConfigError, NatanzonError
from .params import NatanzonParams, PTParams, pt_to_natanzon, validate_params
from .spectrum import BoundState, solve_spectrum
from .wavefun import eigenfunction

ROUNDTRIP_TOL = 1e-12


@dataclass
class RunConfig:
    command: str
    params: NatanzonParams
    pt: PTParams | None
    out: str | None
    fmt: str
    r_max: float
    n_points: int
    extra: dict


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _clean(obj):
    """Recursively convert to JSON-ready values with floats at 15 significant digits."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_clean(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        if not math.isfinite(x):
            return None if math.isnan(x) else ("inf" if x > 0 else "-inf")
        x = float(f"{x:.15g}")
        return 0.0 if x == 0.0 else x
    if isinstance(obj, complex):
        return {"re": _clean(obj.real), "im": _clean(obj.imag)}
    return obj


def dumps(obj) -> str:
    return json.dumps(_clean(obj), indent=2) + "\n"


def _csv_text(header, rows) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([f"{v:.15g}" if isinstance(v, (float, np.floating)) else v for v in row])
    return buf.getvalue()


def _parse_pt(text: str) -> PTParams:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) not in (2, 3) or (len(parts) == 3 and parts[2] != "shifted"):
        raise ConfigError("--pt expects A,B or A,B,shifted")
    try:
        A, B = float(parts[0]), float(parts[1])
    except ValueError:
        raise ConfigError(f"--pt values must be numbers: {text!r}") from None
    return PTParams(A, B, shifted=len(parts) == 3)


def _parse_grid(text: str):
    try:
        a, b, n = text.split(":")
        a, b, n = float(a), float(b), int(n)
    except ValueError:
        raise ConfigError(f"--lambda-grid expects a:b:n, got {text!r}") from None
    if n < 1:
        raise ConfigError("--lambda-grid needs n >= 1")
    return np.linspace(a, b, n)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="natanzon", description="Natanzon potentials: spectra, algebra, scattering, satellites.")
    common = _Parser(add_help=False)
    src = common.add_mutually_exclusive_group()
    src.add_argument("--pt", help="Poschl-Teller pair A,B or A,B,shifted")
    src.add_argument("--params", help="JSON file with f, h0, h1, a, c0, c1")
    common.add_argument("--out", help="write output here instead of stdout")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--r-max", type=float, default=20.0)
    common.add_argument("--n-points", type=int, default=None, help="grid size (default NATANZON_GRID_N or 4000)")
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("spectrum", parents=[common], help="bound-state list")
    sub.add_parser("potential", parents=[common], help="r, V table")
    p = sub.add_parser("wavefunction", parents=[common], help="r, Phi table")
    p.add_argument("--nu", type=int, required=True)
    p.add_argument("--states", help="spectrum JSON to reuse; re-solved and compared")
    p = sub.add_parser("scatter", parents=[common], help="reflection table or pole report")
    p.add_argument("--m", type=float, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--lambda-grid")
    g.add_argument("--poles", action="store_true")
    p = sub.add_parser("satellite", parents=[common], help="laddered state, fit and energy arbitration")
    p.add_argument("--nu", type=int, default=0)
    p = sub.add_parser("verify", parents=[common], help="run verification suites")
    p.add_argument("--suite", choices=tuple(verify.SUITES), default="all")
    return parser


def _config(args) -> RunConfig:
    if args.command is None:
        raise ConfigError("a command is required")
    n_env = os.environ.get("NATANZON_GRID_N")
    n = args.n_points
    if n is None:
        try:
            n = int(n_env) if n_env else 4000
        except ValueError:
            raise ConfigError(f"NATANZON_GRID_N must be an integer, got {n_env!r}") from None
    pt = None
    if args.pt is not None:
        pt = _parse_pt(args.pt)
        params = pt_to_natanzon(pt)
    elif args.params is not None:
        params = NatanzonParams.from_json(args.params)
    elif args.command == "verify":
        params = None
    else:
        raise ConfigError("one of --pt or --params is required")
    extra = {k: v for k, v in vars(args).items() if k not in ("pt", "params", "out", "format", "r_max", "n_points", "command")}
    return RunConfig(args.command, params, pt, args.out, args.format, args.r_max, n, extra)


def _emit(cfg: RunConfig, json_obj, csv_header=None, csv_rows=None):
    if cfg.fmt == "csv":
        if csv_header is None:
            raise ConfigError(f"command {cfg.command} has no CSV form")
        text = _csv_text(csv_header, csv_rows)
    else:
        text = dumps(json_obj)
    if cfg.out:
        with open(cfg.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _states_payload(cfg, states):
    return {"params": cfg.params.to_dict(), "states": [s.to_dict() for s in states]}


def cmd_spectrum(cfg: RunConfig) -> int:
    states = solve_spectrum(cfg.params)
    keys = ("nu", "E", "alpha", "beta", "delta", "p", "q", "m", "threshold_flag")
    rows = [[s.to_dict()[k] for k in keys] for s in states]
    _emit(cfg, _states_payload(cfg, states), keys, rows)
    return 0


def cmd_potential(cfg: RunConfig) -> int:
    cmap = build_map(cfg.params, cfg.r_max, cfg.n_points)
    r = cmap.r_grid[1:] if cmap.z_grid[0] == 0.0 else cmap.r_grid
    V = potential_in_r(cfg.params, cmap, r)
    _emit(cfg, {"params": cfg.params.to_dict(), "r": r, "V": V}, ("r", "V"), zip(r, V))
    return 0


def _load_states(path, params):
    try:
        with open(path) as fh:
            data = json.load(fh)
        stored = [BoundState.from_dict(d) for d in data["states"]]
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise ConfigError(f"cannot read states file {path}: {exc}") from None
    if "params" in data and NatanzonParams.from_dict(data["params"]) != params:
        raise ConfigError("states file was produced for different parameters")
    fresh = solve_spectrum(params)
    if len(fresh) != len(stored):
        raise ConfigError("states file does not match the spectrum of these parameters")
    for a, b in zip(stored, fresh):
        if abs(a.E - b.E) > ROUNDTRIP_TOL:
            raise ConfigError(f"state nu={a.nu}: stored E differs from re-solved E by {abs(a.E - b.E):.3g}")
    return stored


def cmd_wavefunction(cfg: RunConfig) -> int:
    nu = cfg.extra["nu"]
    states = _load_states(cfg.extra["states"], cfg.params) if cfg.extra.get("states") else solve_spectrum(cfg.params)
    match = [s for s in states if s.nu == nu]
    if not match:
        raise ConfigError(f"no state with nu={nu}; levels are 0..{len(states) - 1}")
    cmap = build_map(cfg.params, cfg.r_max, cfg.n_points)
    fn = eigenfunction(cfg.params, match[0], cmap)
    payload = {"params": cfg.params.to_dict(), "state": match[0].to_dict(), "form": fn.meta["form"],
               "residuals": fn.meta["residuals"], "K": fn.meta.get("K"), "r": fn.r_grid, "phi": fn.values}
    _emit(cfg, payload, ("r", "phi"), zip(fn.r_grid, fn.values))
    return 0


def cmd_scatter(cfg: RunConfig) -> int:
    m = cfg.extra["m"]
    c1 = cfg.params.c1
    if cfg.extra.get("poles"):
        energies = [s.E for s in solve_spectrum(cfg.params) if not s.threshold]
        rep = scattering.find_bound_poles(m, channel=scattering.ScatterChannel(lam=0.0, c1=c1), energies=energies)
        payload = {"m": m, "m0": rep["m0"], "note": rep["note"], "poles": [p.to_dict() for p in rep["poles"]],
                   "cancelled": rep["cancelled"], "spectrum": energies}
        rows = [[p.lam.real, p.lam.imag, p.E, "" if p.matched_nu is None else p.matched_nu] for p in rep["poles"]]
        _emit(cfg, payload, ("lambda_re", "lambda_im", "E", "matched_nu"), rows)
        return 0
    lams = _parse_grid(cfg.extra["lambda_grid"])
    rows = scattering.reflection_table(scattering.ScatterChannel(lam=0.0, c1=c1), m, lams)
    _emit(cfg, {"m": m, "c1": c1, "rows": rows}, ("lambda", "Re R", "Im R", "|R|"),
          [[r["lambda"], r["re"], r["im"], r["abs"]] for r in rows])
    return 0


def cmd_satellite(cfg: RunConfig) -> int:
    if cfg.pt is None:
        raise ConfigError("satellite needs --pt (general satellites are only reconstructed numerically)")
    nu = cfg.extra["nu"]
    params = pt_to_natanzon(PTParams(cfg.pt.A, cfg.pt.B, True))
    states = solve_spectrum(params)
    match = [s for s in states if s.nu == nu and not s.threshold]
    if not match:
        raise ConfigError(f"no bound state with nu={nu}")
    st = match[0]
    cmap = build_map(params, cfg.r_max, cfg.n_points)
    fn = eigenfunction(params, st, cmap)
    laddered = algebra.apply_generator("Jplus", algebra.MSectorFunction(fn, st.m), st.p, params, cmap)
    fit = satellites.reconstruct_potential(laddered.radial)
    record = satellites.shift_exponents(st, 1, (cfg.pt.A, cfg.pt.B))
    report = satellites.energy_arbitration(cfg.pt.A, cfg.pt.B, nu, fit, r_max=cfg.r_max, n=cfg.n_points)
    payload = record.to_dict()
    payload["fit"] = {k: fit[k] for k in ("A", "B", "C", "B_roots", "origin_exponent", "residual", "window")}
    payload["energy_arbitration"] = report
    payload["susy_comparison"] = satellites.susy_comparison(cfg.pt.A, cfg.pt.B)
    table = fit["table"]
    _emit(cfg, payload, ("r", "V_minus_E", "fit"), zip(table["r"], table["V_minus_E"], table["fit"]))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    if cfg.params is not None and not validate_params(cfg.params).valid:
        raise ConfigError("invalid parameters: " + "; ".join(validate_params(cfg.params).messages))
    results = verify.run_suite(cfg.extra["suite"], cfg.params)
    passed = all(r.passed for r in results)
    payload = {"suite": cfg.extra["suite"], "passed": passed, "checks": [r.to_dict() for r in results]}
    for r in payload["checks"]:
        r.pop("seconds")  # keep the report byte-identical between runs
    rows = [[r.name, "pass" if r.passed else "FAIL"] for r in results]
    _emit(cfg, payload, ("check", "status"), rows)
    return 0 if passed else 1


COMMANDS = {
    "spectrum": cmd_spectrum,
    "potential": cmd_potential,
    "wavefunction": cmd_wavefunction,
    "scatter": cmd_scatter,
    "satellite": cmd_satellite,
    "verify": cmd_verify,
}


def run(cfg: RunConfig) -> int:
    return COMMANDS[cfg.command](cfg)


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return run(_config(args))
    except NatanzonError as exc:
        sys.stderr.write(json.dumps({"error": type(exc).__name__, "message": str(exc)}) + "\n")
        return 2


if __name__ == "__main__":
    sys.exit(main())
