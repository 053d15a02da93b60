"""Command-line runner: named scenarios and ad-hoc energy evaluations.

Exit status: 0 when every claim matched its expected verdict, 2 when some
claim did not, 1 on usage or configuration errors.
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
from dataclasses import dataclass, field

import numpy as np

from . import dae, energies, falsify
from ._backend import BACKEND
from .model import Field, Grid, LoadSpec, MaterialParams, PhysicsError, compute_beta, compute_sigma

SCHEMA = "cdl-1"
EXIT_OK, EXIT_CONFIG, EXIT_MISMATCH = 0, 1, 2
CSV_COLUMNS = ("sigma", "beta", "zeta", "zeta1", "zeta2", "zeta3", "v", "v1", "v2", "v3")


class ConfigError(Exception):
    pass


@dataclass
class RunConfig:
    scenario: str
    params: MaterialParams | None = None
    load: LoadSpec | None = None
    n_cells: int | None = None
    seed: int | None = None
    eps: list | None = None
    gamma: float | None = None
    tol_dual: float | None = None
    tol_crit: float | None = None
    out: str = "."
    custom: dict = field(default_factory=dict)

    def scenario_cfg(self) -> dict:
        return {
            "params": self.params,
            "load": self.load,
            "n_cells": self.n_cells,
            "seed": self.seed,
            "eps": self.eps,
            "gamma": self.gamma,
            "tol_dual": self.tol_dual,
            "tol_crit": self.tol_crit,
        }


def _read_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror}") from None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"malformed JSON in {path} at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict):
        raise ConfigError(f"config {path} must hold a JSON object")
    return data


def _number(name, value, kind=float):
    if value is None:
        return None
    try:
        out = kind(value)
    except (TypeError, ValueError):
        raise ConfigError(f"{name} must be a number, got {value!r}") from None
    if kind is float and not math.isfinite(out):
        raise ConfigError(f"{name} must be finite, got {value!r}")
    return out


def build_config(args) -> RunConfig:
    data = _read_config(args.config) if args.config else {}
    scenario = "custom" if args.custom else (args.scenario or data.get("scenario"))
    if scenario is None:
        raise ConfigError("no scenario given; use --scenario NAME, --custom or a config with \"scenario\"")
    if scenario not in falsify.SCENARIOS and scenario not in ("custom", "all"):
        raise ConfigError(f"unknown scenario {scenario!r}; known: {', '.join(falsify.SCENARIOS)}")

    p = dict(data.get("params") or {})
    for key in ("mu", "nu", "alpha"):
        if key in data:
            p[key] = data[key]
        if getattr(args, key) is not None:
            p[key] = getattr(args, key)
    params = None
    if p:
        base = falsify.EXAMPLE_PARAMS.to_dict()
        base.update(p)
        try:
            params = MaterialParams(*(_number(k, base[k]) for k in ("mu", "nu", "alpha")))
        except PhysicsError as exc:
            raise ConfigError(f"invalid material parameters: {exc}") from None

    load = None
    try:
        if data.get("load") is not None:
            load = LoadSpec.from_dict(data["load"])
        if args.beta is not None or args.sigma1 is not None:
            pp = params or falsify.EXAMPLE_PARAMS
            s1 = args.sigma1 if args.sigma1 is not None else pp.mu * pp.alpha + args.beta
            load = LoadSpec.poly(load.coeffs if load is not None and load.kind == "poly" else [0.0], s1)
    except (KeyError, TypeError, ValueError) as exc:
        raise ConfigError(f"invalid load: {exc}") from None

    def pick(name, kind=float):
        v = getattr(args, name)
        return _number(name, v if v is not None else data.get(name), kind)

    eps = args.eps if args.eps is not None else data.get("eps")
    if eps is not None:
        eps = [_number("eps", e) for e in (eps if isinstance(eps, list) else [eps])]
        if any(e <= 0 for e in eps):
            raise ConfigError("eps values must be positive")
    n_cells = pick("n_cells", int)
    if n_cells is not None and n_cells < 1:
        raise ConfigError("n_cells must be >= 1")

    custom = dict(data.get("custom") or {})
    for key in ("evaluate", "zeta_const", "v_const", "zeta_branch"):
        if key in data:
            custom[key] = data[key]
        if getattr(args, key) is not None:
            custom[key] = getattr(args, key)

    return RunConfig(
        scenario=scenario,
        params=params,
        load=load,
        n_cells=n_cells,
        seed=pick("seed", int),
        eps=eps,
        gamma=pick("gamma"),
        tol_dual=pick("tol_dual"),
        tol_crit=pick("tol_crit"),
        out=args.out or data.get("out") or ".",
        custom=custom,
    )


# --------------------------------------------------------------------------

def evaluate_custom(cfg: RunConfig) -> tuple[dict, Grid, dict]:
    params = cfg.params or falsify.EXAMPLE_PARAMS
    load = cfg.load or LoadSpec.poly([0.0], params.mu * params.alpha)
    grid = Grid(cfg.n_cells or 1000)
    sigma = compute_sigma(load, grid)
    beta = compute_beta(sigma, params)
    what = cfg.custom.get("evaluate", "report")
    if what not in ("primal", "xi", "dual", "report"):
        raise ConfigError(f"--evaluate must be one of primal, xi, dual, report; got {what!r}")
    tol_crit = cfg.tol_crit or energies.DEFAULT_TOL_CRIT
    fields = {"sigma": sigma.values, "beta": beta.values}

    zeta = v = None
    zc, vc, zb = cfg.custom.get("zeta_const"), cfg.custom.get("v_const"), cfg.custom.get("zeta_branch")
    if zc is not None and zb is not None:
        raise ConfigError("give at most one of --zeta-const and --zeta-branch")
    try:
        if zc is not None:
            zeta = Field.constant(grid, _number("zeta_const", zc), "zeta")
            fields["zeta"] = zeta.values
        elif zb is not None:
            branch = dae.BranchId.parse(zb)
            zeta = dae.branch_field(beta, branch, params)
            fields[f"zeta{int(branch)}"] = zeta.values
        if vc is not None:
            v = Field.constant(grid, _number("v_const", vc), "v")
        elif zeta is not None and what != "dual":
            v = energies.v_from_zeta(zeta, sigma, beta, params)
    except (KeyError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
    if v is not None:
        fields["v"] = v.values

    need_v = what in ("primal", "xi", "report")
    need_z = what in ("xi", "dual", "report")
    if need_v and v is None:
        raise ConfigError(f"--evaluate {what} needs --v-const or a zeta to derive v from")
    if need_z and zeta is None:
        raise ConfigError(f"--evaluate {what} needs --zeta-const or --zeta-branch")

    out = {
        "schema": SCHEMA,
        "kind": "evaluation",
        "evaluate": what,
        "parameters": {"params": params.to_dict(), "load": load.to_dict(), "n_cells": grid.n_cells,
                       "zeta_const": zc, "v_const": vc, "zeta_branch": zb},
        "claims": [],
        "all_matched": True,
    }
    if what == "primal":
        out["value"] = energies.primal_energy(v, sigma, params)
    elif what == "xi":
        out["value"] = energies.xi_energy(v, zeta, sigma, params)
    elif what == "dual":
        out["value"] = energies.dual_energy(zeta, sigma, beta, params)
    else:
        out["energy_report"] = energies.energy_report(v, zeta, sigma, beta, params, tol_crit).to_dict()
    return falsify.jsonable(out), grid, fields


def write_fields_csv(path: str, grid: Grid, fields: dict) -> None:
    cols = [c for c in CSV_COLUMNS if c in fields]
    data = [np.asarray(grid.midpoints)] + [np.asarray(fields[c]) for c in cols]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\r\n")
        w.writerow(["x", *cols])
        for row in zip(*data):
            w.writerow([repr(float(v)) for v in row])


def write_report(path: str, report: dict) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, sort_keys=True, indent=2, allow_nan=False)
        fh.write("\n")


def execute(cfg: RunConfig) -> tuple[dict, int]:
    """Run the configured scenario, write its artifacts and return (report, exit status)."""
    grid, fields = None, {}
    try:
        if cfg.scenario == "custom":
            report, grid, fields = evaluate_custom(cfg)
        elif cfg.scenario == "all":
            reps = [falsify.run_scenario(n, cfg.scenario_cfg()) for n in sorted(falsify.SCENARIOS)]
            report = falsify.jsonable({
                "schema": SCHEMA,
                "kind": "suite",
                "scenarios": [r.to_dict() for r in reps],
                "all_matched": all(r.all_matched for r in reps),
            })
        else:
            rep = falsify.run_scenario(cfg.scenario, cfg.scenario_cfg())
            report = rep.to_dict()
            grid, fields = rep.grid, rep.fields
    except (PhysicsError, dae.NoRealRootError, energies.IllPosedError) as exc:
        raise ConfigError(str(exc)) from None
    except ValueError as exc:
        raise ConfigError(f"invalid scenario configuration: {exc}") from None
    try:
        os.makedirs(cfg.out, exist_ok=True)
        write_report(os.path.join(cfg.out, "report.json"), report)
        if grid is not None and fields:
            write_fields_csv(os.path.join(cfg.out, "fields.csv"), grid, fields)
    except OSError as exc:
        raise ConfigError(f"cannot write to {cfg.out}: {exc.strerror}") from None
    return report, EXIT_OK if report["all_matched"] else EXIT_MISMATCH


# --------------------------------------------------------------------------

def list_scenarios(as_json: bool = False) -> str:
    if as_json:
        rows = [{"name": s.name, "description": s.description, "anchor": s.anchor}
                for s in falsify.SCENARIOS.values()]
        return json.dumps({"schema": SCHEMA, "kind": "registry", "scenarios": rows}, indent=2)
    width = max(len(n) for n in falsify.SCENARIOS)
    return "\n".join(f"{s.name:<{width}}  {s.description}  [{s.anchor}]" for s in falsify.SCENARIOS.values())


def _eps_list(text):
    try:
        return [float(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"eps must be a comma-separated list of numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="phasedual", description="Dual-branch scenarios for the 1D soft-device phase-transition bar")
    ap.add_argument("--version", action="version", version=f"%(prog)s (kernels: {BACKEND})")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    ls = sub.add_parser("list", help="list the scenario registry")
    ls.add_argument("--json", action="store_true", help="machine-readable output")

    run = sub.add_parser("run", help="run a scenario or a custom evaluation")
    run.add_argument("--scenario", help="scenario name, or 'all'")
    run.add_argument("--config", help="JSON run configuration")
    run.add_argument("--custom", action="store_true", help="evaluate energies for given fields")
    run.add_argument("--n-cells", dest="n_cells", type=int)
    run.add_argument("--seed", type=int)
    run.add_argument("--eps", type=_eps_list, help="comma-separated perturbation sizes")
    run.add_argument("--gamma", type=float)
    run.add_argument("--tol-dual", dest="tol_dual", type=float)
    run.add_argument("--tol-crit", dest="tol_crit", type=float)
    run.add_argument("--out", help="output directory (default: current)")
    run.add_argument("--json", action="store_true", help="also print report.json to stdout")
    run.add_argument("--mu", type=float)
    run.add_argument("--nu", type=float)
    run.add_argument("--alpha", type=float)
    run.add_argument("--sigma1", type=float, help="dead load, with zero body force")
    run.add_argument("--beta", type=float, help="constant beta (sets sigma1 = mu alpha + beta)")
    run.add_argument("--evaluate", choices=("primal", "xi", "dual", "report"))
    run.add_argument("--zeta-const", dest="zeta_const", type=float)
    run.add_argument("--v-const", dest="v_const", type=float)
    run.add_argument("--zeta-branch", dest="zeta_branch", choices=("B1", "B2", "B3", "1", "2", "3"))
    return ap


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    if args.command == "list":
        print(list_scenarios(args.json))
        return EXIT_OK
    try:
        cfg = build_config(args)
        report, status = execute(cfg)
    except ConfigError as exc:
        print(f"phasedual: error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    if args.json:
        print(json.dumps(report, sort_keys=True, indent=2))
    else:
        _summary(report)
    return status


def _summary(report: dict) -> None:
    reports = report["scenarios"] if report.get("kind") == "suite" else [report]
    for rep in reports:
        if rep.get("kind") == "evaluation":
            val = rep.get("value", rep.get("energy_report"))
            print(f"{rep['evaluate']}: {val}")
            continue
        for c in rep["claims"]:
            mark = "ok " if c["matched"] else "MISMATCH"
            print(f"{mark:8s} {rep['name']}: {c['id']} expected={c['expected']} observed={c['observed']}")


if __name__ == "__main__":
    sys.exit(main())
