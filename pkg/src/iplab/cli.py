"""Command line scenario runner.

    iplab solve      --config FILE [--out DIR]   exact solution only
    iplab integrate  --config FILE [--out DIR]   split-step integration only
    iplab run        --config FILE [--out DIR]   both, plus diagnostics
    iplab compare    --config FILE               centroid/variance tables

Exit status is 0 when every checked tolerance holds, 1 when one fails and
2 for configuration errors.
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
from dataclasses import replace
from pathlib import Path

import numpy as np

from . import diagnostics as dg
from . import grid_integrator as gi
from .classical_oracle import classical_trajectory
from .config import ScenarioConfig, load_config
from .errors import IplabError, ConfigurationError
from .exact_solver import solve

log = logging.getLogger("iplab")

FIELD_COLUMNS = ("t", "x", "re_psi", "im_psi", "abs2", "re_phi", "im_phi", "abs2_phi")
DIAG_COLUMNS = ("t", "norm", "centroid_psi", "variance_psi", "centroid_phi", "variance_phi",
                "support_mass_outside", "fidelity_vs_exact", "predicted_centroid", "classical_x")

NORM_TOL = 1e-9
FIDELITY_TOL = 1e-6
VARIANCE_TOL = 1e-12
CLASSICAL_TOL = 1e-6
CENTROID_TOL = 1e-3

NAN = float("nan")


def fmt(v) -> str:
    return "nan" if v != v else f"{v:.17g}"


def write_csv(path: Path, columns, table: dict):
    """Write equal-length columns ``table[c]`` in the given order."""
    cols = [np.asarray(table[c], dtype=float) for c in columns]
    with open(path, "w", newline="\n") as fh:
        fh.write(",".join(columns) + "\n")
        for values in zip(*cols):
            fh.write(",".join(map(fmt, values)) + "\n")


def read_csv(path: Path) -> dict:
    """Column name -> float array (used to recompute summaries)."""
    data = np.genfromtxt(path, delimiter=",", names=True)
    return {name: np.atleast_1d(data[name]) for name in data.dtype.names}


def _grid(config: ScenarioConfig, scenario, sol):
    if config.grid is None:
        return gi.auto_grid(scenario, config.t_final, config.n_points, solution=sol)
    return gi.make_grid(*config.grid)


def _snapshot_times(config):
    n = int(round(config.t_final / config.dt))
    if n < 1 or abs(n * config.dt - config.t_final) > 1e-9 * max(1.0, config.t_final):
        n = int(math.ceil(config.t_final / config.dt))
    h = config.t_final / n
    steps = list(range(0, n + 1, config.snapshot_every))
    if steps[-1] != n:
        steps.append(n)
    return h, steps


def compute(config: ScenarioConfig, mode: str):
    """Evaluate the requested routes; returns (field_table, diag_table).

    ``mode`` is ``"solve"``, ``"integrate"`` or ``"run"``.
    """
    scenario = config.build_scenario()
    sol = solve(scenario.effective, scenario.bump)
    grid = _grid(config, scenario, sol)
    h, steps = _snapshot_times(config)
    times = [i * h if i < steps[-1] else config.t_final for i in steps]

    fields = None
    if mode in ("integrate", "run"):
        fields = gi.evolve(scenario, grid, config.t_final, config.dt, config.snapshot_every)
        if len(fields) != len(times):
            raise RuntimeError("snapshot bookkeeping mismatch")

    classical = None
    if mode in ("solve", "run"):
        traj = classical_trajectory(scenario, scenario.bump.center, 0.0, config.t_final, h)
        classical = traj.x

    blocks, diag_rows = [], []
    n = grid.n_points
    for idx, (i, t) in enumerate(zip(steps, times)):
        psi = exact_phi = phi = None
        if mode in ("solve", "run"):
            psi = gi.sample_exact(grid, sol, t)
            exact_phi = gi.free_evolve(psi, scenario.h0_kind, t, config.dt)
        if fields is not None:
            phi = fields[idx]
        shown = phi if phi is not None else exact_phi

        nan = np.full(n, NAN)
        pv = psi.values if psi is not None else None
        blocks.append({
            "t": np.full(n, t), "x": grid.x,
            "re_psi": pv.real if pv is not None else nan,
            "im_psi": pv.imag if pv is not None else nan,
            "abs2": np.abs(pv) ** 2 if pv is not None else nan,
            "re_phi": shown.values.real, "im_phi": shown.values.imag,
            "abs2_phi": np.abs(shown.values) ** 2,
        })

        d = dict.fromkeys(DIAG_COLUMNS, NAN)
        d["t"] = t
        d["norm"] = dg.norm(shown)
        d["centroid_phi"] = dg.centroid(shown)
        d["variance_phi"] = dg.variance(shown)
        if psi is not None:
            d["centroid_psi"], d["variance_psi"] = dg.exact_density_moments(sol, t)
            d["support_mass_outside"] = dg.support_mass_outside(shown, sol.support(t))
            d["predicted_centroid"] = dg.predicted_centroid(scenario, t, sol)
            d["classical_x"] = float(classical[i])
        if phi is not None and exact_phi is not None:
            d["fidelity_vs_exact"] = dg.fidelity(phi, exact_phi)
        diag_rows.append(d)
    field_table = {c: np.concatenate([b[c] for b in blocks]) for c in FIELD_COLUMNS}
    diag_table = {c: np.array([r[c] for r in diag_rows]) for c in DIAG_COLUMNS}
    return field_table, diag_table


def summarize(diag: dict, mode: str) -> list:
    """Tolerance checks as (passed, line) pairs, computed from CSV columns."""
    checks = []

    def add(ok, text):
        checks.append((bool(ok), ("PASS " if ok else "FAIL ") + text))

    if mode in ("integrate", "run"):
        drift = float(np.max(np.abs(diag["norm"] - 1.0)))
        add(drift <= NORM_TOL, f"norm_drift max|norm-1| = {drift:.3e} <= {NORM_TOL:.0e}")
    if mode == "run":
        fmin = float(np.min(diag["fidelity_vs_exact"]))
        add(fmin >= 1 - FIDELITY_TOL,
            f"fidelity min = {fmin:.17g} >= 1 - {FIDELITY_TOL:.0e} (loss {1 - fmin:.3e})")
    if mode in ("solve", "run"):
        spread = float(np.ptp(diag["variance_psi"]))
        add(spread <= VARIANCE_TOL, f"variance_psi spread = {spread:.3e} <= {VARIANCE_TOL:.0e}")
        dc = float(np.max(np.abs(diag["predicted_centroid"] - diag["classical_x"])))
        add(dc <= CLASSICAL_TOL,
            f"centroid predicted-vs-classical max = {dc:.3e} <= {CLASSICAL_TOL:.0e}")
    if mode == "run":
        ds = float(np.max(np.abs(diag["predicted_centroid"] - diag["centroid_phi"])))
        add(ds <= CENTROID_TOL,
            f"centroid predicted-vs-splitstep max = {ds:.3e} <= {CENTROID_TOL:.0e}")
    return checks


def run_scenario(config: ScenarioConfig, mode: str = "run") -> int:
    out = Path(config.output_dir)
    out.mkdir(parents=True, exist_ok=True)
    field_table, diag_table = compute(config, mode)
    write_csv(out / "field.csv", FIELD_COLUMNS, field_table)
    write_csv(out / "diagnostics.csv", DIAG_COLUMNS, diag_table)
    checks = summarize(read_csv(out / "diagnostics.csv"), mode)
    lines = [f"scenario {config.scenario} mode {mode} lambda {fmt(config.strength)} "
             f"theta {config.theta.kind} t_final {fmt(config.t_final)} dt {fmt(config.dt)}",
             "normalization L2 (unit integral of |k|^2)"]
    lines += [line for _, line in checks]
    (out / "summary.txt").write_text("\n".join(lines) + "\n")
    failed = [line for ok, line in checks if not ok]
    for line in failed:
        print(line, file=sys.stderr)
    return 1 if failed else 0


def compare(config: ScenarioConfig, stream=None) -> int:
    """Print the three-way centroid table and the variance table."""
    stream = stream or sys.stdout
    _, table = compute(config, "run")
    rows = [dict(zip(table, vals)) for vals in zip(*table.values())]
    print(f"# {config.scenario}: centroids", file=stream)
    print(f"{'t':>10} {'predicted':>14} {'split-step':>14} {'classical':>14}", file=stream)
    for r in rows:
        print(f"{r['t']:10.4f} {r['predicted_centroid']:14.8f} {r['centroid_phi']:14.8f} "
              f"{r['classical_x']:14.8f}", file=stream)
    print(f"# {config.scenario}: variances", file=stream)
    print(f"{'t':>10} {'interaction':>18} {'schroedinger':>18}", file=stream)
    for r in rows:
        print(f"{r['t']:10.4f} {r['variance_psi']:18.12f} {r['variance_phi']:18.12f}", file=stream)
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="iplab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)
    for name in ("solve", "integrate", "run", "compare"):
        sp = sub.add_parser(name)
        sp.add_argument("--config", required=True, help="key=value scenario file")
        if name != "compare":
            sp.add_argument("--out", help="output directory (overrides output_dir)")
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING)
    try:
        config = load_config(args.config)
        if getattr(args, "out", None):
            config = replace(config, output_dir=Path(args.out))
        if args.command == "compare":
            return compare(config)
        return run_scenario(config, args.command)
    except ConfigurationError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IplabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
