"""Configuration parsing and structured report persistence.

Configs are JSON with a strict nested schema: unknown keys are rejected with
their dotted path, missing keys take documented defaults.  Reports are
written as a key/value summary, a diff-able CSV of all norm curves (one row
per sample, full-precision decimal so byte-identical across identical runs),
and a gnuplot script referencing only files in the same directory.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np

from .besov import BesovParams, check_index_condition
from .experiments import ExperimentReport, NormCurve
from .grid import GridSpec, make_grid
from .solver import ModelParams, SolverConfig

__all__ = [
    "ConfigError",
    "RunConfig",
    "ReportFiles",
    "parse_config",
    "build_run_config",
    "config_hash",
    "write_report",
    "read_curves",
    "SCHEMA",
    "THEOREM_EXPERIMENTS",
]


class ConfigError(ValueError):
    """Schema violation; `path` is the dotted location of the offending key."""

    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


# section -> key -> (type, default); None defaults are resolved contextually
SCHEMA = {
    "grid": {"L": (float, 32.0 * math.pi), "N": (int, 2**15)},
    "besov": {"s": (float, 2.0), "p": (float, 2.0), "r": (float, 2.0)},
    "model": {"b": (float, 2.0)},
    "solver": {
        "dt": (float, 1e-3),
        "t_end": (float, 0.25),
        "sample_every": (int, 10),
        "dealias": (bool, True),
        "blowup_slope_threshold": (float, 1e3),
        "blowup_norm_threshold": (float, 1e6),
    },
    "experiment": {
        "name": (str, "nonuniform_basic"),
        "n_list": (list, [4, 5, 6, 7]),
        "m_list": (list, None),  # default [8, 16, L/2]
        "m": (float, None),  # default L/2
        "n": (int, 5),
        "omega": (int, 1),
        "u0_name": (str, "gaussian"),
        "seed": (int, 0),
        "T0": (float, None),  # default t_end
        "count": (int, 40),
        "sigma": (float, 2.0),
    },
    "output": {"directory": (str, "reports"), "formats": (list, ["summary", "curves", "plots"])},
}

EXPERIMENT_NAMES = (
    "nonuniform_basic",
    "nonuniform_at",
    "truncation_stability",
    "decoupling",
    "two_solution_stability",
    "transport_apriori",
)

# experiments gated by the well-posedness index condition
THEOREM_EXPERIMENTS = (
    "nonuniform_basic",
    "nonuniform_at",
    "truncation_stability",
    "decoupling",
)


@dataclass(frozen=True)
class RunConfig:
    """A validated run description with constructed component objects."""

    grid: GridSpec
    besov: BesovParams
    model: ModelParams
    solver: SolverConfig
    experiment: dict
    output: dict
    raw: dict

    @property
    def hash(self) -> str:
        return config_hash(self.raw)


@dataclass(frozen=True)
class ReportFiles:
    summary: Optional[Path]
    curves: Optional[Path]
    plots: Optional[Path]


def _coerce(path: str, value, typ):
    if typ is float:
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise ConfigError(path, f"expected a number, got {value!r}")
        return float(value)
    if typ is int:
        if isinstance(value, bool) or not isinstance(value, int):
            raise ConfigError(path, f"expected an integer, got {value!r}")
        return int(value)
    if typ is bool:
        if not isinstance(value, bool):
            raise ConfigError(path, f"expected true/false, got {value!r}")
        return value
    if typ is str:
        if not isinstance(value, str):
            raise ConfigError(path, f"expected a string, got {value!r}")
        return value
    if typ is list:
        if not isinstance(value, list):
            raise ConfigError(path, f"expected a list, got {value!r}")
        return list(value)
    raise ConfigError(path, f"unsupported schema type {typ}")


def build_run_config(data: dict) -> RunConfig:
    """Validate a raw (parsed) config dict and construct the run objects."""
    if not isinstance(data, dict):
        raise ConfigError("<root>", "config must be a mapping of sections")
    merged = {}
    for section, keys in SCHEMA.items():
        sub = data.get(section, {})
        if not isinstance(sub, dict):
            raise ConfigError(section, "section must be a mapping")
        for key in sub:
            if key not in keys:
                raise ConfigError(f"{section}.{key}", "unknown key")
        out = {}
        for key, (typ, default) in keys.items():
            if key in sub:
                out[key] = _coerce(f"{section}.{key}", sub[key], typ)
            else:
                out[key] = default
        merged[section] = out
    for section in data:
        if section not in SCHEMA:
            raise ConfigError(section, "unknown section")

    g, bsv, mdl, slv, exp = (
        merged["grid"],
        merged["besov"],
        merged["model"],
        merged["solver"],
        merged["experiment"],
    )
    try:
        grid = make_grid(g["L"], g["N"])
    except ValueError as e:
        raise ConfigError("grid", str(e)) from e
    try:
        besov = BesovParams(s=bsv["s"], p=bsv["p"], r=bsv["r"])
    except ValueError as e:
        raise ConfigError("besov", str(e)) from e
    try:
        solver = SolverConfig(
            dt=slv["dt"],
            t_end=slv["t_end"],
            sample_every=slv["sample_every"],
            dealias=slv["dealias"],
            blowup_slope_threshold=slv["blowup_slope_threshold"],
            blowup_norm_threshold=slv["blowup_norm_threshold"],
        )
    except ValueError as e:
        raise ConfigError("solver", str(e)) from e
    model = ModelParams(b=mdl["b"])

    if exp["name"] not in EXPERIMENT_NAMES:
        raise ConfigError("experiment.name", f"unknown experiment {exp['name']!r}")
    if exp["name"] in THEOREM_EXPERIMENTS and not check_index_condition(besov):
        raise ConfigError(
            "besov", f"(s,p,r)=({bsv['s']},{bsv['p']},{bsv['r']}) violates s > max(3/2, 1+1/p), r < inf"
        )
    if exp["m_list"] is None:
        exp["m_list"] = [8.0, 16.0, grid.half_length / 2.0]
    else:
        exp["m_list"] = [_coerce("experiment.m_list[*]", v, float) for v in exp["m_list"]]
    if exp["m"] is None:
        exp["m"] = grid.half_length / 2.0
    if exp["T0"] is None:
        exp["T0"] = solver.t_end
    exp["n_list"] = [_coerce("experiment.n_list[*]", v, int) for v in exp["n_list"]]

    return RunConfig(
        grid=grid,
        besov=besov,
        model=model,
        solver=solver,
        experiment=exp,
        output=merged["output"],
        raw=merged,
    )


def parse_config(path) -> RunConfig:
    """Load, validate, and default-fill a JSON config file."""
    path = Path(path)
    if not path.exists():
        raise FileNotFoundError(f"config file not found: {path}")
    try:
        data = json.loads(path.read_text())
    except json.JSONDecodeError as e:
        raise ConfigError("<root>", f"malformed JSON: {e}") from e
    return build_run_config(data)


def config_hash(raw: dict) -> str:
    """Short digest of the semantically meaningful fields (output excluded)."""
    semantic = {k: v for k, v in raw.items() if k != "output"}
    blob = json.dumps(semantic, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(blob.encode()).hexdigest()[:12]


def _fmt(v) -> str:
    """Full-precision, locale-free scalar formatting."""
    if v is None:
        return ""
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return str(v)


def _summary_text(report: ExperimentReport, cfg: RunConfig) -> str:
    lines = [f"experiment = {report.name}", f"config_hash = {cfg.hash}", "", "[config]"]
    for key in sorted(report.config):
        lines.append(f"{key} = {_fmt(report.config[key])}")
    lines += ["", "[statuses]"]
    for key in sorted(report.statuses):
        lines.append(f"{key} = {report.statuses[key]}")
    for kind, title in (
        ("premise", "premises"),
        ("conclusion", "conclusions"),
        ("consistency", "consistency"),
    ):
        rows = [c for c in report.checks if c.kind == kind]
        if rows:
            lines += ["", f"[{title}]"]
            for c in rows:
                lines.append(
                    f"{c.name} = {_fmt(c.value)} (threshold {_fmt(c.threshold)}) "
                    f"{'PASS' if c.passed else 'FAIL'}  # {c.note}"
                )
    if report.constants:
        lines += ["", "[constants]"]
        for key in sorted(report.constants):
            lines.append(f"{key} = {_fmt(report.constants[key])}")
    if report.fits:
        lines += ["", "[fits]"]
        for key in sorted(report.fits):
            f = report.fits[key]
            lines.append(
                f"{key} = slope {_fmt(f.slope)}, horizon {_fmt(f.horizon)}, "
                f"residual {_fmt(f.residual)}"
            )
    lines += ["", f"verdict = {report.verdict}", ""]
    return "\n".join(lines)


def _curves_text(report: ExperimentReport) -> str:
    rows = ["experiment,label,n,omega,m,t,value"]
    for c in report.curves:
        for t, v in zip(c.times, c.values):
            rows.append(
                f"{report.name},{c.label},{_fmt(c.n)},{_fmt(c.omega)},{_fmt(c.m)},"
                f"{_fmt(float(t))},{_fmt(float(v))}"
            )
    return "\n".join(rows) + "\n"


def _series_key(c: NormCurve) -> str:
    parts = [c.label]
    if c.n is not None:
        parts.append(f"n={c.n}")
    if c.m is not None:
        parts.append(f"m={c.m:g}")
    return " ".join(parts)


def _plot_text(report: ExperimentReport, curves_name: str, png_name: str) -> str:
    lines = [
        "set datafile separator ','",
        "set terminal pngcairo size 1000,700",
        f"set output '{png_name}'",
        "set key outside",
        "set xlabel 't'",
        "set ylabel 'norm'",
        f"set title '{report.name}'",
    ]
    plots = []
    for c in report.curves:
        sel = f"strcol(2) eq '{c.label}'"
        if c.n is not None:
            sel += f" && strcol(3) eq '{c.n}'"
        if c.m is not None:
            sel += f" && strcol(5) eq '{_fmt(c.m)}'"
        plots.append(
            f"'{curves_name}' using 6:(({sel}) ? $7 : NaN) with linespoints "
            f"title '{_series_key(c)}'"
        )
    if plots:
        lines.append("plot \\\n  " + ", \\\n  ".join(plots))
    return "\n".join(lines) + "\n"


def write_report(report: ExperimentReport, cfg: RunConfig) -> ReportFiles:
    """Persist summary, curves, and plot script for one report."""
    out_dir = Path(cfg.output["directory"])
    out_dir.mkdir(parents=True, exist_ok=True)
    seed = cfg.experiment.get("seed", 0)
    base = f"{report.name}_seed{seed}_{cfg.hash}"
    formats = cfg.output["formats"]

    summary = curves = plots = None
    if "summary" in formats:
        summary = out_dir / f"{base}_summary.txt"
        summary.write_text(_summary_text(report, cfg))
    if "curves" in formats:
        curves = out_dir / f"{base}_curves.csv"
        curves.write_text(_curves_text(report))
    if "plots" in formats:
        plots = out_dir / f"{base}_plots.gp"
        plots.write_text(_plot_text(report, f"{base}_curves.csv", f"{base}.png"))
    return ReportFiles(summary=summary, curves=curves, plots=plots)


def read_curves(path) -> list:
    """Re-read a curves CSV into NormCurve objects (exact round-trip)."""
    lines = Path(path).read_text().strip().splitlines()
    header = lines[0].split(",")
    if header != ["experiment", "label", "n", "omega", "m", "t", "value"]:
        raise ValueError(f"unexpected curves header: {header}")
    series: dict = {}
    order = []
    for line in lines[1:]:
        _, label, n, omega, m, t, v = line.split(",")
        key = (label, n, omega, m)
        if key not in series:
            series[key] = ([], [])
            order.append(key)
        series[key][0].append(float(t))
        series[key][1].append(float(v))
    out = []
    for label, n, omega, m in order:
        ts, vs = series[(label, n, omega, m)]
        out.append(
            NormCurve(
                times=np.array(ts),
                values=np.array(vs),
                label=label,
                n=int(n) if n else None,
                omega=int(omega) if omega else None,
                m=float(m) if m else None,
            )
        )
    return out
