"""Command-line entry points.

Subcommands: besov-norm, solve, experiment, validate, oracle.  Exit codes:
0 success, 1 experiment/validation failure, 2 usage or missing file,
3 config schema violation, 4 internal error.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from .besov import BesovParams, besov_norm
from .data import build_phi, make_f_n, preset_u0
from .experiments import (
    HarnessConfig,
    check_decoupling,
    check_transport_apriori,
    check_truncation_stability,
    check_two_solution_stability,
    make_stability_pairs,
    make_transport_problems,
    run_nonuniform_at,
    run_nonuniform_basic,
)
from .grid import Field, helmholtz_inverse, lebesgue_norm, make_grid
from .lp import build_cutoffs, decompose
from .oracles import frozen_phase_slope, periodized_kernel
from .reporting import ConfigError, RunConfig, build_run_config, parse_config, write_report
from .solver import ModelParams, SolverConfig, conserved_quantities, evolve

__all__ = ["main", "run_command"]


def _add_grid_args(p: argparse.ArgumentParser, N_default: int = 2**12) -> None:
    p.add_argument("--L", type=float, default=32.0 * math.pi, help="domain half-length")
    p.add_argument("--N", type=int, default=N_default, help="number of grid points")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="bfamlab", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("besov-norm", help="Besov norm of a preset datum")
    p.add_argument("--preset", default="gaussian")
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", type=float, default=2.0)
    _add_grid_args(p)

    p = sub.add_parser("solve", help="evolve a preset datum and print diagnostics")
    p.add_argument("--preset", default="gaussian")
    p.add_argument("--b", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=None)
    p.add_argument("--t-end", type=float, default=0.25)
    p.add_argument("--sample-every", type=int, default=10)
    p.add_argument("--output", default=None, help="optional CSV path for the diagnostics")
    _add_grid_args(p)

    p = sub.add_parser("experiment", help="run one experiment from a config file")
    p.add_argument("--config", required=True, help="JSON config path, or 'default'")

    p = sub.add_parser("validate", help="run the quick invariant suite")
    _add_grid_args(p)

    p = sub.add_parser("oracle", help="frozen-phase and kernel oracles; write reference values")
    p.add_argument("--n-list", type=int, nargs="+", default=[4, 5, 6, 7])
    p.add_argument("--s", type=float, default=2.0)
    p.add_argument("--p", type=float, default=2.0)
    p.add_argument("--r", type=float, default=2.0)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--t-end", type=float, default=0.25)
    p.add_argument("--sample-every", type=int, default=10)
    p.add_argument("--output", default=None, help="JSON output path (default: stdout)")
    _add_grid_args(p, N_default=2**15)
    return parser


def _cmd_besov_norm(args) -> int:
    grid = make_grid(args.L, args.N)
    phi = build_phi(grid)
    u = preset_u0(args.preset, grid, phi)
    prm = BesovParams(s=args.s, p=args.p, r=args.r)
    print(repr(besov_norm(u, prm)))
    return 0


def _cmd_solve(args) -> int:
    grid = make_grid(args.L, args.N)
    phi = build_phi(grid)
    u0 = preset_u0(args.preset, grid, phi)
    model = ModelParams(b=args.b)
    cfg = SolverConfig(dt=args.dt, t_end=args.t_end, sample_every=args.sample_every)
    traj = evolve(u0, model, cfg)
    rows = ["t,sup,mass,h1_energy"]
    for t, state in zip(traj.times, traj.states):
        q = conserved_quantities(state, model)
        rows.append(
            f"{repr(float(t))},{repr(lebesgue_norm(state, np.inf))},"
            f"{repr(q['mass_m'])},{repr(q['h1_energy'])}"
        )
    text = "\n".join(rows)
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    print(f"status: {traj.status}" + (f" at t={traj.blowup_time}" if traj.blowup_time else ""))
    return 0 if traj.status == "completed" else 1


def dispatch_experiment(rc: RunConfig):
    """Run the experiment named in the config and return its report."""
    exp = rc.experiment
    cfg = HarnessConfig(
        grid=rc.grid, model=rc.model, solver=rc.solver, t0=exp["T0"], seed=exp["seed"]
    )
    name = exp["name"]
    if name == "nonuniform_basic":
        return run_nonuniform_basic(rc.besov, exp["n_list"], cfg)
    if name == "nonuniform_at":
        return run_nonuniform_at(exp["u0_name"], rc.besov, exp["n_list"], exp["m"], cfg)
    if name == "truncation_stability":
        return check_truncation_stability(
            exp["u0_name"], rc.besov, exp["n_list"], exp["omega"], exp["m"], cfg
        )
    if name == "decoupling":
        return check_decoupling(
            exp["u0_name"], rc.besov, exp["n"], exp["omega"], exp["m_list"], cfg
        )
    if name == "two_solution_stability":
        pairs = make_stability_pairs(rc.grid, exp["count"], exp["seed"])
        return check_two_solution_stability(pairs, rc.besov, cfg)
    if name == "transport_apriori":
        problems = make_transport_problems(rc.grid, exp["count"], exp["seed"])
        return check_transport_apriori(problems, exp["sigma"], rc.besov.p, rc.besov.r, cfg)
    raise ValueError(f"unknown experiment {name!r}")


def _cmd_experiment(args) -> int:
    if args.config == "default":
        rc = build_run_config({})
    else:
        rc = parse_config(args.config)
    report = dispatch_experiment(rc)
    files = write_report(report, rc)
    for f in (files.summary, files.curves, files.plots):
        if f is not None:
            print(f"wrote {f}")
    print(f"verdict: {report.verdict}")
    return 0 if report.passed else 1


def _cmd_validate(args) -> int:
    grid = make_grid(args.L, args.N)
    cut = build_cutoffs()
    phi = build_phi(grid)
    checks = []

    xi = np.linspace(0.0, grid.max_frequency, 10_000)
    defect = float(np.max(np.abs(cut.partition_sum(xi) - 1.0)))
    checks.append(("partition_of_unity", defect, 1e-12, defect <= 1e-12))

    u = preset_u0("gaussian", grid)
    blocks = decompose(u, cut)
    recon = float(np.max(np.abs(blocks.reconstruct().values - u.values)))
    checks.append(("block_reconstruction", recon, 1e-10, recon <= 1e-10))

    f4 = make_f_n(grid, phi, 4, 2.0)
    total = lebesgue_norm(f4, 2.0)
    b4 = decompose(f4, cut)
    leak = max(
        lebesgue_norm(b4[j], 2.0) for j in b4.indices() if j != 4
    )
    checks.append(("packet_localization", leak / total, 1e-12, leak <= 1e-12 * total))

    kernel = periodized_kernel(grid)
    spike = np.zeros(grid.num_points)
    spike[grid.num_points // 2] = 1.0 / grid.dx
    numeric = helmholtz_inverse(Field(grid=grid, values=spike))
    far = np.abs(grid.nodes) > 1.0
    kerr = float(np.max(np.abs(numeric.values - kernel)[far]))
    checks.append(("helmholtz_kernel_far_field", kerr, 1e-3, kerr <= 1e-3))

    traj = evolve(u, ModelParams(b=2.0), SolverConfig(dt=1e-3, t_end=0.1, sample_every=100))
    q0 = conserved_quantities(traj.states[0], traj.model)
    q1 = conserved_quantities(traj.states[-1], traj.model)
    drift = abs(q1["h1_energy"] - q0["h1_energy"]) / q0["h1_energy"]
    checks.append(("h1_energy_drift", drift, 1e-6, drift <= 1e-6))

    ok = True
    for name, value, tol, passed in checks:
        ok &= passed
        print(f"{name}: {value:.3e} (tol {tol:.0e}) {'PASS' if passed else 'FAIL'}")
    print(f"validate: {'pass' if ok else 'fail'}")
    return 0 if ok else 1


def _cmd_oracle(args) -> int:
    grid = make_grid(args.L, args.N)
    phi = build_phi(grid)
    prm = BesovParams(s=args.s, p=args.p, r=args.r)
    steps = max(1, int(round(args.t_end / args.dt)))
    sample_steps = sorted({0, steps, *range(0, steps + 1, args.sample_every)})
    times = np.array([i * args.dt for i in sample_steps if i > 0])
    slopes = {
        str(n): frozen_phase_slope(grid, phi, n, prm, times) for n in args.n_list
    }

    kernel = periodized_kernel(grid)
    spike = np.zeros(grid.num_points)
    spike[grid.num_points // 2] = 1.0 / grid.dx
    numeric = helmholtz_inverse(Field(grid=grid, values=spike))
    far = np.abs(grid.nodes) > 1.0
    kernel_err = float(np.max(np.abs(numeric.values - kernel)[far]))

    payload = {
        "grid": {"L": args.L, "N": args.N},
        "besov": {"s": args.s, "p": args.p, "r": args.r},
        "times": {"dt": args.dt, "t_end": args.t_end, "sample_every": args.sample_every},
        "frozen_phase_slopes": slopes,
        "kernel_far_field_error": kernel_err,
    }
    text = json.dumps(payload, indent=2, sort_keys=True)
    if args.output:
        Path(args.output).write_text(text + "\n")
        print(f"wrote {args.output}")
    else:
        print(text)
    return 0


_COMMANDS = {
    "besov-norm": _cmd_besov_norm,
    "solve": _cmd_solve,
    "experiment": _cmd_experiment,
    "validate": _cmd_validate,
    "oracle": _cmd_oracle,
}


def run_command(argv) -> int:
    """Parse argv and execute; returns the exit code without exiting."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except ConfigError as e:
        print(f"config error: {e}", file=sys.stderr)
        return 3
    except Exception as e:  # internal failure; keep the code contract
        print(f"internal error: {type(e).__name__}: {e}", file=sys.stderr)
        return 4


def main() -> None:
    sys.exit(run_command(sys.argv[1:]))


if __name__ == "__main__":
    main()
