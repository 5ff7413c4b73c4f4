"""Command-line pipeline: generate, simulate, decompose, export.

Subcommands mirror the library stages. Exit codes: 0 success, 1 usage
error, 2 data/format error (unreadable or malformed inputs), 3
numerical failure (divergence, singular companion). All defaults match
the standard two-jet configuration: 256 grid, Re 10000, 30 snapshots
taken every 5 steps.

The simulate config file is JSON with two groups of optional keys:

    jet:    case (1 or 2), seed, n, u_max, v_max, r_o, steepness,
            offset, length
    sim:    re, dt, n_steps, snapshot_interval, collect_count,
            dealias, schmidt

Omitted keys fall back to the defaults above; unknown keys are
rejected so typos cannot silently change a run.
"""

import argparse
import json
import os
import sys
from dataclasses import replace

import numpy as np

from . import dmd, pod, snapio, solver
from .errors import FormatError, KhjetError, NumericalError
from .fields import Grid2D, SnapshotMatrix, flatten, unflatten
from .jet import build_initial_conditions, preset
from .snapio import _atomic_writer

__all__ = ["cli_dispatch", "main"]

_JET_KEYS = {
    "case",
    "seed",
    "n",
    "u_max",
    "v_max",
    "r_o",
    "steepness",
    "offset",
    "length",
}
_SIM_KEYS = {
    "re",
    "dt",
    "n_steps",
    "snapshot_interval",
    "collect_count",
    "dealias",
    "schmidt",
}


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """argparse that reports usage problems as exit code 1."""

    def error(self, message):
        raise _UsageError(f"{self.format_usage().rstrip()}\n{self.prog}: {message}")


def _power_of_two(text):
    value = int(text)
    if value < 4 or (value & (value - 1)) != 0:
        raise argparse.ArgumentTypeError(
            f"grid side must be a power of two >= 4, got {text}"
        )
    return value


def _build_parser():
    parser = _Parser(
        prog="khjet",
        description="Two-jet shear flow snapshots and their modal decompositions.",
    )
    sub = parser.add_subparsers(dest="command", metavar="command")

    p = sub.add_parser("gen-ic", parents=[], help="write initial-condition fields")
    p.add_argument("--case", type=int, choices=(1, 2), default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n", type=_power_of_two, default=256)
    p.add_argument("--out", required=True)
    p.set_defaults(func=_cmd_gen_ic)

    p = sub.add_parser("simulate", help="run the flow solver and collect snapshots")
    p.add_argument("--config", required=True, help="JSON run configuration")
    p.add_argument("--out", required=True, help="snapshot file to write")
    p.set_defaults(func=_cmd_simulate)

    p = sub.add_parser("pod", help="orthogonal decomposition of a snapshot file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument(
        "--coeff-count",
        type=int,
        default=10,
        help="time-coefficient columns in the CSV (clipped to the mode count)",
    )
    p.add_argument(
        "--lag-pair",
        type=int,
        nargs=2,
        action="append",
        metavar=("I", "J"),
        default=None,
        help="1-based mode pair for a lag-correlation table; repeatable",
    )
    p.set_defaults(func=_cmd_pod)

    p = sub.add_parser("dmd", help="dynamic mode decomposition of a snapshot file")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out-dir", required=True)
    p.add_argument("--rank-tol", type=float, default=1e-12)
    p.set_defaults(func=_cmd_dmd)

    p = sub.add_parser("mean-profile", help="time-averaged scalar and its y-profile")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out", required=True, help="profile CSV")
    p.add_argument("--length", type=float, default=2.0 * np.pi)
    p.add_argument("--image", default=None, help="also write the mean field as PGM")
    p.set_defaults(func=_cmd_mean_profile)

    p = sub.add_parser("export", help="render stored modes as PGM images")
    p.add_argument("--modes", choices=("pod", "dmd"), required=True)
    p.add_argument("--count", type=int, default=5)
    p.add_argument("--out-dir", required=True, help="directory holding the result file")
    p.set_defaults(func=_cmd_export)

    return parser


def _cmd_gen_ic(args):
    cfg = replace(preset(args.case), rng_seed=args.seed, n=args.n)
    u, v, ps = build_initial_conditions(cfg)
    # three columns: streamwise velocity, noise velocity, scalar; the
    # dt_snap slot is meaningless for initial conditions, stored as 1.
    s = SnapshotMatrix(
        data=np.column_stack([flatten(u), flatten(v), flatten(ps)]), dt_snap=1.0
    )
    snapio.write_snapshots(args.out, s)
    print(f"wrote case {args.case} initial conditions (n={cfg.n}) to {args.out}")
    return 0


def _load_config(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            raw = json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}: not valid JSON ({e})") from e
    if not isinstance(raw, dict):
        raise FormatError(f"{path}: top level must be a JSON object")
    unknown = set(raw) - _JET_KEYS - _SIM_KEYS
    if unknown:
        raise FormatError(f"{path}: unknown config key(s) {sorted(unknown)}")

    jet_cfg = preset(int(raw.get("case", 1)))
    renames = {"seed": "rng_seed", "offset": "case_offset"}
    overrides = {
        renames.get(k, k): raw[k]
        for k in _JET_KEYS & set(raw)
        if k != "case"
    }
    if "n" in overrides:
        overrides["n"] = int(overrides["n"])
    jet_cfg = replace(jet_cfg, **overrides)

    sim_kwargs = {k: raw[k] for k in _SIM_KEYS & set(raw)}
    # viscosity follows the jet scales: nu = u_max * r_o / re
    sim_cfg = solver.SimConfig(u_ref=jet_cfg.u_max, l_ref=jet_cfg.r_o, **sim_kwargs)
    return jet_cfg, sim_cfg


def _cmd_simulate(args):
    jet_cfg, sim_cfg = _load_config(args.config)
    u, v, ps = build_initial_conditions(jet_cfg)
    state = solver.init_state(u, v, ps)
    result = solver.run_collect(sim_cfg, state)
    snapio.write_snapshots(args.out, result.snapshots)
    s = result.snapshots
    print(
        f"wrote {s.n_snapshots} snapshots (n={jet_cfg.n}, "
        f"dt_snap={s.dt_snap!r}) to {args.out}"
    )
    return 0


def _grid_from(s: SnapshotMatrix, length: float = 2.0 * np.pi) -> Grid2D:
    return Grid2D(n=s.grid_side(), length=length)


def _save_npz(path, **arrays):
    with _atomic_writer(path) as fh:
        np.savez(fh, **arrays)


def _cmd_pod(args):
    s = snapio.read_snapshots(args.infile)
    grid = _grid_from(s)
    result = pod.decompose(s)
    os.makedirs(args.out_dir, exist_ok=True)
    npz_path = os.path.join(args.out_dir, "pod_result.npz")
    _save_npz(
        npz_path,
        mean=result.mean,
        eigenvalues=result.eigenvalues,
        modes=result.modes,
        time_coefficients=result.time_coefficients,
        energy_fractions=result.energy_fractions,
        degenerate=result.degenerate,
        dt_snap=result.dt_snap,
        grid_n=grid.n,
        grid_length=grid.length,
    )
    eig_path = os.path.join(args.out_dir, "pod_eigenvalues.csv")
    with _atomic_writer(eig_path, "w") as fh:
        fh.write("index,eigenvalue,energy_fraction,cumulative_fraction\r\n")
        running = 0.0
        for j, (lam, frac) in enumerate(
            zip(result.eigenvalues, result.energy_fractions)
        ):
            running += float(frac)
            fh.write(f"{j},{float(lam)!r},{float(frac)!r},{running!r}\r\n")
    coeff_path = os.path.join(args.out_dir, "pod_time_coefficients.csv")
    count = min(args.coeff_count, result.n_modes)
    snapio.export_time_coefficients_csv(
        result, coeff_path, count=count, pairs=args.lag_pair or ()
    )
    print(f"pod: {result.n_modes} modes -> {args.out_dir}")
    return 0


def _cmd_dmd(args):
    s = snapio.read_snapshots(args.infile)
    grid = _grid_from(s)
    result = dmd.decompose(s, rank_tol=args.rank_tol)
    os.makedirs(args.out_dir, exist_ok=True)
    _save_npz(
        os.path.join(args.out_dir, "dmd_result.npz"),
        companion=result.companion,
        multipliers=result.multipliers,
        spectrum=result.spectrum,
        modes=result.modes,
        amplitudes=result.amplitudes,
        stability=np.array(result.stability),
        dt_snap=result.dt_snap,
        grid_n=grid.n,
        grid_length=grid.length,
    )
    snapio.export_spectrum_csv(
        result, os.path.join(args.out_dir, "dmd_spectrum.csv")
    )
    print(f"dmd: {result.n_modes} modes -> {args.out_dir}")
    return 0


def _cmd_mean_profile(args):
    s = snapio.read_snapshots(args.infile)
    grid = _grid_from(s, length=args.length)
    mean_field = unflatten(s.data.mean(axis=1), grid)
    profile = mean_field.values.mean(axis=1)
    with _atomic_writer(args.out, "w") as fh:
        fh.write("row,y,mean_scalar\r\n")
        for i, (y, value) in enumerate(zip(grid.coords, profile)):
            fh.write(f"{i},{float(y)!r},{float(value)!r}\r\n")
    if args.image is not None:
        snapio.export_mode_image(flatten(mean_field), grid, args.image)
    print(f"mean profile of {s.n_snapshots} snapshots -> {args.out}")
    return 0


def _cmd_export(args):
    npz_path = os.path.join(args.out_dir, f"{args.modes}_result.npz")
    if not os.path.exists(npz_path):
        raise FormatError(
            f"{npz_path} not found; run the {args.modes} subcommand first"
        )
    stored = np.load(npz_path)
    grid = Grid2D(n=int(stored["grid_n"]), length=float(stored["grid_length"]))
    modes = stored["modes"]
    if args.modes == "pod":
        usable = np.nonzero(~stored["degenerate"])[0]  # eigenvalue order
    else:
        usable = np.argsort(stored["amplitudes"])[::-1]
    count = args.count
    if count < 1:
        raise _UsageError("--count must be at least 1")
    if count > usable.size:
        print(
            f"only {usable.size} exportable modes, clipping --count {count}",
            file=sys.stderr,
        )
        count = usable.size
    written = []
    for rank, j in enumerate(usable[:count], start=1):
        path = os.path.join(args.out_dir, f"{args.modes}_mode_{rank:02d}.pgm")
        written += snapio.export_mode_image(modes[:, j], grid, path)
    print(f"exported {len(written)} image(s) to {args.out_dir}")
    return 0


def cli_dispatch(argv) -> int:
    """Run one subcommand; returns the process exit code."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
        if getattr(args, "func", None) is None:
            parser.print_help()
            return 1
        return args.func(args)
    except _UsageError as e:
        print(e, file=sys.stderr)
        return 1
    except NumericalError as e:
        print(f"numerical failure: {e}", file=sys.stderr)
        return 3
    except KhjetError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except OSError as e:
        print(f"io error: {e}", file=sys.stderr)
        return 2
    except SystemExit as e:  # --help exits argparse with code 0
        return int(e.code or 0)


def main():
    sys.exit(cli_dispatch(sys.argv[1:]))
