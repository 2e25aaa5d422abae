"""Command line front end.

Every analytic quantity and the simulator are exposed as subcommands that
emit CSV (default) or JSON.  Output is deterministic: floats are printed
with 17 significant digits, CSV rows follow the input grid order, files are
UTF-8 with LF line endings, and every CSV starts with one comment line
recording the exact invocation, package version and seed — rerunning a
command with the same flags produces byte-identical files.

Exit codes: 0 on success, 2 for domain/input errors, 3 for convergence
failures.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import __version__
from .distribution import density, size_distribution
from .ensemble import simulate_late_stage, write_series_csv, write_snapshot_csv
from .errors import (
    ConvergenceError,
    DataError,
    DomainError,
    IntegrationError,
    RipeningError,
)
from .recrystallization import initial_growth_rate, new_volume_fraction
from .regime import (
    flow_time,
    get_regime,
    growth_rate_scaled,
    return_invariant,
)
from .return_map import return_point_for_ratio, solve_return_point

__all__ = ["main"]


def _g17(x) -> str:
    return format(float(x), ".17g")


def _emit_csv(stream, comment: str, columns, rows):
    stream.write(f"# {comment}\n")
    stream.write(",".join(columns) + "\n")
    for row in rows:
        stream.write(",".join(_g17(v) for v in row) + "\n")


def _emit_json(stream, payload):
    stream.write(json.dumps(payload, indent=2, sort_keys=True) + "\n")


class _Output:
    """Writer for --out: stdout for '-', else a file opened with LF endings."""

    def __init__(self, path: str):
        self.path = path

    def __enter__(self):
        if self.path == "-":
            self._fh = None
            return sys.stdout
        self._fh = open(self.path, "w", encoding="utf-8", newline="")
        return self._fh

    def __exit__(self, *exc):
        if self._fh is not None:
            self._fh.close()
        return False


def _comment(invocation: str, seed) -> str:
    seed_text = "-" if seed is None else str(seed)
    return f"{invocation} | version={__version__} | seed={seed_text}"


def _add_grid_flags(parser, value_flag: str, value_help: str):
    parser.add_argument(
        value_flag,
        action="append",
        type=float,
        default=None,
        metavar="X",
        help=f"{value_help}; repeatable, overrides the --min/--max grid",
    )
    parser.add_argument("--min", type=float, default=None, help="grid start")
    parser.add_argument("--max", type=float, default=None, help="grid end")
    parser.add_argument(
        "--count", type=int, default=None, help="number of grid points"
    )
    parser.add_argument(
        "--log",
        action="store_true",
        help="space the --min/--max grid logarithmically",
    )


def _resolve_grid(args, parser, explicit, default=None):
    if explicit is not None:
        if args.min is not None or args.max is not None or args.count is not None:
            parser.error("give either explicit values or a --min/--max/--count grid")
        return list(explicit)
    given = (args.min is not None, args.max is not None, args.count is not None)
    if not any(given):
        if default is not None:
            return list(default)
        parser.error("no grid given: use explicit values or --min/--max/--count")
    if not all(given):
        parser.error("--min, --max and --count must be given together")
    if args.count < 1:
        parser.error("--count must be >= 1")
    if args.count == 1:
        if args.min != args.max:
            parser.error("--count 1 requires --min == --max")
        return [float(args.min)]
    if args.log:
        if args.min <= 0.0:
            parser.error("--log grids require --min > 0")
        return list(np.geomspace(args.min, args.max, args.count))
    return list(np.linspace(args.min, args.max, args.count))


def cmd_tau(args, parser, invocation) -> int:
    regime = get_regime(args.regime)
    grid = _resolve_grid(args, parser, args.z)
    rows = [
        (
            z,
            flow_time(regime, z),
            return_invariant(regime, z),
            growth_rate_scaled(regime, z),
        )
        for z in grid
    ]
    columns = ("z", "tau", "alpha", "dz_dtau")
    with _Output(args.out) as out:
        if args.format == "json":
            payload = {
                "command": "tau",
                "invocation": invocation,
                "version": __version__,
                "seed": None,
                "regime": regime.kind,
                "rows": [dict(zip(columns, row)) for row in rows],
            }
            _emit_json(out, payload)
        else:
            _emit_csv(out, _comment(invocation, None), columns, rows)
    return 0


def cmd_return(args, parser, invocation) -> int:
    regime = get_regime(args.regime)
    if args.z0 is not None and args.s is not None:
        parser.error("give --z0 values or --s values, not both")
    explicit = args.z0 if args.z0 is not None else args.s
    var = args.var
    if args.z0 is not None:
        var = "z0"
    elif args.s is not None:
        var = "s"
    grid = _resolve_grid(args, parser, explicit)
    if var == "z0":
        points = [solve_return_point(regime, z0) for z0 in grid]
    else:
        points = [return_point_for_ratio(regime, s) for s in grid]
    rows = [(p.z0, p.z_return, p.s) for p in points]
    columns = ("z0", "rho", "s")
    with _Output(args.out) as out:
        if args.format == "json":
            payload = {
                "command": "return",
                "invocation": invocation,
                "version": __version__,
                "seed": None,
                "regime": regime.kind,
                "variable": var,
                "rows": [dict(zip(columns, row)) for row in rows],
            }
            _emit_json(out, payload)
        else:
            _emit_csv(out, _comment(invocation, None), columns, rows)
    return 0


def cmd_phi(args, parser, invocation) -> int:
    regime = get_regime(args.regime)
    grid = _resolve_grid(
        args, parser, args.s, default=np.geomspace(1.0, 1e3, 200)
    )
    rows = [(s, new_volume_fraction(regime, s)) for s in grid]
    columns = ("s", "phi")
    with _Output(args.out) as out:
        if args.format == "json":
            payload = {
                "command": "phi",
                "invocation": invocation,
                "version": __version__,
                "seed": None,
                "regime": regime.kind,
                "summary": {"initial_rate": initial_growth_rate(regime)},
                "rows": [dict(zip(columns, row)) for row in rows],
            }
            _emit_json(out, payload)
        else:
            _emit_csv(out, _comment(invocation, None), columns, rows)
    return 0


def cmd_dist(args, parser, invocation) -> int:
    regime = get_regime(args.regime)
    grid = _resolve_grid(
        args, parser, args.z, default=np.linspace(0.0, regime.z_max, 257)
    )
    dist = size_distribution(regime)
    rows = [(z, density(regime, z), float(dist.cdf(z))) for z in grid]
    columns = ("z", "h", "cdf")
    with _Output(args.out) as out:
        if args.format == "json":
            payload = {
                "command": "dist",
                "invocation": invocation,
                "version": __version__,
                "seed": None,
                "regime": regime.kind,
                "summary": {
                    "moments": {str(k): dist.moment(k) for k in range(4)}
                },
                "rows": [dict(zip(columns, row)) for row in rows],
            }
            _emit_json(out, payload)
        else:
            _emit_csv(out, _comment(invocation, None), columns, rows)
    return 0


def cmd_simulate(args, parser, invocation) -> int:
    regime = get_regime(args.regime)
    # Default reference times keep the equivalent burn-in comfortably beyond
    # the late-stage condition (see README); any t0 > 0 gives the same
    # rescaled comparison.
    t0 = args.t0 if args.t0 is not None else {"dl": 225.0, "al": 200.0}[regime.kind]
    snapshot_times = args.snapshot
    if snapshot_times is None:
        snapshot_times = [1.5 * t0, 2.0 * t0, 3.0 * t0]
    t_end = args.t_end if args.t_end is not None else max(snapshot_times)
    result = simulate_late_stage(
        regime, args.n, t0, t_end, snapshot_times, args.seed
    )
    os.makedirs(args.out_dir, exist_ok=True)
    comment = _comment(invocation, args.seed)

    base_file = "snapshot_00.csv"
    write_snapshot_csv(result.base, os.path.join(args.out_dir, base_file), comment)
    snapshot_entries = []
    for i, (cmp_row, snap) in enumerate(
        zip(result.comparisons, result.snapshots), start=1
    ):
        name = f"snapshot_{i:02d}.csv"
        write_snapshot_csv(snap, os.path.join(args.out_dir, name), comment)
        snapshot_entries.append(
            {
                "file": name,
                "t": cmp_row.t,
                "s": cmp_row.s,
                "phi_empirical": cmp_row.new_fraction_empirical,
                "phi_analytic": cmp_row.new_fraction_analytic,
                "phi_rel_err": cmp_row.fraction_rel_err,
                "boundary_radius_empirical": cmp_row.boundary_radius_empirical,
                "boundary_radius_analytic": cmp_row.boundary_radius_analytic,
                "boundary_rel_err": cmp_row.boundary_rel_err,
            }
        )
    write_series_csv(
        result.series, os.path.join(args.out_dir, "series.csv"), comment
    )

    report = {
        "command": "simulate",
        "invocation": invocation,
        "version": __version__,
        "regime": regime.kind,
        "n": result.n_init,
        "t0": result.t0,
        "t_end": result.t_end,
        "seed": result.seed,
        "r_c0": result.r_c0,
        "conservation_residual": result.conservation_residual,
        "rc_power_slope": result.rc_power_slope,
        "rc_power_slope_expected": result.rc_power_slope_expected,
        "files": {"base_snapshot": base_file, "series": "series.csv"},
        "snapshots": snapshot_entries,
    }
    with open(
        os.path.join(args.out_dir, "report.json"), "w",
        encoding="utf-8", newline="",
    ) as fh:
        _emit_json(fh, report)
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ripening",
        description="Late-stage coarsening analytics and simulation.",
    )
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument(
            "--regime", choices=("dl", "al"), required=True,
            help="kinetic regime: diffusion- or attachment-limited",
        )
        p.add_argument(
            "--format", choices=("csv", "json"), default="csv",
            help="output format (default csv)",
        )
        p.add_argument(
            "--out", default="-", metavar="PATH",
            help="output file, '-' for stdout (default)",
        )

    p = sub.add_parser("tau", help="rescaled flow: tau, alpha and dz/dtau over z")
    common(p)
    _add_grid_flags(p, "--z", "scaled size to evaluate")
    p.set_defaults(handler=cmd_tau)

    p = sub.add_parser("return", help="return map: rho and time ratio s")
    common(p)
    _add_grid_flags(p, "--z0", "initial scaled size")
    p.add_argument(
        "--s", action="append", type=float, default=None, metavar="X",
        help="time ratio to invert; repeatable, alternative to --z0",
    )
    p.add_argument(
        "--var", choices=("z0", "s"), default="z0",
        help="which variable the --min/--max grid runs over (default z0)",
    )
    p.set_defaults(handler=cmd_return)

    p = sub.add_parser("phi", help="new-volume fraction over the time ratio s")
    common(p)
    _add_grid_flags(p, "--s", "time ratio t/t0")
    p.set_defaults(handler=cmd_phi)

    p = sub.add_parser("dist", help="scaled size density, CDF and moments")
    common(p)
    _add_grid_flags(p, "--z", "scaled size to evaluate")
    p.set_defaults(handler=cmd_dist)

    p = sub.add_parser(
        "simulate", help="N-particle run compared against the analytics"
    )
    p.add_argument(
        "--regime", choices=("dl", "al"), required=True,
        help="kinetic regime: diffusion- or attachment-limited",
    )
    p.add_argument("--n", type=int, default=20000, help="particle count")
    p.add_argument(
        "--t0", type=float, default=None,
        help="reference time on the coarsening clock (default 225 dl / 200 al)",
    )
    p.add_argument(
        "--t-end", dest="t_end", type=float, default=None,
        help="end time (default: last snapshot time)",
    )
    p.add_argument(
        "--snapshot", action="append", type=float, default=None, metavar="T",
        help="absolute snapshot time, repeatable (default 1.5,2,3 x t0)",
    )
    p.add_argument("--seed", type=int, default=1, help="RNG seed")
    p.add_argument(
        "--out-dir", default="ripening_run",
        help="directory for snapshot/series/report files",
    )
    p.set_defaults(handler=cmd_simulate)

    return parser


def main(argv=None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    argv = [str(a) for a in argv]
    parser = _build_parser()
    args = parser.parse_args(argv)
    invocation = " ".join(["ripening"] + argv)
    try:
        return args.handler(args, parser, invocation)
    except (ConvergenceError, IntegrationError) as exc:
        print(f"ripening: convergence error: {exc}", file=sys.stderr)
        return 3
    except (DomainError, DataError, RipeningError) as exc:
        print(f"ripening: error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"ripening: i/o error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
