"""Command-line front end: dephase-lab run | compare | sweep.

Every subcommand reads an optional key=value config file, applies --set
overrides (flags win), and writes files under the --out prefix:

  run      <out>.csv                              [+ <out>.png with --plot]
  compare  <out>.a.csv .b.csv .diff.csv .json .png
  sweep    <out>.<axis>-<value>.csv ... .summary.csv .summary.json .png

Exit codes: 0 success, 2 config error, 3 unsupported regime, 4 numerical
failure.  DEPHASE_LAB_THREADS caps the exact-solver worker count (0 = auto).
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .config import (
    apply_overrides,
    build_run_config,
    parse_kv_file,
    parse_sweep_values,
    split_extras,
)
from .errors import ConfigError, DephaseLabError, NumericalError, UnsupportedRegimeError
from .runner import compare, run, sweep
from .timeseries import fmt17, write_json
from .version import __version__

_EXIT_CONFIG = 2
_EXIT_REGIME = 3
_EXIT_NUMERICAL = 4


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="dephase-lab",
        description="Finite-time measurement of a two-level system in Ohmic phase noise",
    )
    parser.add_argument("--version", action="version", version=f"dephase-lab {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, helptext in (
        ("run", "evolve one configuration and write a CSV time series"),
        ("compare", "run two solvers on a shared grid and report differences"),
        ("sweep", "run a family of configurations along one parameter axis"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("--config", type=Path, default=None, help="key=value config file")
        p.add_argument(
            "--set",
            dest="overrides",
            action="append",
            default=[],
            metavar="KEY=VALUE",
            help="override a config key (repeatable; flags win over the file)",
        )
        p.add_argument("--out", type=Path, required=True, help="output path prefix")
        if name == "run":
            p.add_argument("--plot", action="store_true", help="also render a PNG figure")
        else:
            p.add_argument(
                "--no-plot",
                action="store_true",
                help="skip the PNG figure next to the delimited output",
            )
    return parser


def _load_mapping(args) -> dict[str, str]:
    mapping = parse_kv_file(args.config) if args.config is not None else {}
    return apply_overrides(mapping, args.overrides)


def _cmd_run(args) -> int:
    run_map, extras = split_extras(_load_mapping(args))
    if extras:
        raise ConfigError(f"keys {sorted(extras)} are only meaningful for compare/sweep")
    result = run(build_run_config(run_map))
    csv_path = args.out if args.out.suffix == ".csv" else args.out.with_suffix(".csv")
    result.series.write_csv(csv_path)
    print(f"wrote {csv_path}")
    if args.plot:
        from .plots import plot_series

        png = plot_series(result, csv_path.with_suffix(".png"))
        print(f"wrote {png}")
    return 0


def _cmd_compare(args) -> int:
    run_map, extras = split_extras(_load_mapping(args))
    solver_a = extras.get("solver_a")
    solver_b = extras.get("solver_b")
    if not solver_a or not solver_b:
        raise ConfigError("compare requires solver_a and solver_b")
    tolerance = float(extras["tolerance"]) if "tolerance" in extras else None
    base_map = dict(run_map)
    base_map.pop("solver", None)
    cfg_a = build_run_config({**base_map, "solver": solver_a})
    cfg_b = build_run_config({**base_map, "solver": solver_b})
    result = compare(cfg_a, cfg_b, tolerance)

    prefix = args.out
    prefix.parent.mkdir(parents=True, exist_ok=True)
    path_a = Path(f"{prefix}.a.csv")
    path_b = Path(f"{prefix}.b.csv")
    result.run_a.series.write_csv(path_a)
    result.run_b.series.write_csv(path_b)
    diff_path = Path(f"{prefix}.diff.csv")
    _write_diff_csv(result, diff_path)
    json_path = write_json(result.summary, Path(f"{prefix}.json"))
    print(f"wrote {path_a}, {path_b}, {diff_path}, {json_path}")
    if not args.no_plot:
        from .plots import plot_compare

        png = plot_compare(result, Path(f"{prefix}.png"))
        print(f"wrote {png}")
    if result.summary["pass"] is False:
        print(
            f"tolerance check failed: max_abs_diff = {result.summary['max_abs_diff']:.3e} "
            f"> {tolerance:.3e}",
            file=sys.stderr,
        )
        return _EXIT_NUMERICAL
    return 0


def _write_diff_csv(result, path: Path) -> None:
    series = result.run_a.series
    lines = [f"# dephase-lab {__version__}"]
    lines.append(f"# solver_a = {result.run_a.config.solver}")
    lines.append(f"# solver_b = {result.run_b.config.solver}")
    lines.append("t,abs_diff_rho11,abs_diff_rho22,abs_diff_rho12_re,abs_diff_rho12_im")
    for i in range(series.t.size):
        row = [fmt17(series.t[i])] + [
            fmt17(result.diffs[name][i])
            for name in ("rho11", "rho22", "rho12_re", "rho12_im")
        ]
        lines.append(",".join(row))
    path.write_text("\n".join(lines) + "\n", encoding="ascii")


def _cmd_sweep(args) -> int:
    run_map, extras = split_extras(_load_mapping(args))
    axis = extras.get("sweep_axis")
    if not axis:
        raise ConfigError("sweep requires sweep_axis (eta, lambda_sq, or n_steps)")
    if "sweep_values" not in extras:
        raise ConfigError("sweep requires sweep_values (comma-separated)")
    values = parse_sweep_values(axis, extras["sweep_values"])
    base = build_run_config(run_map)
    result = sweep(base, axis, values)

    prefix = args.out
    prefix.parent.mkdir(parents=True, exist_ok=True)
    written = []
    for value, run_result in zip(result.values, result.runs):
        path = Path(f"{prefix}.{axis}-{value:g}.csv")
        run_result.series.write_csv(path)
        written.append(str(path))
    summary_csv = Path(f"{prefix}.summary.csv")
    lines = [f"# dephase-lab {__version__}", f"{axis},epsilon_final,abs_rho12_final"]
    for row in result.summary_rows:
        lines.append(
            f"{row['value']:g},{fmt17(row['epsilon_final'])},{fmt17(row['abs_rho12_final'])}"
        )
    summary_csv.write_text("\n".join(lines) + "\n", encoding="ascii")
    json_path = write_json(
        {"axis": axis, "rows": result.summary_rows}, Path(f"{prefix}.summary.json")
    )
    print(f"wrote {', '.join(written)}")
    print(f"wrote {summary_csv}, {json_path}")
    if not args.no_plot:
        from .plots import plot_sweep

        png = plot_sweep(result, Path(f"{prefix}.png"))
        print(f"wrote {png}")
    return 0


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    handler = {"run": _cmd_run, "compare": _cmd_compare, "sweep": _cmd_sweep}[args.command]
    try:
        return handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG
    except UnsupportedRegimeError as exc:
        print(f"unsupported regime: {exc}", file=sys.stderr)
        return _EXIT_REGIME
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return _EXIT_NUMERICAL
    except DephaseLabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return _EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
