"""Command-line front end.

Subcommands:

* simulate: run one scenario, write its trajectory CSV, print metrics
* compare: run one base scenario across families or delay orders
* sweep: run a one- or two-parameter sweep and tabulate metrics
* metrics: recompute metrics from an existing trajectory CSV

Exit codes: 0 success, 2 configuration error, 3 integration failure.
Re-running any command on unchanged inputs reproduces identical outputs.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from .analysis import TrajectoryMetrics, summarize_arrays
from .errors import ConfigError, IntegrationError
from .scenario import (
    SweepSpec,
    format_metrics_text,
    load_config,
    parse_config_dict,
    read_timeseries_csv,
    run_scenario,
    run_sweep,
    write_outputs,
    write_timeseries_csv,
)

_TABLE_COLUMNS = ("variant", "maxPeak", "waveCount", "meanPeriod",
                  "attackRate", "equilibrium")


def _fmt(value) -> str:
    if value is None:
        return "n/a"
    if isinstance(value, bool):
        return "yes" if value else "no"
    if isinstance(value, float):
        return f"{value:.6g}"
    return str(value)


def _metrics_row(name: str, metrics: TrajectoryMetrics) -> tuple[str, ...]:
    return (name, _fmt(metrics.max_peak), _fmt(metrics.wave_count),
            _fmt(metrics.mean_period), _fmt(metrics.attack_rate),
            _fmt(metrics.equilibrium))


def _print_table(header: tuple[str, ...], rows: list[tuple[str, ...]]) -> None:
    widths = [max(len(header[i]), *(len(r[i]) for r in rows)) if rows
              else len(header[i]) for i in range(len(header))]
    print("  ".join(h.ljust(w) for h, w in zip(header, widths)))
    for row in rows:
        print("  ".join(c.ljust(w) for c, w in zip(row, widths)))


def _read_config_doc(path: str) -> dict:
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config: no such file: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {p}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    return doc


def _cmd_simulate(args) -> int:
    overrides = {}
    if args.dt is not None:
        overrides["grid.dt"] = args.dt
    if args.t_end is not None:
        overrides["grid.t_end"] = args.t_end
    config = load_config(args.config, overrides)
    series, metrics = run_scenario(config)
    write_outputs(config, series, metrics, csv_override=args.out)
    print(format_metrics_text(metrics), end="")
    return 0


def _variants(args) -> list[tuple[str, dict]]:
    doc = _read_config_doc(args.config)
    variants: list[tuple[str, dict]] = []
    if args.families is not None:
        names = [f.strip() for f in args.families.split(",") if f.strip()]
        if not names:
            raise ConfigError("--families: empty variant list")
        for name in names:
            variants.append((name, {**doc, "family": name}))
    else:
        items = [s.strip() for s in args.delay_orders.split(",") if s.strip()]
        if not items:
            raise ConfigError("--delay-orders: empty variant list")
        for item in items:
            try:
                order = int(item)
            except ValueError:
                raise ConfigError(f"--delay-orders: not an integer: {item!r}"
                                  ) from None
            variants.append((f"n{order}", {**doc, "delay.n": order}))
    return variants


def _cmd_compare(args) -> int:
    variants = _variants(args)
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    rows: list[tuple[str, ...]] = []
    failures: list[str] = []
    for name, doc in variants:
        try:
            config = parse_config_dict(doc)
            series, metrics = run_scenario(config)
            write_timeseries_csv(series, out_dir / f"{name}.csv")
            rows.append(_metrics_row(name, metrics))
        except (ConfigError, IntegrationError) as exc:
            failures.append(f"{name}: {exc}")
            rows.append((name, "error", "", "", "", ""))
    _print_table(_TABLE_COLUMNS, rows)
    table_path = out_dir / "metrics.csv"
    table_lines = [",".join(_TABLE_COLUMNS)]
    table_lines += [",".join(row) for row in rows]
    table_path.write_text("\n".join(table_lines) + "\n", encoding="utf-8")
    for failure in failures:
        print(f"variant failed: {failure}", file=sys.stderr)
    return 3 if failures else 0


def _cmd_sweep(args) -> int:
    doc = _read_config_doc(args.config)
    parameters = [args.param]
    values = [_parse_values(args.param, args.values)]
    if (args.param2 is None) != (args.values2 is None):
        raise ConfigError("--param2 and --values2 must be given together")
    if args.param2 is not None:
        parameters.append(args.param2)
        values.append(_parse_values(args.param2, args.values2))
    sweep = SweepSpec(base=doc, parameters=tuple(parameters),
                      values=tuple(tuple(v) for v in values))
    results = run_sweep(sweep)

    header = tuple(parameters) + ("maxPeak", "waveCount", "meanPeriod",
                                  "attackRate", "equilibrium", "error")
    rows = []
    for row in results:
        cells = tuple(_fmt(v) for v in row.values)
        if row.metrics is not None:
            m = row.metrics
            cells += (_fmt(m.max_peak), _fmt(m.wave_count),
                      _fmt(m.mean_period), _fmt(m.attack_rate),
                      _fmt(m.equilibrium), "")
        else:
            cells += ("", "", "", "", "", row.error or "failed")
        rows.append(cells)
    _print_table(header, rows)
    if args.out is not None:
        lines = [",".join(header)]
        lines += [",".join(cell.replace(",", ";") for cell in row)
                  for row in rows]
        Path(args.out).write_text("\n".join(lines) + "\n", encoding="utf-8")
    return 3 if any(r.error for r in results) else 0


def _parse_values(name: str, text: str) -> list:
    values = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError:
            values.append(item)
    if not values:
        raise ConfigError(f"--values: empty value list for {name!r}")
    return values


def _cmd_metrics(args) -> int:
    times, columns = read_timeseries_csv(args.infile)
    if len(times) == 0:
        metrics = summarize_arrays(times, columns["I"], attack=0.0)
    else:
        person_cols = [c for c in ("S", "E", "I", "R", "Sf", "Q")
                       if c in columns]
        population = float(sum(columns[c][0] for c in person_cols))
        attack = float(columns["R"][-1]) / population
        metrics = summarize_arrays(times, columns["I"], attack=attack)
    print(format_metrics_text(metrics), end="")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="riskresponse",
        description="Epidemic simulator with risk-response transmission "
                    "feedback: exogenous ramps, implicit fractional and "
                    "exponential feedback, explicit adherence dynamics, and "
                    "a split-susceptible fear model over one SEIR core.")
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run one scenario")
    p_sim.add_argument("--config", required=True,
                       help="path to a JSON scenario config")
    p_sim.add_argument("--out", required=True,
                       help="trajectory CSV destination (overrides output.csv)")
    p_sim.add_argument("--dt", type=float, default=None,
                       help="override grid.dt (days)")
    p_sim.add_argument("--t-end", type=float, default=None, dest="t_end",
                       help="override grid.t_end (days)")
    p_sim.add_argument("--seedless", action="store_true",
                       help="accepted for script compatibility; the simulator "
                            "is deterministic and uses no randomness")
    p_sim.set_defaults(handler=_cmd_simulate)

    p_cmp = sub.add_parser("compare",
                           help="run one base scenario across variants")
    p_cmp.add_argument("--config", required=True,
                       help="path to the base JSON scenario config")
    group = p_cmp.add_mutually_exclusive_group(required=True)
    group.add_argument("--families",
                       help="comma-separated family names to compare")
    group.add_argument("--delay-orders", dest="delay_orders",
                       help="comma-separated delay chain orders to compare")
    p_cmp.add_argument("--out-dir", required=True, dest="out_dir",
                       help="directory for per-variant CSVs and metrics.csv")
    p_cmp.set_defaults(handler=_cmd_compare)

    p_swp = sub.add_parser("sweep", help="sweep one or two parameters")
    p_swp.add_argument("--config", required=True,
                       help="path to the base JSON scenario config")
    p_swp.add_argument("--param", required=True,
                       help="configuration key to sweep (e.g. adherence.c)")
    p_swp.add_argument("--values", required=True,
                       help="comma-separated values for --param")
    p_swp.add_argument("--param2", default=None,
                       help="optional second key (inner loop)")
    p_swp.add_argument("--values2", default=None,
                       help="comma-separated values for --param2")
    p_swp.add_argument("--out", default=None,
                       help="optional CSV destination for the metrics table")
    p_swp.set_defaults(handler=_cmd_sweep)

    p_met = sub.add_parser("metrics",
                           help="compute metrics from an existing CSV")
    p_met.add_argument("--in", required=True, dest="infile",
                       help="trajectory CSV produced by simulate/compare")
    p_met.set_defaults(handler=_cmd_metrics)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except IntegrationError as exc:
        print(f"integration failure: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
