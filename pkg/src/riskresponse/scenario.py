"""Scenario ingestion, serialization, and sweep orchestration.

A scenario is a flat JSON object with dotted, record-prefixed keys
("core.beta0", "adherence.X0", ...). Unknown keys are rejected; missing
keys take documented defaults. Parameters of inactive families may be
present (a comparison run shares one base document across families) and are
validated but unused.

Trajectories serialize to CSV with shortest round-trip decimals and LF line
endings so that identical runs produce identical bytes. Metrics serialize
to both JSON and an aligned plain-text report.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .analysis import TrajectoryMetrics, summarize
from .core import CoreParams, StateVector
from .delay import DelayChain
from .errors import ConfigError, IntegrationError
from .formulations import (
    AdherenceParams,
    ExponentialParams,
    FractionalParams,
    SplitSusceptibleParams,
    TimeVaryingParams,
)
from .integrator import Grid, TimeSeries, integrate, validate_initial_state
from .model import FAMILIES, ModelSpec

# Schema: key -> (default, type tag, description). Type tags: "float"
# accepts any JSON number, "int" an integer, "str" a string, "path" a
# string or null. Numeric range rules live in the parameter records and in
# _INIT_KEYS below.
SCHEMA: dict[str, tuple[object, str, str]] = {
    "family": (None, "str", "one of " + ", ".join(FAMILIES)),
    "core.beta0": (0.7, "float", "baseline infectivity rate (per day)"),
    "core.tau_e": (5.0, "float", "mean latent duration (days)"),
    "core.tau_i": (10.0, "float", "mean infectious duration (days)"),
    "core.N": (1_000_000.0, "float", "total population size (persons)"),
    "time_varying.k_ramp": (3 / 500, "float", "linear decay rate of the ramp (per day)"),
    "fractional.alpha": (1 / 30, "float", "community sensitivity to prevalence (per person)"),
    "fractional.gamma": (2.0, "float", "diminishing-impact exponent"),
    "exponential.k_exp": (0.05, "float", "exponential response constant (per person)"),
    "adherence.m": (0.5, "float", "payoff weight of perceived caseload (per person per day)"),
    "adherence.c": (0.4, "float", "cost of preventative measures (per day)"),
    "adherence.X0": (0.01, "float", "initial adhering fraction, interior of (0, 1)"),
    "split.beta_f": (0.1, "float", "fear transmission rate (per day)"),
    "split.delta": (0.01, "float", "reciprocal of average reported caseload (per person)"),
    "split.mu_f": (0.2, "float", "fear relaxation rate (per day)"),
    "split.epsilon_s": (0.3, "float", "residual susceptibility of fearful individuals, in [0, 1]"),
    "split.tau_q": (3.0, "float", "mean time from infectious to quarantined (days)"),
    "delay.n": (0, "int", "information delay chain order (0 disables)"),
    "delay.tau_f": (20.0, "float", "total mean information delay (days)"),
    "grid.t0": (0.0, "float", "start time (days)"),
    "grid.t_end": (730.0, "float", "end time (days)"),
    "grid.dt": (0.05, "float", "integration step (days)"),
    "grid.sample_every": (1, "int", "record every k-th step"),
    "init.I0": (100.0, "float", "initial infectious count"),
    "init.E0": (0.0, "float", "initial latent count"),
    "init.R0": (0.0, "float", "initial removed count"),
    "init.fearS0": (0.0, "float", "initial fearful susceptible count (split family)"),
    "init.Q0": (0.0, "float", "initial quarantined count (split family)"),
    "init.F0": (0.0, "float", "initial value of every delay stage"),
    "output.csv": (None, "path", "trajectory CSV destination"),
    "output.metrics_json": (None, "path", "metrics JSON destination"),
    "output.metrics_text": (None, "path", "metrics text-report destination"),
    "output.plot_script": (None, "path", "generated plot-script destination"),
}

_INIT_KEYS = ("init.I0", "init.E0", "init.R0", "init.fearS0", "init.Q0",
              "init.F0")


@dataclass(frozen=True)
class ScenarioConfig:
    """A fully resolved run description: model, grid, initial conditions,
    and output destinations."""

    family: str
    core: CoreParams
    time_varying: TimeVaryingParams
    fractional: FractionalParams
    exponential: ExponentialParams
    adherence: AdherenceParams
    split: SplitSusceptibleParams
    delay: DelayChain
    grid: Grid
    init_I0: float
    init_E0: float
    init_R0: float
    init_fearS0: float
    init_Q0: float
    init_F0: float
    output_csv: str | None = None
    output_metrics_json: str | None = None
    output_metrics_text: str | None = None
    output_plot_script: str | None = None

    def to_model_spec(self) -> ModelSpec:
        params = {
            "constant": None,
            "time-varying": self.time_varying,
            "fractional": self.fractional,
            "exponential": self.exponential,
            "explicit": self.adherence,
            "split-susceptible": self.split,
        }[self.family]
        return ModelSpec(family=self.family, core=self.core, params=params,
                         delay=self.delay)

    def initial_state(self) -> StateVector:
        split = self.family == "split-susceptible"
        sf = self.init_fearS0 if split else None
        q = self.init_Q0 if split else None
        seeded = (self.init_I0 + self.init_E0 + self.init_R0
                  + (sf or 0.0) + (q or 0.0))
        s0 = self.core.N - seeded
        if s0 < 0:
            raise ConfigError(
                f"init: seeded compartments sum to {seeded:g}, exceeding "
                f"core.N={self.core.N:g}")
        return StateVector(
            S=s0, E=self.init_E0, I=self.init_I0, R=self.init_R0,
            stages=(self.init_F0,) * self.delay.n,
            X=self.adherence.X0 if self.family == "explicit" else None,
            Sf=sf, Q=q)

    def to_json_dict(self) -> dict:
        """All schema keys with resolved values; parsing the result
        reproduces this config exactly."""
        doc = {
            "family": self.family,
            "core.beta0": self.core.beta0,
            "core.tau_e": self.core.tau_e,
            "core.tau_i": self.core.tau_i,
            "core.N": self.core.N,
            "time_varying.k_ramp": self.time_varying.k_ramp,
            "fractional.alpha": self.fractional.alpha,
            "fractional.gamma": self.fractional.gamma,
            "exponential.k_exp": self.exponential.k_exp,
            "adherence.m": self.adherence.m,
            "adherence.c": self.adherence.c,
            "adherence.X0": self.adherence.X0,
            "split.beta_f": self.split.beta_f,
            "split.delta": self.split.delta,
            "split.mu_f": self.split.mu_f,
            "split.epsilon_s": self.split.epsilon_s,
            "split.tau_q": self.split.tau_q,
            "delay.n": self.delay.n,
            "delay.tau_f": self.delay.tau_f,
            "grid.t0": self.grid.t0,
            "grid.t_end": self.grid.t_end,
            "grid.dt": self.grid.dt,
            "grid.sample_every": self.grid.sample_every,
            "init.I0": self.init_I0,
            "init.E0": self.init_E0,
            "init.R0": self.init_R0,
            "init.fearS0": self.init_fearS0,
            "init.Q0": self.init_Q0,
            "init.F0": self.init_F0,
            "output.csv": self.output_csv,
            "output.metrics_json": self.output_metrics_json,
            "output.metrics_text": self.output_metrics_text,
            "output.plot_script": self.output_plot_script,
        }
        return doc


def _check_type(key: str, value: object) -> object:
    kind = SCHEMA[key][1]
    if kind == "str":
        if not isinstance(value, str):
            raise ConfigError(f"{key}: expected a string, got {value!r}")
        return value
    if kind == "path":
        if value is not None and not isinstance(value, str):
            raise ConfigError(f"{key}: expected a path string or null, "
                              f"got {value!r}")
        return value
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{key}: expected a number, got {value!r}")
    if kind == "int":
        if not isinstance(value, int):
            raise ConfigError(f"{key}: expected an integer, got {value!r}")
        return value
    return float(value)


def parse_config_dict(doc: dict) -> ScenarioConfig:
    """Validate a raw config mapping and resolve defaults."""
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    unknown = sorted(set(doc) - set(SCHEMA))
    if unknown:
        raise ConfigError(f"{unknown[0]}: unknown configuration key")
    if "family" not in doc:
        raise ConfigError("family: required key is missing")

    resolved: dict[str, object] = {}
    for key, (default, _, _) in SCHEMA.items():
        resolved[key] = _check_type(key, doc[key]) if key in doc else default

    family = resolved["family"]
    if family not in FAMILIES:
        raise ConfigError(f"family: unknown family {family!r} "
                          f"(expected one of {', '.join(FAMILIES)})")
    for key in _INIT_KEYS:
        if resolved[key] < 0:
            raise ConfigError(f"{key}: must be >= 0, got {resolved[key]}")

    config = ScenarioConfig(
        family=family,
        core=CoreParams(beta0=resolved["core.beta0"],
                        tau_e=resolved["core.tau_e"],
                        tau_i=resolved["core.tau_i"],
                        N=resolved["core.N"]),
        time_varying=TimeVaryingParams(k_ramp=resolved["time_varying.k_ramp"]),
        fractional=FractionalParams(alpha=resolved["fractional.alpha"],
                                    gamma=resolved["fractional.gamma"]),
        exponential=ExponentialParams(k_exp=resolved["exponential.k_exp"]),
        adherence=AdherenceParams(m=resolved["adherence.m"],
                                  c=resolved["adherence.c"],
                                  X0=resolved["adherence.X0"]),
        split=SplitSusceptibleParams(beta_f=resolved["split.beta_f"],
                                     delta=resolved["split.delta"],
                                     mu_f=resolved["split.mu_f"],
                                     epsilon_s=resolved["split.epsilon_s"],
                                     tau_q=resolved["split.tau_q"]),
        delay=DelayChain(n=resolved["delay.n"], tau_f=resolved["delay.tau_f"]),
        grid=Grid(t0=resolved["grid.t0"], t_end=resolved["grid.t_end"],
                  dt=resolved["grid.dt"],
                  sample_every=resolved["grid.sample_every"]),
        init_I0=resolved["init.I0"], init_E0=resolved["init.E0"],
        init_R0=resolved["init.R0"], init_fearS0=resolved["init.fearS0"],
        init_Q0=resolved["init.Q0"], init_F0=resolved["init.F0"],
        output_csv=resolved["output.csv"],
        output_metrics_json=resolved["output.metrics_json"],
        output_metrics_text=resolved["output.metrics_text"],
        output_plot_script=resolved["output.plot_script"],
    )
    # Cross-field consistency: family/delay pairing and initial invariants.
    spec = config.to_model_spec()
    validate_initial_state(spec, config.initial_state())
    return config


def parse_config(text: str) -> ScenarioConfig:
    """Parse a JSON config document."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON: {exc}") from None
    return parse_config_dict(doc)


def load_config(path: str | Path, overrides: dict | None = None) -> ScenarioConfig:
    """Read a config file, optionally override keys, and parse."""
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"config: no such file: {p}")
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config: invalid JSON in {p}: {exc}") from None
    if not isinstance(doc, dict):
        raise ConfigError("config: top level must be a JSON object")
    if overrides:
        doc = {**doc, **overrides}
    return parse_config_dict(doc)


def run_scenario(config: ScenarioConfig) -> tuple[TimeSeries, TrajectoryMetrics]:
    """Integrate one scenario and summarize it."""
    spec = config.to_model_spec()
    series = integrate(spec, config.initial_state(), config.grid)
    metrics = summarize(series, config.core.N)
    return series, metrics


def write_timeseries_csv(series: TimeSeries, destination: str | Path) -> int:
    """Write a trajectory as CSV and return the byte count.

    Header is ``t,<state columns>,beta_eff``; the state columns follow the
    family's layout. Floats are written as shortest round-trip decimals
    with LF line endings, so equal trajectories give equal bytes.
    """
    lines = ["t," + ",".join(series.layout.names) + ",beta_eff"]
    for i in range(len(series)):
        cells = [repr(float(series.times[i]))]
        cells += [repr(float(v)) for v in series.states[i]]
        cells.append(repr(float(series.beta_eff[i])))
        lines.append(",".join(cells))
    data = ("\n".join(lines) + "\n").encode("utf-8")
    path = Path(destination)
    try:
        path.write_bytes(data)
    except OSError as exc:
        raise ConfigError(f"output: cannot write {path}: {exc}") from None
    return len(data)


def read_timeseries_csv(path: str | Path) -> tuple[np.ndarray, dict[str, np.ndarray]]:
    """Read a trajectory CSV written by this package.

    Returns (times, columns by name). Malformed rows raise ConfigError with
    the 1-based line number.
    """
    p = Path(path)
    if not p.is_file():
        raise ConfigError(f"csv: no such file: {p}")
    lines = p.read_text(encoding="utf-8").splitlines()
    if not lines:
        raise ConfigError("csv line 1: missing header")
    header = lines[0].split(",")
    if header[0] != "t" or header[-1] != "beta_eff":
        raise ConfigError("csv line 1: header must start with 't' and end "
                          "with 'beta_eff'")
    for required in ("S", "E", "I", "R"):
        if required not in header:
            raise ConfigError(f"csv line 1: missing column {required!r}")
    rows = []
    for lineno, line in enumerate(lines[1:], start=2):
        parts = line.split(",")
        if len(parts) != len(header):
            raise ConfigError(f"csv line {lineno}: expected {len(header)} "
                              f"fields, got {len(parts)}")
        try:
            rows.append([float(part) for part in parts])
        except ValueError:
            raise ConfigError(f"csv line {lineno}: non-numeric field") from None
    table = np.array(rows, dtype=float) if rows else np.empty((0, len(header)))
    columns = {name: table[:, i] for i, name in enumerate(header)}
    return columns["t"], columns


def metrics_to_dict(metrics: TrajectoryMetrics) -> dict:
    return {
        "wave_count": metrics.wave_count,
        "max_peak": metrics.max_peak,
        "mean_period": metrics.mean_period,
        "attack_rate": metrics.attack_rate,
        "equilibrium": metrics.equilibrium,
        "equilibrium_band": metrics.equilibrium_band,
        "peaks": [{"time": p.time, "height": p.height,
                   "prominence": p.prominence} for p in metrics.peaks],
    }


def metrics_to_json(metrics: TrajectoryMetrics) -> str:
    return json.dumps(metrics_to_dict(metrics), indent=2, sort_keys=True) + "\n"


def format_metrics_text(metrics: TrajectoryMetrics) -> str:
    """Aligned key-value report."""
    mean_period = ("n/a" if metrics.mean_period is None
                   else repr(metrics.mean_period))
    rows = [
        ("wave_count", str(metrics.wave_count)),
        ("max_peak", repr(metrics.max_peak)),
        ("mean_period", mean_period),
        ("attack_rate", repr(metrics.attack_rate)),
        ("equilibrium", "yes" if metrics.equilibrium else "no"),
        ("equilibrium_band", repr(metrics.equilibrium_band)),
    ]
    for i, peak in enumerate(metrics.peaks, start=1):
        rows.append((f"peak[{i}]", f"t={peak.time!r} height={peak.height!r} "
                                   f"prominence={peak.prominence!r}"))
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v}" for k, v in rows) + "\n"


_PLOT_TEMPLATE = """\
#!/usr/bin/env python3
# Generated plot script: renders {csv} with matplotlib. Not executed by the
# simulator; run it yourself with a Python that has matplotlib installed.
import csv

import matplotlib.pyplot as plt

columns = {{}}
with open({csv!r}, newline="") as fh:
    reader = csv.DictReader(fh)
    for row in reader:
        for key, value in row.items():
            columns.setdefault(key, []).append(float(value))

fig, (ax_i, ax_b) = plt.subplots(2, 1, sharex=True, figsize=(9, 6))
ax_i.plot(columns["t"], columns["I"], label="infectious")
ax_i.set_ylabel("persons")
ax_i.legend()
ax_b.plot(columns["t"], columns["beta_eff"], label="effective beta", color="tab:red")
ax_b.set_xlabel("time (days)")
ax_b.set_ylabel("per day")
ax_b.legend()
fig.tight_layout()
fig.savefig({png!r}, dpi=150)
print("wrote", {png!r})
"""


def plot_script_text(csv_path: str | Path) -> str:
    """Text of a standalone script that plots a trajectory CSV."""
    csv_path = str(csv_path)
    png = str(Path(csv_path).with_suffix(".png"))
    return _PLOT_TEMPLATE.format(csv=csv_path, png=png)


def write_outputs(config: ScenarioConfig, series: TimeSeries,
                  metrics: TrajectoryMetrics,
                  csv_override: str | Path | None = None) -> list[Path]:
    """Write every configured output; returns the written paths."""
    written: list[Path] = []
    csv_path = csv_override if csv_override is not None else config.output_csv
    if csv_path is not None:
        write_timeseries_csv(series, csv_path)
        written.append(Path(csv_path))
    if config.output_metrics_json is not None:
        Path(config.output_metrics_json).write_text(metrics_to_json(metrics),
                                                    encoding="utf-8")
        written.append(Path(config.output_metrics_json))
    if config.output_metrics_text is not None:
        Path(config.output_metrics_text).write_text(
            format_metrics_text(metrics), encoding="utf-8")
        written.append(Path(config.output_metrics_text))
    if config.output_plot_script is not None:
        if csv_path is None:
            raise ConfigError("output.plot_script: requires a trajectory CSV "
                              "destination (output.csv or --out)")
        Path(config.output_plot_script).write_text(plot_script_text(csv_path),
                                                   encoding="utf-8")
        written.append(Path(config.output_plot_script))
    return written


@dataclass(frozen=True)
class SweepSpec:
    """A base document plus one or two swept keys with their value lists.

    With two keys the runs iterate in row-major order: the first key is the
    outer loop. Every value list must be non-empty and every key must exist
    in the schema.
    """

    base: dict
    parameters: tuple[str, ...]
    values: tuple[tuple, ...]

    def __post_init__(self):
        if not (1 <= len(self.parameters) <= 2):
            raise ConfigError("sweep: expected one or two swept parameters, "
                              f"got {len(self.parameters)}")
        if len(self.values) != len(self.parameters):
            raise ConfigError("sweep: one value list per swept parameter")
        for name, values in zip(self.parameters, self.values):
            if name not in SCHEMA:
                raise ConfigError(f"sweep: {name!r} is not a configuration key")
            if not values:
                raise ConfigError(f"sweep: empty value list for {name!r}")


@dataclass(frozen=True)
class SweepRow:
    """Outcome of one sweep combination: metrics, or the failure message."""

    values: tuple
    metrics: TrajectoryMetrics | None
    error: str | None = None


def run_sweep(sweep: SweepSpec) -> list[SweepRow]:
    """Run one simulation per value combination, in input order.

    Failures are captured per row; the remaining combinations still run.
    Each row's metrics match a standalone run of the overridden config.
    """
    rows: list[SweepRow] = []
    for combo in itertools.product(*sweep.values):
        doc = dict(sweep.base)
        for key, value in zip(sweep.parameters, combo):
            doc[key] = value
        try:
            config = parse_config_dict(doc)
            _, metrics = run_scenario(config)
            rows.append(SweepRow(values=combo, metrics=metrics))
        except (ConfigError, IntegrationError) as exc:
            rows.append(SweepRow(values=combo, metrics=None, error=str(exc)))
    return rows
