"""Epidemic simulation with risk-response transmission feedback.

Six transmission families over one SEIR core: exogenous constant and
time-varying rates, implicit fractional and exponential feedback on a
(possibly delayed) perceived caseload, explicit adherence dynamics, and a
split-susceptible fear model. Deterministic fixed-step integration,
trajectory metrics, JSON scenario configs, and a CLI.
"""

from .analysis import (
    Peak,
    TrajectoryMetrics,
    attack_rate,
    detect_equilibrium,
    find_peaks,
    oscillation_metrics,
    summarize,
)
from .core import CoreParams, StateLayout, StateVector, basic_reproduction_number, seir_rhs
from .delay import DelayChain, delay_chain_rhs, perceived_signal
from .errors import ConfigError, IntegrationError
from .formulations import (
    AdherenceParams,
    ExponentialParams,
    FractionalParams,
    SplitSusceptibleParams,
    TimeVaryingParams,
    adherence_rhs,
    beta_adherence,
    beta_constant,
    beta_exponential,
    beta_fractional,
    beta_time_varying,
    fear_relaxation_rate,
    fear_transfer_rate,
    split_susceptible_rhs,
)
from .integrator import Grid, TimeSeries, integrate, rk4_step
from .model import FAMILIES, ModelSpec, assemble_rhs, beta_function
from .scenario import (
    ScenarioConfig,
    SweepRow,
    SweepSpec,
    parse_config,
    run_scenario,
    run_sweep,
    write_timeseries_csv,
)

__version__ = "0.1.0"

__all__ = [
    "AdherenceParams", "ConfigError", "CoreParams", "DelayChain",
    "ExponentialParams", "FAMILIES", "FractionalParams", "Grid",
    "IntegrationError", "ModelSpec", "Peak", "ScenarioConfig",
    "SplitSusceptibleParams", "StateLayout", "StateVector", "SweepRow",
    "SweepSpec", "TimeSeries", "TimeVaryingParams", "TrajectoryMetrics",
    "adherence_rhs", "assemble_rhs", "attack_rate",
    "basic_reproduction_number", "beta_adherence", "beta_constant",
    "beta_exponential", "beta_fractional", "beta_function",
    "beta_time_varying", "delay_chain_rhs", "detect_equilibrium",
    "fear_relaxation_rate", "fear_transfer_rate", "find_peaks", "integrate",
    "oscillation_metrics", "parse_config", "perceived_signal", "rk4_step",
    "run_scenario", "run_sweep", "seir_rhs", "split_susceptible_rhs",
    "summarize", "write_timeseries_csv",
]
