"""Model description and right-hand-side assembly.

A ModelSpec names one transmission family, carries the core parameters,
the family's own parameter record, and the delay-chain configuration; it is
the single source of truth for a run. ``assemble_rhs`` turns a spec into a
pure derivative function over flat state arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from .core import CoreParams, StateLayout, StateVector, seir_rhs
from .delay import DelayChain, delay_chain_rhs, perceived_signal
from .errors import ConfigError
from .formulations import (
    AdherenceParams,
    ExponentialParams,
    FractionalParams,
    SplitSusceptibleParams,
    TimeVaryingParams,
    beta_adherence,
    beta_constant,
    beta_exponential,
    beta_fractional,
    beta_time_varying,
    adherence_rhs,
    split_susceptible_rhs,
)

FAMILIES = ("constant", "time-varying", "fractional", "exponential",
            "explicit", "split-susceptible")
EXOGENOUS_FAMILIES = ("constant", "time-varying")

_PARAM_TYPES = {
    "constant": type(None),
    "time-varying": TimeVaryingParams,
    "fractional": FractionalParams,
    "exponential": ExponentialParams,
    "explicit": AdherenceParams,
    "split-susceptible": SplitSusceptibleParams,
}

FamilyParams = (TimeVaryingParams | FractionalParams | ExponentialParams
                | AdherenceParams | SplitSusceptibleParams | None)


@dataclass(frozen=True)
class ModelSpec:
    """One family plus everything needed to evaluate its derivatives."""

    family: str
    core: CoreParams = field(default_factory=CoreParams)
    params: FamilyParams = None
    delay: DelayChain = field(default_factory=DelayChain)

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ConfigError(f"family: unknown family {self.family!r} "
                              f"(expected one of {', '.join(FAMILIES)})")
        expected = _PARAM_TYPES[self.family]
        if not isinstance(self.params, expected):
            raise ConfigError(
                f"params: family {self.family!r} requires "
                f"{expected.__name__} parameters, got "
                f"{type(self.params).__name__}")
        if self.delay.n >= 1 and self.family in EXOGENOUS_FAMILIES:
            raise ConfigError(
                f"delay.n: exogenous family {self.family!r} has no disease "
                f"signal to delay; delay.n must be 0")
        if self.delay.n >= 1 and self.family == "split-susceptible":
            raise ConfigError(
                "delay.n: the split-susceptible family reads the quarantine "
                "compartment directly; delay.n must be 0")

    def layout(self) -> StateLayout:
        names = ["S", "E", "I", "R"]
        names += [f"F{i}" for i in range(1, self.delay.n + 1)]
        if self.family == "explicit":
            names.append("X")
        if self.family == "split-susceptible":
            names += ["Sf", "Q"]
        return StateLayout(tuple(names))


def beta_function(spec: ModelSpec) -> Callable[[float, StateVector], float]:
    """Effective transmission rate of the active family at (t, state).

    For the split-susceptible family this is the susceptible-weighted rate
    beta0*(S + epsilon_s*Sf)/(S + Sf), falling back to beta0 when no
    susceptibles remain; the other families follow their defining formulas.
    """
    core, p, chain = spec.core, spec.params, spec.delay
    if spec.family == "constant":
        return lambda t, sv: beta_constant(core)
    if spec.family == "time-varying":
        return lambda t, sv: beta_time_varying(t, core, p)
    if spec.family == "fractional":
        return lambda t, sv: beta_fractional(
            perceived_signal(sv.I, sv.stages, chain), core, p)
    if spec.family == "exponential":
        return lambda t, sv: beta_exponential(
            perceived_signal(sv.I, sv.stages, chain), core, p)
    if spec.family == "explicit":
        return lambda t, sv: beta_adherence(sv.X, core)

    def split_beta(t, sv):
        pool = sv.S + sv.Sf
        if pool <= 0:
            return core.beta0
        return core.beta0 * (sv.S + p.epsilon_s * sv.Sf) / pool

    return split_beta


def assemble_rhs(spec: ModelSpec) -> Callable[[float, np.ndarray], np.ndarray]:
    """Build the full derivative function for a spec.

    The returned function is pure: it maps (t, flat state) to the flat
    derivative without mutating either. Component order follows
    ``spec.layout()``.
    """
    layout = spec.layout()
    core, p, chain = spec.core, spec.params, spec.delay
    beta_of = beta_function(spec)

    if spec.family == "split-susceptible":

        def rhs_split(t: float, y: np.ndarray) -> np.ndarray:
            sv = layout.unpack(y)
            return layout.pack(split_susceptible_rhs(sv, core, p))

        return rhs_split

    explicit = spec.family == "explicit"

    def rhs(t: float, y: np.ndarray) -> np.ndarray:
        sv = layout.unpack(y)
        disease = seir_rhs(sv, core, beta_of(t, sv))
        dstages = delay_chain_rhs(sv.I, sv.stages, chain)
        dx = None
        if explicit:
            signal = perceived_signal(sv.I, sv.stages, chain)
            dx = adherence_rhs(sv.X, signal, p)
        return layout.pack(StateVector(S=disease.S, E=disease.E, I=disease.I,
                                       R=disease.R, stages=dstages, X=dx))

    return rhs
