"""SEIR disease core: parameters, the shared state vector, and the base
transmission/progression derivatives.

All quantities are absolute person counts on a closed population of size N;
rates are per day. The infection term is frequency dependent,
``beta_eff * S * I / N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError


@dataclass(frozen=True, slots=True)
class CoreParams:
    """Baseline disease parameters shared by every transmission family.

    beta0   baseline infectivity rate (per day)
    tau_e   mean latent duration (days)
    tau_i   mean infectious duration (days)
    N       total population size (persons)
    """

    beta0: float = 0.7
    tau_e: float = 5.0
    tau_i: float = 10.0
    N: float = 1_000_000.0

    def __post_init__(self):
        if not (self.beta0 >= 0):
            raise ConfigError(f"core.beta0: must be >= 0, got {self.beta0}")
        if not (self.tau_e > 0):
            raise ConfigError(f"core.tau_e: must be > 0, got {self.tau_e}")
        if not (self.tau_i > 0):
            raise ConfigError(f"core.tau_i: must be > 0, got {self.tau_i}")
        if not (self.N > 0):
            raise ConfigError(f"core.N: must be > 0, got {self.N}")


@dataclass(frozen=True, slots=True)
class StateVector:
    """Full dynamical state shared by every family.

    S, E, I, R are person counts. ``stages`` holds the information-delay
    chain F1..Fn (empty when no delay is configured). ``X`` is the adhering
    fraction (explicit family only). ``Sf`` and ``Q`` are the fearful
    susceptible and quarantined counts (split-susceptible family only).
    Absent components are None, not zero, so shape mismatches fail loudly.
    """

    S: float
    E: float
    I: float
    R: float
    stages: tuple[float, ...] = ()
    X: float | None = None
    Sf: float | None = None
    Q: float | None = None

    def person_total(self) -> float:
        """Sum of all person compartments present in this state."""
        total = self.S + self.E + self.I + self.R
        if self.Sf is not None:
            total += self.Sf
        if self.Q is not None:
            total += self.Q
        return total


# Columns that carry persons (delay stages and X are information states).
_INFO_PREFIXES = ("F", "X")


@dataclass(frozen=True)
class StateLayout:
    """Maps between StateVector fields and a flat float array.

    The column order is the on-disk order: S, E, I, R, then F1..Fn, then X,
    then Sf, Q. Which optional columns exist is fixed by the model family.
    """

    names: tuple[str, ...]
    index: dict[str, int] = field(init=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "index", {n: i for i, n in enumerate(self.names)})

    @property
    def size(self) -> int:
        return len(self.names)

    @property
    def n_stages(self) -> int:
        return sum(1 for n in self.names if n.startswith("F"))

    @property
    def has_x(self) -> bool:
        return "X" in self.index

    @property
    def has_split(self) -> bool:
        return "Sf" in self.index

    def person_indices(self) -> tuple[int, ...]:
        return tuple(i for i, n in enumerate(self.names)
                     if not n.startswith(_INFO_PREFIXES))

    def pack(self, state: StateVector) -> np.ndarray:
        """Flatten a StateVector into the layout's array order."""
        if len(state.stages) != self.n_stages:
            raise ConfigError(
                f"state has {len(state.stages)} delay stages, layout expects "
                f"{self.n_stages}")
        if self.has_x != (state.X is not None):
            raise ConfigError("state X presence does not match the layout")
        if self.has_split != (state.Sf is not None and state.Q is not None):
            raise ConfigError("state Sf/Q presence does not match the layout")
        values = [state.S, state.E, state.I, state.R, *state.stages]
        if self.has_x:
            values.append(state.X)
        if self.has_split:
            values.extend((state.Sf, state.Q))
        return np.array(values, dtype=float)

    def unpack(self, y: np.ndarray) -> StateVector:
        if len(y) != self.size:
            raise ConfigError(f"array of length {len(y)} does not fit layout "
                              f"of size {self.size}")
        n = self.n_stages
        return StateVector(
            S=y[0], E=y[1], I=y[2], R=y[3],
            stages=tuple(y[4:4 + n]),
            X=y[self.index["X"]] if self.has_x else None,
            Sf=y[self.index["Sf"]] if self.has_split else None,
            Q=y[self.index["Q"]] if self.has_split else None,
        )


def basic_reproduction_number(core: CoreParams) -> float:
    """R0 of the baseline core: beta0 * tau_i."""
    return core.beta0 * core.tau_i


def seir_rhs(state: StateVector, core: CoreParams, beta_eff: float) -> StateVector:
    """Derivatives of the S, E, I, R compartments under transmission rate
    ``beta_eff``.

    Flows: infection beta_eff*S*I/N, progression E/tau_e, recovery I/tau_i.
    The four derivatives sum to zero (closed population). Non-finite inputs
    are rejected with the offending field named.
    """
    for name, value in (("S", state.S), ("E", state.E), ("I", state.I),
                        ("R", state.R), ("beta_eff", beta_eff)):
        if not math.isfinite(value):
            raise ConfigError(f"seir_rhs: non-finite input in {name}: {value}")
    infection = beta_eff * state.S * state.I / core.N
    progression = state.E / core.tau_e
    recovery = state.I / core.tau_i
    return StateVector(
        S=-infection,
        E=infection - progression,
        I=progression - recovery,
        R=recovery,
    )
