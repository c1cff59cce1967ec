"""Transmission-response formulations.

Each family modifies the effective transmission rate in its own way:

* constant:         beta0, no response at all
* time-varying:     a fixed linear ramp down to zero, no disease feedback
* fractional:       beta0 / (1 + alpha*F)^gamma, F the perceived caseload
* exponential:      beta0 * exp(-k*F)
* explicit:         beta0 * (1 - X), X an adhering fraction evolving by
                    replicator dynamics dX/dt = X(1-X)(m*F - c)
* split-susceptible: a two-class susceptible pool (calm / fearful) with
                    fear transmitted by reported quarantine numbers

Every function here is pure; all state movement is done by the integrator.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .core import CoreParams, StateVector
from .errors import ConfigError


@dataclass(frozen=True, slots=True)
class TimeVaryingParams:
    """k_ramp: linear decay rate of transmission (per day); beta reaches
    zero at t = 1/k_ramp."""

    k_ramp: float = 3 / 500

    def __post_init__(self):
        if not (self.k_ramp > 0):
            raise ConfigError(f"time_varying.k_ramp: must be > 0, got {self.k_ramp}")


@dataclass(frozen=True, slots=True)
class FractionalParams:
    """alpha: community sensitivity to prevalence (per person);
    gamma: diminishing-impact exponent (dimensionless)."""

    alpha: float = 1 / 30
    gamma: float = 2.0

    def __post_init__(self):
        if not (self.alpha >= 0):
            raise ConfigError(f"fractional.alpha: must be >= 0, got {self.alpha}")
        if not (self.gamma >= 0):
            raise ConfigError(f"fractional.gamma: must be >= 0, got {self.gamma}")


@dataclass(frozen=True, slots=True)
class ExponentialParams:
    """k_exp: proportionality constant (per person)."""

    k_exp: float = 0.05

    def __post_init__(self):
        if not (self.k_exp >= 0):
            raise ConfigError(f"exponential.k_exp: must be >= 0, got {self.k_exp}")


@dataclass(frozen=True, slots=True)
class AdherenceParams:
    """Replicator-dynamics parameters for the explicit family.

    m: payoff weight of the perceived caseload (per person per day)
    c: cost of preventative measures (per day)
    X0: initial adhering fraction; must be interior because X = 0 and X = 1
        are absorbing fixed points of the replicator equation.
    """

    m: float = 0.5
    c: float = 0.4
    X0: float = 0.01

    def __post_init__(self):
        if not (self.m >= 0):
            raise ConfigError(f"adherence.m: must be >= 0, got {self.m}")
        if not (self.c >= 0):
            raise ConfigError(f"adherence.c: must be >= 0, got {self.c}")
        if not (0 < self.X0 < 1):
            raise ConfigError(
                f"adherence.X0: must lie strictly inside (0, 1), got {self.X0}")


@dataclass(frozen=True, slots=True)
class SplitSusceptibleParams:
    """Fear-flow parameters for the split-susceptible family.

    beta_f: fear transmission rate (per day)
    delta: reciprocal of the average reported caseload (per person)
    mu_f: fear relaxation rate (per day)
    epsilon_s: residual susceptibility multiplier for fearful individuals
    tau_q: mean time from infectious to quarantined (days)
    """

    beta_f: float = 0.1
    delta: float = 0.01
    mu_f: float = 0.2
    epsilon_s: float = 0.3
    tau_q: float = 3.0

    def __post_init__(self):
        if not (self.beta_f >= 0):
            raise ConfigError(f"split.beta_f: must be >= 0, got {self.beta_f}")
        if not (self.delta >= 0):
            raise ConfigError(f"split.delta: must be >= 0, got {self.delta}")
        if not (self.mu_f >= 0):
            raise ConfigError(f"split.mu_f: must be >= 0, got {self.mu_f}")
        if not (0 <= self.epsilon_s <= 1):
            raise ConfigError(
                f"split.epsilon_s: must lie in [0, 1], got {self.epsilon_s}")
        if not (self.tau_q > 0):
            raise ConfigError(f"split.tau_q: must be > 0, got {self.tau_q}")


def beta_constant(core: CoreParams) -> float:
    """Constant transmission: beta0 regardless of time or state."""
    return core.beta0


def beta_time_varying(t: float, core: CoreParams, p: TimeVaryingParams) -> float:
    """Linear ramp beta0*(1 - k*t) for 0 <= t <= 1/k, exactly zero after.

    Continuous at t = 1/k. Callers supply t >= 0.
    """
    if t * p.k_ramp >= 1.0:
        return 0.0
    return core.beta0 * (1.0 - p.k_ramp * t)


def beta_fractional(F: float, core: CoreParams, p: FractionalParams) -> float:
    """beta0 / (1 + alpha*F)^gamma; monotone non-increasing in F >= 0."""
    return core.beta0 / (1.0 + p.alpha * F) ** p.gamma


def beta_exponential(F: float, core: CoreParams, p: ExponentialParams) -> float:
    """beta0 * exp(-k*F)."""
    return core.beta0 * math.exp(-p.k_exp * F)


def beta_adherence(X: float, core: CoreParams) -> float:
    """beta0 * (1 - X): only the non-adhering fraction transmits at full rate."""
    return core.beta0 * (1.0 - X)


def adherence_rhs(X: float, F: float, p: AdherenceParams) -> float:
    """Replicator derivative X(1-X)(m*F - c).

    Zero at X in {0, 1}; on the interior its sign equals the sign of the
    payoff difference m*F - c.
    """
    return X * (1.0 - X) * (p.m * F - p.c)


def fear_transfer_rate(S: float, Q: float, p: SplitSusceptibleParams) -> float:
    """Flow of susceptibles becoming fearful: beta_f * S * (1 - exp(-delta*Q)).

    Saturates at beta_f*S as the reported quarantine load delta*Q grows.
    """
    return p.beta_f * S * (1.0 - math.exp(-p.delta * Q))


def fear_relaxation_rate(Sf: float, S: float, R: float, N: float,
                         p: SplitSusceptibleParams) -> float:
    """Flow of fearful individuals relaxing back: mu_f * Sf * (S + R) / N."""
    return p.mu_f * Sf * (S + R) / N


def split_susceptible_rhs(state: StateVector, core: CoreParams,
                          p: SplitSusceptibleParams) -> StateVector:
    """Derivatives for the split-susceptible family (S, Sf, I, Q, R).

    Calm susceptibles are infected at beta0*S*I/N, fearful ones at the
    reduced rate epsilon_s*beta0*Sf*I/N. Fear moves S -> Sf at the fear
    transfer rate and relaxes Sf -> S. Infectious individuals are
    quarantined at I/tau_q and released recovered at Q/tau_i. There is no
    latent stage in this family, so E carries no flow. The person
    derivatives sum to zero.
    """
    if state.Sf is None or state.Q is None:
        raise ConfigError(
            "split_susceptible_rhs: state has no Sf/Q compartments "
            "(family mismatch)")
    infection_calm = core.beta0 * state.S * state.I / core.N
    infection_fearful = p.epsilon_s * core.beta0 * state.Sf * state.I / core.N
    fear = fear_transfer_rate(state.S, state.Q, p)
    relax = fear_relaxation_rate(state.Sf, state.S, state.R, core.N, p)
    quarantine = state.I / p.tau_q
    release = state.Q / core.tau_i
    return StateVector(
        S=-infection_calm - fear + relax,
        E=0.0,
        I=infection_calm + infection_fearful - quarantine,
        R=release,
        Sf=fear - relax - infection_fearful,
        Q=quarantine - release,
    )
