"""Deterministic fixed-step classical Runge-Kutta integration.

A fixed step keeps runs bit-reproducible: identical (spec, init, grid)
inputs give identical trajectories, which the serialization layer turns
into identical bytes. The default step of 0.05 days resolves every family
at the default parameter scales; there is no adaptivity, no clipping, and
no event handling. Invariant breaches stop the run loudly instead of being
masked.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import StateLayout, StateVector
from .errors import ConfigError, IntegrationError
from .model import ModelSpec, assemble_rhs, beta_function

# Tolerated numerical undershoot of person compartments, relative to N.
NEGATIVITY_TOL = 1e-6
# Conservation drift allowance at every sample, relative to N.
CONSERVATION_TOL = 1e-6
# The adherence fraction must stay inside [-X_TOL, 1 + X_TOL].
X_TOL = 1e-9


@dataclass(frozen=True, slots=True)
class Grid:
    """Uniform time grid: integrate [t0, t_end] with step dt, recording
    every ``sample_every``-th step (plus the initial and final states).

    The span is rounded to a whole number of steps; the final time lands
    within one dt of t_end. A zero-length span yields an empty trajectory.
    """

    t0: float = 0.0
    t_end: float = 730.0
    dt: float = 0.05
    sample_every: int = 1

    def __post_init__(self):
        if not (self.dt > 0):
            raise ConfigError(f"grid.dt: must be > 0, got {self.dt}")
        if not (self.t_end >= self.t0):
            raise ConfigError(f"grid.t_end: must be >= grid.t0, got "
                              f"t0={self.t0}, t_end={self.t_end}")
        if not isinstance(self.sample_every, int) or self.sample_every < 1:
            raise ConfigError(f"grid.sample_every: must be a positive integer, "
                              f"got {self.sample_every}")

    @property
    def n_steps(self) -> int:
        return round((self.t_end - self.t0) / self.dt)

    def time_at(self, step: int) -> float:
        return self.t0 + step * self.dt


@dataclass(frozen=True)
class TimeSeries:
    """Sampled trajectory: times, state rows (layout order), effective beta."""

    times: np.ndarray
    states: np.ndarray
    beta_eff: np.ndarray
    layout: StateLayout

    def __len__(self) -> int:
        return len(self.times)

    def column(self, name: str) -> np.ndarray:
        return self.states[:, self.layout.index[name]]

    def state_at(self, i: int) -> StateVector:
        return self.layout.unpack(self.states[i])

    def person_totals(self) -> np.ndarray:
        return self.states[:, self.layout.person_indices()].sum(axis=1)


def rk4_step(rhs, t: float, y: np.ndarray, dt: float,
             names: tuple[str, ...] | None = None) -> np.ndarray:
    """One classical 4-stage Runge-Kutta update.

    Local error is O(dt^5) for smooth right-hand sides. A non-finite
    derivative aborts with the time and offending component in the message.
    """
    k1 = rhs(t, y)
    k2 = rhs(t + dt / 2, y + (dt / 2) * k1)
    k3 = rhs(t + dt / 2, y + (dt / 2) * k2)
    k4 = rhs(t + dt, y + dt * k3)
    increment = k1 + 2.0 * k2 + 2.0 * k3 + k4
    if not np.isfinite(increment).all():
        bad = int(np.flatnonzero(~np.isfinite(increment))[0])
        label = names[bad] if names else f"component {bad}"
        raise IntegrationError(
            f"non-finite derivative at t={t:g} in {label}")
    return y + (dt / 6.0) * increment


def _check_state(y: np.ndarray, t: float, layout: StateLayout,
                 person_idx: tuple[int, ...], N: float) -> None:
    if not np.isfinite(y).all():
        bad = int(np.flatnonzero(~np.isfinite(y))[0])
        raise IntegrationError(
            f"non-finite state at t={t:g} in {layout.names[bad]}")
    persons = y[list(person_idx)]
    if (persons < -NEGATIVITY_TOL * N).any():
        bad = int(np.flatnonzero(persons < -NEGATIVITY_TOL * N)[0])
        name = layout.names[person_idx[bad]]
        raise IntegrationError(
            f"compartment {name} fell below the negativity tolerance at "
            f"t={t:g}: {persons[bad]:g}")
    if layout.has_x:
        x = y[layout.index["X"]]
        if x < -X_TOL or x > 1.0 + X_TOL:
            raise IntegrationError(
                f"adherence fraction left [0, 1] at t={t:g}: X={x!r}")


def validate_initial_state(spec: ModelSpec, init: StateVector) -> np.ndarray:
    """Check an initial state against the spec's layout and invariants."""
    layout = spec.layout()
    y = layout.pack(init)  # raises ConfigError on shape mismatch
    if not np.isfinite(y).all():
        raise ConfigError("initial state contains non-finite values")
    if (y[list(layout.person_indices())] < 0).any():
        raise ConfigError("initial person compartments must be non-negative")
    if layout.has_x and not (0.0 <= init.X <= 1.0):
        raise ConfigError(f"initial X must lie in [0, 1], got {init.X}")
    N = spec.core.N
    if abs(init.person_total() - N) > CONSERVATION_TOL * N:
        raise ConfigError(
            f"initial person compartments sum to {init.person_total():g}, "
            f"expected N={N:g}")
    return y


def integrate(spec: ModelSpec, init: StateVector, grid: Grid) -> TimeSeries:
    """Integrate a model over a grid, sampling states and effective beta.

    The trajectory is deterministic. Conservation (sum of person
    compartments equal to N within tolerance) is enforced at every sample;
    negativity beyond tolerance, non-finite values, or an escaping
    adherence fraction raise IntegrationError with a time stamp.
    """
    layout = spec.layout()
    y = validate_initial_state(spec, init)
    rhs = assemble_rhs(spec)
    beta_of = beta_function(spec)
    n_steps = grid.n_steps
    names = layout.names
    person_idx = layout.person_indices()
    N = spec.core.N

    times: list[float] = []
    rows: list[np.ndarray] = []
    betas: list[float] = []

    def record(step: int, state: np.ndarray) -> None:
        t = grid.time_at(step)
        total = state[list(person_idx)].sum()
        if abs(total - N) > CONSERVATION_TOL * N:
            raise IntegrationError(
                f"person compartments drifted from N at t={t:g}: "
                f"sum={total!r}, N={N:g}")
        times.append(t)
        rows.append(state.copy())
        betas.append(beta_of(t, layout.unpack(state)))

    if n_steps > 0:
        record(0, y)
    for step in range(1, n_steps + 1):
        y = rk4_step(rhs, grid.time_at(step - 1), y, grid.dt, names)
        _check_state(y, grid.time_at(step), layout, person_idx, N)
        if step % grid.sample_every == 0 or step == n_steps:
            record(step, y)

    if rows:
        states = np.vstack(rows)
    else:
        states = np.empty((0, layout.size))
    return TimeSeries(times=np.array(times), states=states,
                      beta_eff=np.array(betas), layout=layout)
