"""Information-delay chain.

Public awareness of caseloads lags reality: reporting, aggregation, and
dissemination each add a first-order lag. An n-stage cascade of such lags
with per-stage time constant tau_f/n keeps the total mean delay equal to
tau_f for every order (the impulse response is an Erlang density with mean
tau_f), so runs with different orders are directly comparable.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import ConfigError


@dataclass(frozen=True, slots=True)
class DelayChain:
    """n: chain order (0 disables the chain); tau_f: total mean delay in days."""

    n: int = 0
    tau_f: float = 20.0

    def __post_init__(self):
        if not isinstance(self.n, int) or isinstance(self.n, bool) or self.n < 0:
            raise ConfigError(f"delay.n: must be a non-negative integer, got {self.n}")
        if self.n >= 1 and not (self.tau_f > 0):
            raise ConfigError(f"delay.tau_f: must be > 0 when delay.n >= 1, "
                              f"got {self.tau_f}")


def delay_chain_rhs(I: float, stages: Sequence[float],
                    chain: DelayChain) -> tuple[float, ...]:
    """Stage derivatives dFi/dt = (F_{i-1} - Fi) / (tau_f/n), with F0 = I.

    Returns one derivative per stage, empty for n = 0. The stage count must
    match the chain order.
    """
    if len(stages) != chain.n:
        raise ConfigError(f"delay_chain_rhs: got {len(stages)} stages for a "
                          f"chain of order {chain.n}")
    if chain.n == 0:
        return ()
    rate = chain.n / chain.tau_f
    derivs = []
    prev = I
    for value in stages:
        derivs.append((prev - value) * rate)
        prev = value
    return tuple(derivs)


def perceived_signal(I: float, stages: Sequence[float], chain: DelayChain) -> float:
    """The caseload signal the population reacts to: the last chain stage,
    or the raw infectious count when no delay is configured."""
    if len(stages) != chain.n:
        raise ConfigError(f"perceived_signal: got {len(stages)} stages for a "
                          f"chain of order {chain.n}")
    return stages[-1] if chain.n >= 1 else I
