"""Trajectory metrics: waves, oscillation amplitude and period, equilibrium
detection, attack rate.

A "wave" is operationalized as an interior local maximum of the infectious
series whose prominence clears a threshold; the default threshold,
max(1 person, 0.5% of the series maximum), suppresses integrator-scale
wiggles while keeping small late waves visible.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import signal as _signal

from .integrator import TimeSeries

DEFAULT_EQUILIBRIUM_WINDOW = 60.0
DEFAULT_EQUILIBRIUM_BAND_FRAC = 0.01


@dataclass(frozen=True, slots=True)
class Peak:
    """One wave: when it crested, how high, and how far it stands out."""

    time: float
    height: float
    prominence: float


@dataclass(frozen=True)
class TrajectoryMetrics:
    """Summary quantities of one infectious-series trajectory."""

    peaks: tuple[Peak, ...]
    wave_count: int
    mean_period: float | None
    max_peak: float
    equilibrium: bool
    equilibrium_band: float
    attack_rate: float


def default_prominence_threshold(values: np.ndarray) -> float:
    """max(1 person, 0.5% of the series maximum)."""
    if len(values) == 0:
        return 1.0
    return max(1.0, 0.005 * float(np.max(values)))


def find_peaks(times: np.ndarray, values: np.ndarray,
               prominence_threshold: float) -> tuple[Peak, ...]:
    """Interior local maxima with prominence >= threshold, in time order.

    Endpoints are never peaks, and fewer than 3 samples cannot contain an
    interior maximum. Expects uniform sampling.
    """
    if len(values) < 3:
        return ()
    idx, props = _signal.find_peaks(np.asarray(values, dtype=float),
                                    prominence=prominence_threshold)
    return tuple(Peak(time=float(times[i]), height=float(values[i]),
                      prominence=float(p))
                 for i, p in zip(idx, props["prominences"]))


def oscillation_metrics(peaks: tuple[Peak, ...]) -> tuple[tuple[float, ...], float | None]:
    """Peak heights and the mean spacing of consecutive peaks (None when
    fewer than two peaks exist)."""
    amplitudes = tuple(p.height for p in peaks)
    if len(peaks) < 2:
        return amplitudes, None
    gaps = np.diff([p.time for p in peaks])
    return amplitudes, float(np.mean(gaps))


def detect_equilibrium(times: np.ndarray, values: np.ndarray,
                       window: float = DEFAULT_EQUILIBRIUM_WINDOW,
                       band_frac: float = DEFAULT_EQUILIBRIUM_BAND_FRAC,
                       ) -> tuple[bool, float]:
    """Has the series settled? True when the max-min band of the trailing
    ``window`` days is below ``band_frac`` of the global maximum.

    Returns (flag, band width). An exactly flat tail counts as settled even
    when the global maximum is zero.
    """
    values = np.asarray(values, dtype=float)
    tail = values[np.asarray(times) >= times[-1] - window]
    band = float(np.max(tail) - np.min(tail))
    settled = band == 0.0 or band < band_frac * float(np.max(values))
    return settled, band


def attack_rate(series: TimeSeries, N: float) -> float:
    """Cumulative infected fraction: final removed count over N."""
    return float(series.column("R")[-1]) / N


def summarize(series: TimeSeries, N: float,
              prominence_threshold: float | None = None,
              window: float = DEFAULT_EQUILIBRIUM_WINDOW,
              band_frac: float = DEFAULT_EQUILIBRIUM_BAND_FRAC,
              ) -> TrajectoryMetrics:
    """Compute the full metric set from a simulated trajectory."""
    return summarize_arrays(series.times, series.column("I"),
                            attack=attack_rate(series, N),
                            prominence_threshold=prominence_threshold,
                            window=window, band_frac=band_frac)


def summarize_arrays(times: np.ndarray, infectious: np.ndarray, attack: float,
                     prominence_threshold: float | None = None,
                     window: float = DEFAULT_EQUILIBRIUM_WINDOW,
                     band_frac: float = DEFAULT_EQUILIBRIUM_BAND_FRAC,
                     ) -> TrajectoryMetrics:
    """Metric set from bare arrays (used for both fresh runs and CSV files)."""
    infectious = np.asarray(infectious, dtype=float)
    if len(infectious) == 0:
        return TrajectoryMetrics(peaks=(), wave_count=0, mean_period=None,
                                 max_peak=0.0, equilibrium=False,
                                 equilibrium_band=0.0, attack_rate=attack)
    if prominence_threshold is None:
        prominence_threshold = default_prominence_threshold(infectious)
    peaks = find_peaks(times, infectious, prominence_threshold)
    _, mean_period = oscillation_metrics(peaks)
    settled, band = detect_equilibrium(times, infectious, window, band_frac)
    return TrajectoryMetrics(
        peaks=peaks,
        wave_count=len(peaks),
        mean_period=mean_period,
        max_peak=float(np.max(infectious)) if len(infectious) else 0.0,
        equilibrium=settled,
        equilibrium_band=band,
        attack_rate=attack,
    )
