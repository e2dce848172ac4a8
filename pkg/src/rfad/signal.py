"""Sensor-code time series: synthesis, spectrum, and window sizing.

A freshly touched sensor shows a decaying transient, then settles into a
sawtooth fluctuation (charge/discharge of the tuning capacitor during
interrogation) on top of the material-dependent baseline. The
convergence-error procedure here determines how many samples must be
averaged before the reading is stable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .errors import DataError, NotConvergedError

CODE_STORAGE_MIN = 0
CODE_STORAGE_MAX = 511

DEFAULT_SAMPLE_PERIOD = 0.7
DEFAULT_SAWTOOTH_FREQUENCY = 0.7
DEFAULT_ASYMPTOTIC_SAMPLES = 100

Estimator = Literal["mean", "median"]


@dataclass(frozen=True)
class FluctuationModel:
    """Parameters of the synthetic sensor-code generator."""

    baseline: int = 200
    sawtooth_amplitude: float = 2.0
    sawtooth_frequency: float = DEFAULT_SAWTOOTH_FREQUENCY
    transient_duration: float = 1.5  # exponential decay constant, seconds
    transient_amplitude: float = 3.0
    noise_sd: float = 1.0
    sample_period: float = DEFAULT_SAMPLE_PERIOD

    def __post_init__(self):
        if self.sawtooth_frequency <= 0:
            raise DataError("sawtooth frequency must be positive")
        if self.sample_period <= 0:
            raise DataError("sample period must be positive")
        if min(self.sawtooth_amplitude, self.transient_amplitude, self.noise_sd) < 0:
            raise DataError("amplitudes must be non-negative")
        if self.transient_duration <= 0:
            raise DataError("transient time constant must be positive")


@dataclass(frozen=True)
class CodeSeries:
    """Timestamped integer sensor codes for one channel."""

    times: np.ndarray
    codes: np.ndarray
    channel: str = "I"

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        codes = np.asarray(self.codes, dtype=int)
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "codes", codes)
        if times.shape != codes.shape or times.ndim != 1:
            raise DataError("times and codes must be 1-D arrays of equal length")
        if len(times) > 1 and np.any(np.diff(times) <= 0):
            raise DataError("timestamps must be strictly increasing")
        if np.any((codes < CODE_STORAGE_MIN) | (codes > CODE_STORAGE_MAX)):
            raise DataError(
                f"codes outside storage range [{CODE_STORAGE_MIN}, {CODE_STORAGE_MAX}]")

    def __len__(self) -> int:
        return len(self.codes)


def _sawtooth(phase: np.ndarray) -> np.ndarray:
    """Unit-amplitude sawtooth: slow fall from 1 to -1, sharp reset.

    Mirrors the charge/discharge cycle of the tuning capacitor; the
    orientation only fixes the sign convention, not the spectrum.
    """
    return -2.0 * (phase - np.floor(phase + 0.5))


def synthesize_series(model: FluctuationModel, duration: float, seed: int,
                      channel: str = "I") -> CodeSeries:
    """Deterministically generate a sensor-code series of the given duration."""
    if duration < model.sample_period:
        raise DataError("duration must cover at least one sample period")
    n = int(math.floor(duration / model.sample_period))
    t = np.arange(n) * model.sample_period
    values = (model.baseline
              + model.transient_amplitude * np.exp(-t / model.transient_duration)
              + model.sawtooth_amplitude * _sawtooth(t * model.sawtooth_frequency))
    if model.noise_sd > 0:
        rng = np.random.default_rng(seed)
        values = values + np.rint(rng.normal(0.0, model.noise_sd, size=n))
    codes = np.clip(np.rint(values), CODE_STORAGE_MIN, CODE_STORAGE_MAX).astype(int)
    return CodeSeries(times=t, codes=codes, channel=channel)


def amplitude_spectrum(series: CodeSeries) -> tuple[np.ndarray, np.ndarray]:
    """One-sided amplitude spectrum of the mean-removed series.

    Rectangular window; bin resolution is 1 / (N * sample period).
    """
    _check_uniform(series)
    x = series.codes.astype(float)
    x = x - x.mean()
    dt = float(series.times[1] - series.times[0])
    amps = np.abs(np.fft.rfft(x)) / len(x)
    freqs = np.fft.rfftfreq(len(x), dt)
    return freqs, amps


def dominant_frequency(series: CodeSeries) -> float | None:
    """Frequency of the largest non-DC spectral bin, or None for a series
    with no fluctuating component."""
    if len(series) < 16:
        raise DataError(f"need at least 16 samples, got {len(series)}")
    freqs, amps = amplitude_spectrum(series)
    nondc = amps[1:]
    if nondc.max() <= 1e-12 * max(1.0, np.abs(series.codes).max()):
        return None
    return float(freqs[1 + int(np.argmax(nondc))])


def _check_uniform(series: CodeSeries, rtol: float = 1e-6) -> None:
    if len(series) < 2:
        raise DataError("need at least 2 samples")
    dts = np.diff(series.times)
    jitter = np.abs(dts - dts.mean()).max()
    if jitter > rtol * dts.mean():
        raise DataError(f"non-uniform sampling: max timestamp jitter {jitter:.3g} s")


def convergence_error(series: CodeSeries, m: int,
                      m_inf: int = DEFAULT_ASYMPTOTIC_SAMPLES) -> float:
    """Population standard deviation over the first ``m`` samples minus
    the asymptotic one over the first ``m_inf`` samples (code units)."""
    if not 2 <= m <= m_inf:
        raise DataError(f"need 2 <= m <= m_inf, got m={m}, m_inf={m_inf}")
    if m_inf > len(series):
        raise DataError(f"m_inf={m_inf} exceeds series length {len(series)}")
    x = series.codes.astype(float)
    return float(np.std(x[:m]) - np.std(x[:m_inf]))


def minimum_samples(series: CodeSeries, tolerance: float,
                    m_inf: int = DEFAULT_ASYMPTOTIC_SAMPLES,
                    estimator: Estimator = "mean") -> int:
    """Smallest window M whose measurement is converged within ``tolerance``.

    For the mean, a window qualifies when the dispersion convergence
    error is below tolerance: the dispersion is measured about the mean,
    so its convergence directly bounds the mean's stability. The median
    is not certified by the dispersion (the near-Nyquist sawtooth keeps
    the running median pinned to one of its two sampled branches long
    after the dispersion settles), so the median additionally requires
    the running median itself to sit within tolerance of its asymptotic
    value. The median window is therefore never shorter than the mean's.

    Raises NotConvergedError (carrying the final convergence error) if
    no admissible window qualifies.
    """
    if len(series) < m_inf:
        raise DataError(f"series length {len(series)} below m_inf={m_inf}")
    if estimator == "median":
        target = estimate_code(series, m_inf, "median")
    last = None
    # the asymptotic reference itself is not an admissible window
    # (delta[m_inf] = 0 identically, which certifies nothing)
    for m in range(2, m_inf):
        last = convergence_error(series, m, m_inf)
        settled = (estimator == "mean"
                   or abs(estimate_code(series, m, "median") - target) < tolerance)
        if abs(last) < tolerance and settled:
            return m
    raise NotConvergedError(
        f"no window up to {m_inf} samples meets tolerance {tolerance}",
        delta=last)


def estimate_code(series: CodeSeries, window: int,
                  estimator: Estimator = "mean") -> float:
    """Mean or median sensor code over the first ``window`` samples."""
    if window < 1:
        raise DataError(f"window must be >= 1, got {window}")
    if window > len(series):
        raise DataError(f"window {window} exceeds series length {len(series)}")
    x = series.codes[:window].astype(float)
    if estimator == "mean":
        return float(np.mean(x))
    if estimator == "median":
        return float(np.median(x))
    raise DataError(f"unknown estimator {estimator!r}")


def export_spectrum(series: CodeSeries, path) -> None:
    """Write the amplitude spectrum as ``freq_hz,amplitude`` CSV rows."""
    import csv
    import io
    import os
    freqs, amps = amplitude_spectrum(series)
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["freq_hz", "amplitude"])
    for f, a in zip(freqs, amps):
        writer.writerow([repr(float(f)), repr(float(a))])
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        fh.write(buf.getvalue())
    os.replace(tmp, path)


# ---------------------------------------------------------------------------
# material fixtures
# ---------------------------------------------------------------------------

# Fluctuation/noise grows with the permittivity of the touched liquid,
# which is what pushes the minimum stable window up for water. The touch
# transient decays faster than one sample period, so the early-window
# dispersion is dominated by the initial jump.
_MATERIAL_FLUCTUATION = {
    "olive_oil": dict(sawtooth_amplitude=1.5, transient_amplitude=4.0,
                      transient_duration=0.35, noise_sd=0.4),
    "ethyl_alcohol": dict(sawtooth_amplitude=2.0, transient_amplitude=5.5,
                          transient_duration=0.35, noise_sd=0.8),
    "deionized_water": dict(sawtooth_amplitude=2.5, transient_amplitude=7.5,
                            transient_duration=0.35, noise_sd=1.5),
}

DEFAULT_FIXTURE_SEED = 10


def material_fluctuation_model(material: str, baseline: int) -> FluctuationModel:
    """Fluctuation preset for one of the reference liquids."""
    try:
        params = _MATERIAL_FLUCTUATION[material]
    except KeyError:
        raise DataError(
            f"no fluctuation preset for {material!r}; "
            f"known: {sorted(_MATERIAL_FLUCTUATION)}") from None
    return FluctuationModel(baseline=baseline, **params)


def material_fixture_series(material: str, baseline: int = 200,
                            duration: float = 70.0,
                            seed: int = DEFAULT_FIXTURE_SEED) -> CodeSeries:
    """Canonical seeded series for one of the reference liquids."""
    return synthesize_series(material_fluctuation_model(material, baseline),
                             duration, seed=seed)
