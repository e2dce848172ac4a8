"""Differential sensor codes, hand fingerprints, and their uncertainty.

A fingerprint is the per-finger vector of air-calibrated differential
codes for one touched material. Unresponsive fingers are imputed with
the mean of the responsive ones; the touch-pressure uncertainty model
propagates through the multi-channel average.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import DataError, HandUnreadError, UnreadChannelError
from .hand import FINGERS

# Conservative bound on the relative precision of a single differential
# code under uncontrolled touch pressure.
PRESSURE_UNCERTAINTY_FACTOR = 0.3


@dataclass(frozen=True)
class ChannelReading:
    """Windowed mean sensor code of one finger, or a missing-read marker."""

    channel: str
    code: Optional[float]
    responsive: bool

    def __post_init__(self):
        if self.channel not in FINGERS:
            raise DataError(f"unknown channel {self.channel!r}")
        if self.responsive != (self.code is not None):
            raise DataError("responsive flag must match presence of a code")


@dataclass(frozen=True)
class CalibrationBaseline:
    """Per-finger air (eps = 1) codes, persisted between sessions."""

    codes: Mapping[str, float]
    timestamp: str = ""
    gaps: tuple = ()

    def __post_init__(self):
        for channel, code in self.codes.items():
            if channel not in FINGERS:
                raise DataError(f"unknown channel {channel!r} in baseline")
            if not 0 <= code <= 511:
                raise DataError(
                    f"baseline code {code} for channel {channel} outside "
                    f"storage range [0, 511]")


@dataclass(frozen=True)
class Fingerprint:
    """Five differential codes, with imputation bookkeeping."""

    values: Mapping[str, float]
    imputed: Mapping[str, bool]
    n_responsive: int
    material_label: Optional[str] = None

    def __post_init__(self):
        if set(self.values) != set(FINGERS) or set(self.imputed) != set(FINGERS):
            raise DataError("fingerprint must cover exactly the five fingers")
        if not 1 <= self.n_responsive <= len(FINGERS):
            raise DataError(f"n_responsive out of range: {self.n_responsive}")

    def responsive_values(self) -> list[float]:
        return [self.values[f] for f in FINGERS if not self.imputed[f]]


def differential_code(baseline: CalibrationBaseline, reading: ChannelReading) -> float:
    """Air code minus touched code for one finger."""
    if not reading.responsive:
        raise UnreadChannelError(f"channel {reading.channel} gave no reading")
    if reading.channel not in baseline.codes:
        raise DataError(f"no calibration baseline for channel {reading.channel}")
    return baseline.codes[reading.channel] - reading.code


def build_fingerprint(readings: Sequence[ChannelReading],
                      baseline: CalibrationBaseline,
                      material_label: Optional[str] = None) -> Fingerprint:
    """Assemble a hand fingerprint, imputing unresponsive fingers.

    Each missing finger receives the mean differential code of the
    responsive ones and is flagged as imputed.
    """
    by_channel = {r.channel: r for r in readings}
    if set(by_channel) != set(FINGERS):
        raise DataError("need exactly one reading per finger I..V")
    responsive = [f for f in FINGERS if by_channel[f].responsive]
    if not responsive:
        raise HandUnreadError("no finger of the hand produced a reading")
    deltas = {f: differential_code(baseline, by_channel[f]) for f in responsive}
    fill = sum(deltas.values()) / len(deltas)
    values = {f: deltas.get(f, fill) for f in FINGERS}
    imputed = {f: f not in deltas for f in FINGERS}
    return Fingerprint(values=values, imputed=imputed,
                       n_responsive=len(responsive),
                       material_label=material_label)


def averaged_fingerprint(fp: Fingerprint) -> float:
    """Mean of the five post-imputation differential codes."""
    return sum(fp.values[f] for f in FINGERS) / len(FINGERS)


def pressure_uncertainty(delta_s: float) -> float:
    """Touch-pressure standard deviation of one differential code."""
    return PRESSURE_UNCERTAINTY_FACTOR * abs(delta_s)


def propagated_uncertainty(fp: Fingerprint) -> float:
    """Pressure uncertainty of the averaged fingerprint.

    Only responsive fingers contribute independent information; imputed
    values are functions of the others and are excluded.
    """
    sigmas = [pressure_uncertainty(v) for v in fp.responsive_values()]
    return math.sqrt(sum(s * s for s in sigmas)) / fp.n_responsive


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

def fingerprint_record(fp: Fingerprint) -> dict:
    """JSON-ready record of one fingerprint."""
    return {
        "material": fp.material_label,
        "values": {f: fp.values[f] for f in FINGERS},
        "imputed": {f: fp.imputed[f] for f in FINGERS},
        "n_responsive": fp.n_responsive,
        "averaged": averaged_fingerprint(fp),
        "uncertainty": propagated_uncertainty(fp),
    }


def fingerprint_from_record(record: dict) -> Fingerprint:
    return Fingerprint(values=dict(record["values"]),
                       imputed=dict(record["imputed"]),
                       n_responsive=int(record["n_responsive"]),
                       material_label=record.get("material"))


def save_fingerprints(fps: Sequence[Fingerprint], path) -> None:
    import os
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump([fingerprint_record(fp) for fp in fps], fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_fingerprints(path) -> list[Fingerprint]:
    with open(path, "r", encoding="utf-8") as fh:
        return [fingerprint_from_record(rec) for rec in json.load(fh)]
