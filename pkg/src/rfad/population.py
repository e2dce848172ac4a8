"""Synthetic test-population generation and end-to-end simulation.

Reproduces, at desk scale, the statistics of a volunteer campaign: how
many fingers of a hand respond per trial, which fingers those tend to
be, and the per-material spread of the averaged fingerprint caused by
uncontrolled touch pressure. Every draw is seeded and deterministic.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Mapping, Optional, Sequence

import numpy as np

from . import ic as _ic
from .classify import TrialRecord, classify
from .config import SessionConfig, default_config
from .errors import DataError
from .fingerprint import (CalibrationBaseline, ChannelReading,
                          averaged_fingerprint, build_fingerprint,
                          fingerprint_from_record, fingerprint_record)
from .hand import FINGERS
from .materials import REFERENCE_LIQUIDS, load_materials
from .readlog import ReadLogRow, write_log
from .signal import estimate_code, material_fluctuation_model, synthesize_series

DEFAULT_POPULATION_SEED = 20

# P(exactly m of 5 fingers respond), m = 1..5. At least one finger always
# responds; all five never do.
DEFAULT_COUNT_PROBS = (0.10, 0.30, 0.55, 0.05, 0.0)

# Relative propensity of each finger to respond (middle finger most
# reliable, thumb least). Tuned so the seeded default run lands on the
# target joint rates.
DEFAULT_FINGER_WEIGHTS = {"I": 14.5, "II": 47.0, "III": 77.0, "IV": 24.0, "V": 37.0}

# Population spread of the averaged fingerprint per reference liquid.
DEFAULT_CLASS_SDS = {"olive_oil": 5.0, "ethyl_alcohol": 11.0, "deionized_water": 11.0}


@dataclass(frozen=True)
class PopulationSpec:
    """Shape of a synthetic measurement campaign."""

    subjects: int = 10
    trials: int = 3
    materials: tuple = REFERENCE_LIQUIDS
    count_probs: tuple = DEFAULT_COUNT_PROBS
    finger_weights: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_FINGER_WEIGHTS))
    class_sds: Mapping[str, float] = field(
        default_factory=lambda: dict(DEFAULT_CLASS_SDS))
    channel_jitter_sd: float = 2.0
    series_duration: float = 70.0

    def __post_init__(self):
        if self.subjects < 1 or self.trials < 1 or not self.materials:
            raise DataError("population spec needs subjects, trials and materials")
        probs = np.asarray(self.count_probs, dtype=float)
        if probs.shape != (len(FINGERS),) or np.any(probs < 0) or not np.isclose(probs.sum(), 1.0):
            raise DataError("count_probs must be 5 non-negative values summing to 1")
        if any(sd < 0 for sd in self.class_sds.values()):
            raise DataError("class SDs must be non-negative")


def _epc(subject: int, material_idx: int, trial: int, finger: str) -> str:
    return (f"E280{subject:02X}{material_idx:02X}{trial:02X}"
            f"{FINGERS.index(finger):02X}").ljust(24, "0")


def _draw_responsive(rng: np.random.Generator, spec: PopulationSpec) -> list[str]:
    m = 1 + int(rng.choice(len(FINGERS), p=np.asarray(spec.count_probs)))
    weights = np.array([spec.finger_weights[f] for f in FINGERS], dtype=float)
    # weighted sampling without replacement (exponential race)
    keys = rng.exponential(size=len(FINGERS)) / weights
    chosen = np.argsort(keys)[:m]
    return [FINGERS[i] for i in sorted(chosen)]


def _air_baseline(config: SessionConfig) -> CalibrationBaseline:
    codes = {}
    for channel in FINGERS:
        model = config.antenna_models[channel]
        state = _ic.antenna_response(model, 1.0)
        codes[channel] = float(_ic.sensor_code(config.ic, state).code)
    return CalibrationBaseline(codes=codes)


def simulate_hand(material: str, rng: np.random.Generator,
                  config: SessionConfig, spec: PopulationSpec,
                  responsive: Optional[Sequence[str]] = None):
    """One hand-material trial through the full sensing chain.

    Draws the touch-pressure offset, runs permittivity -> antenna ->
    sensor code per finger, synthesizes the reader time series,
    estimates the windowed code, and assembles the fingerprint.
    Returns ``(readings, log_rows, baseline)``.
    """
    materials = load_materials()
    eps = materials[material].epsilon
    baseline = _air_baseline(config)
    if responsive is None:
        responsive = _draw_responsive(rng, spec)
    hand_offset = rng.normal(0.0, spec.class_sds.get(material, 0.0))
    readings = []
    log_rows = []
    for channel in FINGERS:
        if channel not in responsive:
            readings.append(ChannelReading(channel=channel, code=None,
                                           responsive=False))
            continue
        model = config.antenna_models[channel]
        touched = _ic.sensor_code(config.ic, _ic.antenna_response(model, eps)).code
        jitter = rng.normal(0.0, spec.channel_jitter_sd)
        target = int(round(touched - hand_offset - jitter))
        target = min(max(target, config.ic.s_min), config.ic.s_max)
        fluct = material_fluctuation_model(material, baseline=target)
        series = synthesize_series(fluct, spec.series_duration,
                                   seed=int(rng.integers(0, 2 ** 31)),
                                   channel=channel)
        code = estimate_code(series, config.window, config.estimator)
        readings.append(ChannelReading(channel=channel, code=code, responsive=True))
        for t, c in zip(series.times, series.codes):
            log_rows.append((channel, float(t), int(c)))
    return readings, log_rows, baseline


def generate_population(spec: PopulationSpec = PopulationSpec(),
                        seed: int = DEFAULT_POPULATION_SEED,
                        config: Optional[SessionConfig] = None,
                        out_dir=None) -> list[TrialRecord]:
    """Deterministically generate the trial records of a campaign.

    With ``out_dir`` set, one reader-log CSV per trial is written
    alongside (byte-identical across runs with the same seed).
    """
    if config is None:
        config = default_config()
    rng = np.random.default_rng(seed)
    records = []
    for subject in range(spec.subjects):
        for material_idx, material in enumerate(spec.materials):
            for trial in range(spec.trials):
                readings, log_rows, baseline = simulate_hand(
                    material, rng, config, spec)
                fp = build_fingerprint(readings, baseline,
                                       material_label=material)
                responsive = {r.channel: r.responsive for r in readings}
                records.append(TrialRecord(
                    subject=f"S{subject + 1:02d}", material=material,
                    responsive=responsive, fingerprint=fp))
                if out_dir is not None:
                    rows = [ReadLogRow(timestamp=t, channel=ch, sensor_code=c,
                                       epc=_epc(subject, material_idx, trial, ch))
                            for ch, t, c in sorted(log_rows, key=lambda r: (r[1], r[0]))]
                    name = f"subject{subject + 1:02d}_{material}_trial{trial + 1}.csv"
                    write_log(rows, os.path.join(out_dir, name))
    return records


def monte_carlo_classification(n_hands: int, seed: int,
                               spec: PopulationSpec = PopulationSpec(),
                               config: Optional[SessionConfig] = None) -> float:
    """Fraction of simulated hands classified into the right class."""
    if config is None:
        config = default_config()
    classes = config.classes()
    means = config.class_means()
    expected = {}
    for cls in classes:
        for material in cls.reference_materials:
            expected[material] = cls.label
    rng = np.random.default_rng(seed)
    correct = 0
    materials = [m for m in spec.materials if m in means]
    for i in range(n_hands):
        material = materials[i % len(materials)]
        readings, _, baseline = simulate_hand(material, rng, config, spec)
        fp = build_fingerprint(readings, baseline, material_label=material)
        label = classify(averaged_fingerprint(fp), classes)
        correct += label == expected[material]
    return correct / n_hands


# ---------------------------------------------------------------------------
# trial record persistence
# ---------------------------------------------------------------------------

def save_records(records: Sequence[TrialRecord], path) -> None:
    payload = []
    for r in records:
        payload.append({
            "subject": r.subject, "material": r.material,
            "responsive": {f: bool(r.responsive[f]) for f in FINGERS},
            "fingerprint": (fingerprint_record(r.fingerprint)
                            if r.fingerprint is not None else None),
        })
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
    os.replace(tmp, path)


def load_records(path) -> list[TrialRecord]:
    with open(path, "r", encoding="utf-8") as fh:
        payload = json.load(fh)
    records = []
    for rec in payload:
        fp = rec.get("fingerprint")
        records.append(TrialRecord(
            subject=rec["subject"], material=rec["material"],
            responsive=dict(rec["responsive"]),
            fingerprint=fingerprint_from_record(fp) if fp else None))
    return records
