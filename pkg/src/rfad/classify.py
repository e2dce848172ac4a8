"""Threshold classification and population reliability statistics.

The averaged fingerprint is the scalar feature; materials fall into
low/medium/high permittivity classes separated by fixed thresholds.
Reliability statistics summarize how many fingers of a hand respond.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping, Optional, Sequence

from .errors import DataError, UnclassifiableError
from .fingerprint import Fingerprint
from .hand import FINGERS

CLASS_ORDER = ("low", "medium", "high")

# Physical span of a differential code given the usable register range.
DELTA_S_SPAN = 320.0


@dataclass(frozen=True)
class MaterialClass:
    """One permittivity class: label plus half-open interval [lower, upper).

    A value exactly on a boundary belongs to the upper class; the top
    class additionally accepts its own upper bound.
    """

    label: str
    lower: float
    upper: float
    reference_materials: tuple = ()

    def __post_init__(self):
        if not self.lower < self.upper:
            raise DataError(
                f"class {self.label!r} needs lower < upper, "
                f"got [{self.lower}, {self.upper})")


@dataclass(frozen=True)
class TrialRecord:
    """One hand-material trial: which fingers responded, and the fingerprint."""

    subject: str
    material: str
    responsive: Mapping[str, bool]
    fingerprint: Optional[Fingerprint] = None

    def __post_init__(self):
        if set(self.responsive) != set(FINGERS):
            raise DataError("trial record needs exactly five channel slots")

    @property
    def n_responsive(self) -> int:
        return sum(bool(v) for v in self.responsive.values())


@dataclass(frozen=True)
class ReliabilityReport:
    """CCD of simultaneously responding fingers plus per-finger rates."""

    ccd: tuple
    per_finger_rates: Mapping[str, Mapping[str, float]]
    joint_rates: Mapping[str, float]


def _check_classes(classes: Sequence[MaterialClass]) -> None:
    if not classes:
        raise DataError("need at least one material class")
    for a, b in zip(classes, classes[1:]):
        if a.upper != b.lower:
            raise DataError(
                f"classes {a.label!r} and {b.label!r} are not contiguous")


def classify(f_bar: float, classes: Sequence[MaterialClass]) -> str:
    """Label of the class interval containing the averaged fingerprint."""
    _check_classes(classes)
    for i, cls in enumerate(classes):
        is_top = i == len(classes) - 1
        if cls.lower <= f_bar < cls.upper or (is_top and f_bar == cls.upper):
            return cls.label
    lo, hi = classes[0].lower, classes[-1].upper
    distance = lo - f_bar if f_bar < lo else f_bar - hi
    raise UnclassifiableError(
        f"value {f_bar} is {distance:.3g} outside [{lo}, {hi}]",
        distance=distance)


def default_classes(class_means: Mapping[str, float]) -> list[MaterialClass]:
    """Build low/medium/high classes from calibrated per-class means.

    Thresholds sit at the midpoints between adjacent class means, which
    maximizes the margin for the reported per-class spreads.
    """
    if len(class_means) != 3:
        raise DataError("expected exactly three calibrated class means")
    ordered = sorted(class_means.items(), key=lambda kv: kv[1])
    (m_low, v_low), (m_med, v_med), (m_high, v_high) = ordered
    t1 = 0.5 * (v_low + v_med)
    t2 = 0.5 * (v_med + v_high)
    return [
        MaterialClass("low", -DELTA_S_SPAN, t1, reference_materials=(m_low,)),
        MaterialClass("medium", t1, t2, reference_materials=(m_med,)),
        MaterialClass("high", t2, DELTA_S_SPAN, reference_materials=(m_high,)),
    ]


def ccd(records: Sequence[TrialRecord]) -> tuple:
    """CCD(m) for m = 1..5: percent of trials with >= m responsive fingers."""
    if not records:
        raise DataError("no trial records")
    counts = [r.n_responsive for r in records]
    return tuple(100.0 * sum(c >= m for c in counts) / len(counts)
                 for m in range(1, len(FINGERS) + 1))


def per_finger_rates(records: Sequence[TrialRecord]):
    """Response rate per finger per material, plus all-materials joint rate.

    Returns ``(rates, joint)`` where ``rates[finger][material]`` and
    ``joint[finger]`` are percentages.
    """
    if not records:
        raise DataError("no trial records")
    materials = sorted({r.material for r in records})
    rates = {}
    joint = {}
    for finger in FINGERS:
        rates[finger] = {}
        for material in materials:
            rel = [r for r in records if r.material == material]
            rates[finger][material] = (
                100.0 * sum(r.responsive[finger] for r in rel) / len(rel))
        joint[finger] = 100.0 * sum(r.responsive[finger] for r in records) / len(records)
    return rates, joint


def reliability_report(records: Sequence[TrialRecord]) -> ReliabilityReport:
    rates, joint = per_finger_rates(records)
    return ReliabilityReport(ccd=ccd(records), per_finger_rates=rates,
                             joint_rates=joint)


def suggest_channel_subset(joint_rates: Mapping[str, float], k: int) -> tuple:
    """The k most reliable fingers; ties break toward the thumb side."""
    if not 1 <= k <= len(FINGERS):
        raise DataError(f"k must be in [1, {len(FINGERS)}], got {k}")
    order = sorted(FINGERS, key=lambda f: (-joint_rates[f], FINGERS.index(f)))
    chosen = order[:k]
    return tuple(f for f in FINGERS if f in chosen)
