"""Inter-sensor coupling analysis and turn-on power budget.

Converts a multiport antenna impedance matrix into the power-wave
(Kurokawa) scattering matrix referenced to the complex chip impedances,
normalizes its magnitudes for cross-sensitivity screening, and provides
a single-stage turn-on power estimate.
"""

from __future__ import annotations

import csv
import os
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import DataError, SingularMatrixError
from .hand import FINGERS
from .units import parse_quantity

RECIPROCITY_RTOL = 1e-9

# Default chip impedance, fixed in the middle of the tuning range.
DEFAULT_IC_IMPEDANCE = 2.8 - 76j

# Normalized coupling-magnitude reference for the five-finger array at
# 867 MHz (percent of the strongest port reflection). Shipped as the
# default screening fixture; magnitude-only, so usable with
# normalize_coupling but not with power_wave_scattering.
REFERENCE_COUPLING_MAGNITUDES = np.array([
    [98.74, 0.15, 0.09, 0.04, 0.01],
    [0.15, 88.71, 2.89, 0.43, 0.05],
    [0.09, 2.89, 91.38, 0.86, 0.01],
    [0.04, 0.43, 0.86, 97.00, 0.08],
    [0.01, 0.05, 0.53, 0.08, 100.00],
])


@dataclass(frozen=True)
class PortLoad:
    """Complex termination impedance of one port (the chip)."""

    z_c: complex = DEFAULT_IC_IMPEDANCE

    def __post_init__(self):
        if self.z_c.real <= 0:
            raise DataError(
                f"port load must have positive resistance, got {self.z_c}")


@dataclass(frozen=True)
class ImpedanceMatrix:
    """Multiport impedance matrix with port bookkeeping.

    Reciprocity (z[j][k] == z[k][j]) is enforced on construction to
    within a relative tolerance of 1e-9.
    """

    z: np.ndarray
    frequency: float
    port_labels: tuple = FINGERS

    def __post_init__(self):
        z = np.asarray(self.z, dtype=complex)
        object.__setattr__(self, "z", z)
        if z.ndim != 2 or z.shape[0] != z.shape[1] or z.shape[0] < 1:
            raise DataError(f"impedance matrix must be square N>=1, got shape {z.shape}")
        if len(self.port_labels) != z.shape[0]:
            raise DataError(
                f"{len(self.port_labels)} port labels for {z.shape[0]} ports")
        if self.frequency <= 0:
            raise DataError(f"frequency must be positive, got {self.frequency}")
        scale = np.abs(z).max()
        if scale > 0 and np.abs(z - z.T).max() > RECIPROCITY_RTOL * scale:
            raise DataError("impedance matrix violates reciprocity beyond 1e-9 relative")

    @property
    def n_ports(self) -> int:
        return self.z.shape[0]


@dataclass(frozen=True)
class CouplingReport:
    """Normalized coupling magnitudes and the worst off-diagonal ratio."""

    k: np.ndarray | None
    normalized_magnitudes: np.ndarray = field(default=None)
    max_offdiag_ratio: float = 0.0


def _loads_as_array(loads, n_ports: int) -> np.ndarray:
    if isinstance(loads, PortLoad):
        loads = [loads] * n_ports
    z_c = np.array([l.z_c if isinstance(l, PortLoad) else complex(l) for l in loads])
    if len(z_c) != n_ports:
        raise DataError(f"{len(z_c)} loads for {n_ports} ports")
    if np.any(z_c.real <= 0):
        raise DataError("every port load needs positive resistance")
    return z_c


def power_wave_scattering(z: ImpedanceMatrix, loads=PortLoad()) -> np.ndarray:
    """Kurokawa generalized scattering matrix for complex port loads.

    K = G (Z - H^+) (Z + H)^-1 G^-1 with H = diag(z_c) and
    G = diag(0.5 / sqrt(Re z_c)). A conjugate-matched port reflects
    nothing; port-to-port entries quantify inter-sensor coupling.
    """
    z_c = _loads_as_array(loads, z.n_ports)
    h = np.diag(z_c)
    g = np.diag(0.5 / np.sqrt(z_c.real))
    g_inv = np.diag(2.0 * np.sqrt(z_c.real))
    a = z.z + h
    cond = np.linalg.cond(a)
    if not np.isfinite(cond) or cond > 1.0 / np.finfo(float).eps:
        raise SingularMatrixError(
            f"Z + H is singular or near-singular (condition estimate {cond:.3e})",
            condition=cond)
    return g @ (z.z - h.conj().T) @ np.linalg.inv(a) @ g_inv


def normalize_coupling(k: np.ndarray) -> CouplingReport:
    """Scale |K| so the strongest entry reads 100 and report the worst
    off-diagonal-to-peak ratio."""
    k = np.asarray(k)
    mags = np.abs(k.astype(complex))
    peak = mags.max()
    if peak == 0:
        raise DataError("all-zero coupling matrix cannot be normalized")
    normalized = 100.0 * mags / peak
    off = mags - np.diag(np.diag(mags))
    max_offdiag_ratio = off.max() / peak
    return CouplingReport(k=k, normalized_magnitudes=normalized,
                          max_offdiag_ratio=float(max_offdiag_ratio))


def turn_on_power(tau: float, transducer_gain: float, ic_sensitivity: float) -> float:
    """Minimum reader feed power (watts) that activates the chip.

    Single-stage budget: the reader must overcome the transducer gain of
    the on-body link and the power-transfer coefficient of the tag front
    end before the chip sees its sensitivity threshold.
    """
    if not 0 < tau <= 1:
        raise DataError(f"tau must be in (0, 1], got {tau}")
    if transducer_gain <= 0:
        raise DataError(f"transducer gain must be positive, got {transducer_gain}")
    if ic_sensitivity <= 0:
        raise DataError(f"IC sensitivity must be positive, got {ic_sensitivity}")
    return ic_sensitivity / (transducer_gain * tau)


# ---------------------------------------------------------------------------
# file formats
# ---------------------------------------------------------------------------

def load_impedance_matrix(path) -> ImpedanceMatrix:
    """Read the plain-text complex matrix format.

    Header lines ``frequency = 867 MHz`` and ``ports = I II III IV V``
    followed by one row per port of whitespace-separated ``re+imj``
    tokens. ``#`` starts a comment.
    """
    frequency = None
    ports = None
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line and not rows:
                key, _, value = line.partition("=")
                key = key.strip()
                if key == "frequency":
                    frequency = parse_quantity(value.strip())
                elif key == "ports":
                    ports = tuple(value.split())
                else:
                    raise DataError(f"{path}:{lineno}: unknown header key {key!r}")
                continue
            try:
                rows.append([complex(tok) for tok in line.split()])
            except ValueError as exc:
                raise DataError(f"{path}:{lineno}: bad complex token") from exc
    if frequency is None or ports is None or not rows:
        raise DataError(f"{path}: need frequency, ports and matrix rows")
    if any(len(r) != len(rows) for r in rows):
        raise DataError(f"{path}: matrix rows are not square")
    return ImpedanceMatrix(np.array(rows), frequency=frequency, port_labels=ports)


def save_impedance_matrix(z: ImpedanceMatrix, path) -> None:
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"frequency = {z.frequency / 1e6:.6g} MHz\n")
        fh.write("ports = " + " ".join(z.port_labels) + "\n")
        for row in z.z:
            fh.write(" ".join(f"{c.real:.12g}{c.imag:+.12g}j" for c in row) + "\n")
    os.replace(tmp, path)


def export_coupling_csv(report: CouplingReport, port_labels: Sequence[str], path) -> None:
    """Write the normalized magnitudes as CSV with labelled rows/columns."""
    tmp = f"{path}.tmp"
    with open(tmp, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["port"] + list(port_labels))
        for label, row in zip(port_labels, report.normalized_magnitudes):
            writer.writerow([label] + [f"{v:.6g}" for v in row])
    os.replace(tmp, path)


def coupling_summary(report: CouplingReport, port_labels: Sequence[str]) -> str:
    """Human-readable one-screen summary of a coupling report."""
    lines = ["Normalized coupling magnitudes (peak = 100):"]
    header = "      " + "".join(f"{p:>9}" for p in port_labels)
    lines.append(header)
    for label, row in zip(port_labels, report.normalized_magnitudes):
        lines.append(f"{label:>5} " + "".join(f"{v:9.2f}" for v in row))
    pct = 100.0 * report.max_offdiag_ratio
    lines.append(f"Worst off-diagonal coupling: {pct:.2f}% of the peak entry")
    verdict = "negligible" if report.max_offdiag_ratio <= 0.03 else "significant"
    lines.append(f"Cross-sensitivity assessment: {verdict}")
    return "\n".join(lines)
