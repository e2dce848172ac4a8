"""Built-in electrical constants of the reference materials at 867 MHz.

Ships as a read-only dataset; ``load_materials`` merges an optional
user-supplied CSV (``name,conductivity_s_per_m,epsilon``) on top.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass

from .errors import DataError


@dataclass(frozen=True)
class Material:
    name: str
    conductivity: float  # S/m
    epsilon: float       # relative permittivity


_BUILTIN = (
    Material("ecoflex_00_30", 0.007, 2.7),
    Material("silbione", 0.012, 2.5),
    Material("closed_cell_pvc_foam", 2.2e-5, 2.3),
    Material("homogeneous_body_tissue", 0.62, 30.0),
    Material("olive_oil", 0.026, 3.0),
    Material("ethyl_alcohol", 1e-5, 17.0),
    Material("deionized_water", 0.05, 78.0),
)

# The three liquids used for classification, in permittivity order.
REFERENCE_LIQUIDS = ("olive_oil", "ethyl_alcohol", "deionized_water")


def builtin_materials() -> dict[str, Material]:
    return {m.name: m for m in _BUILTIN}


def load_materials(path=None) -> dict[str, Material]:
    """Built-in table, optionally overridden/extended from a CSV file."""
    table = builtin_materials()
    if path is None:
        return table
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.DictReader(fh)
        required = {"name", "conductivity_s_per_m", "epsilon"}
        if reader.fieldnames is None or not required.issubset(reader.fieldnames):
            raise DataError(f"{path}: materials CSV needs columns {sorted(required)}")
        for lineno, row in enumerate(reader, start=2):
            try:
                m = Material(row["name"].strip(),
                             float(row["conductivity_s_per_m"]),
                             float(row["epsilon"]))
            except (TypeError, ValueError) as exc:
                raise DataError(f"{path}:{lineno}: bad materials row") from exc
            table[m.name] = m
    return table
