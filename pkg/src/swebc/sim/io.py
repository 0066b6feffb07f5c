"""CSV output for energy histories and final fields."""

from __future__ import annotations

import csv
from pathlib import Path

import numpy as np

from .grid import Field
from .run import EnergyReport

ENERGY_HEADER = ("time", "energy", "boundary_flux")
FIELD_HEADER = ("x", "y", "phi", "u", "v")


def _fmt(x: float) -> str:
    # 17 significant digits round-trip any double
    return f"{float(x):.17g}"


def write_rows(path, header, rows) -> Path:
    path = Path(path)
    if path.parent != Path("."):
        path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([_fmt(x) for x in row])
    return path


def write_energy_csv(path, report: EnergyReport) -> Path:
    return write_rows(path, ENERGY_HEADER, report.as_rows())


def write_field_csv(path, f: Field) -> Path:
    X, Y = f.grid.mesh()
    cols = [X, Y, f.phi, f.u, f.v]
    return write_rows(path, FIELD_HEADER, zip(*(c.ravel() for c in cols)))


def read_csv(path) -> tuple[list[str], np.ndarray]:
    """Header and values of a numeric CSV file written by this module."""
    with Path(path).open(newline="") as fh:
        rows = list(csv.reader(fh))
    header, body = rows[0], rows[1:]
    data = np.array([[float(x) for x in r] for r in body], dtype=float).reshape(len(body), len(header))
    return header, data
