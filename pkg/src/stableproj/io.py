"""JSON measure files and CSV output."""
from __future__ import annotations

import csv
import io as _io
import json
import warnings
from pathlib import Path
from typing import Any, Iterable, Sequence

import numpy as np

from .errors import DomainError
from .spectral import MEASURE_REPS, DiscreteSpectralMeasure

__all__ = [
    "MeasureFormatError",
    "measure_from_dict",
    "measure_to_dict",
    "load_measure",
    "dumps_measure",
    "format_number",
    "write_csv",
]

#: atoms farther than this from unit length are rejected
NORM_REJECT = 1e-9
#: atoms farther than this (but within NORM_REJECT) are renormalised with a warning
NORM_WARN = 1e-12


class MeasureFormatError(DomainError):
    """A measure file is malformed; the message names the offending field."""


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise MeasureFormatError(f"{where}: expected a number, got {value!r}")
    out = float(value)
    if not np.isfinite(out):
        raise MeasureFormatError(f"{where}: value must be finite")
    return out


def _vector(value: Any, dim: int, where: str) -> np.ndarray:
    if not isinstance(value, list):
        raise MeasureFormatError(f"{where}: expected a list of {dim} numbers")
    if len(value) != dim:
        raise MeasureFormatError(f"{where}: expected {dim} components, got {len(value)}")
    return np.array([_number(c, f"{where}[{i}]") for i, c in enumerate(value)])


def measure_from_dict(data: Any) -> DiscreteSpectralMeasure:
    """Validate a parsed measure document and build the measure.

    Atoms within ``1e-12`` of unit length are used as given, those within
    ``1e-9`` are renormalised with a :class:`UserWarning`, and anything
    farther off is rejected.
    """
    if not isinstance(data, dict):
        raise MeasureFormatError("top level: expected a JSON object")
    missing = [k for k in ("alpha", "representation", "dim", "atoms") if k not in data]
    if missing:
        raise MeasureFormatError(f"top level: missing field(s) {', '.join(missing)}")
    alpha = _number(data["alpha"], "alpha")
    if not 0 < alpha < 2:
        raise MeasureFormatError(f"alpha: must lie in (0, 2), got {alpha}")
    rep = data["representation"]
    if rep not in MEASURE_REPS:
        raise MeasureFormatError(f"representation: expected 'A' or 'M', got {rep!r}")
    dim = data["dim"]
    if isinstance(dim, bool) or not isinstance(dim, int) or dim < 2:
        raise MeasureFormatError(f"dim: expected an integer >= 2, got {dim!r}")
    atoms = data["atoms"]
    if not isinstance(atoms, list) or not atoms:
        raise MeasureFormatError("atoms: expected a non-empty list")
    points, weights = [], []
    worst = 0.0
    for i, atom in enumerate(atoms):
        if not isinstance(atom, dict) or "s" not in atom or "w" not in atom:
            raise MeasureFormatError(f"atoms[{i}]: expected an object with fields 's' and 'w'")
        s = _vector(atom["s"], dim, f"atoms[{i}].s")
        w = _number(atom["w"], f"atoms[{i}].w")
        if not w > 0:
            raise MeasureFormatError(f"atoms[{i}].w: weight must be positive, got {w}")
        dev = abs(float(np.linalg.norm(s)) - 1)
        if dev > NORM_REJECT:
            raise MeasureFormatError(f"atoms[{i}].s: norm differs from 1 by {dev:.3g}")
        if dev > NORM_WARN:
            s = s / np.linalg.norm(s)
            worst = max(worst, dev)
        points.append(s)
        weights.append(w)
    if worst > 0:
        warnings.warn(f"atoms renormalised to unit length (max deviation {worst:.3g})", stacklevel=2)
    shift = _vector(data.get("shift", [0.0] * dim), dim, "shift")
    return DiscreteSpectralMeasure(np.array(points), np.array(weights), alpha, shift, rep)


def measure_to_dict(m: DiscreteSpectralMeasure) -> dict:
    return {
        "alpha": float(m.alpha),
        "representation": m.rep,
        "dim": int(m.dim),
        "atoms": [{"s": [float(c) for c in s], "w": float(w)} for s, w in zip(m.points, m.weights)],
        "shift": [float(c) for c in m.shift],
    }


def load_measure(path: str | Path) -> DiscreteSpectralMeasure:
    """Read a measure file; JSON syntax errors report line and column."""
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureFormatError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return measure_from_dict(data)


def dumps_measure(m: DiscreteSpectralMeasure) -> str:
    """Measure as indented JSON; floats use the shortest round-tripping form."""
    return json.dumps(measure_to_dict(m), indent=2) + "\n"


def format_number(x) -> str:
    """17 significant digits, enough to round-trip any double."""
    if isinstance(x, (str, bool, np.bool_)):
        return str(x)
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


def write_csv(stream, header: Sequence[str], rows: Iterable[Sequence[Any]]) -> None:
    """Write ``rows`` as CSV with LF line endings regardless of platform."""
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_number(x) for x in row])
    stream.write(buf.getvalue())
