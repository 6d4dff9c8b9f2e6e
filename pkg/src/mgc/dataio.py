"""Reading sample / distance tables and writing result documents.

Numbers are written with 17 significant digits so that every double
survives a write/read cycle unchanged.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .exceptions import DomainError, InputFormatError, ShapeError, SizeError

FLOAT_FMT = "%.17g"
SYMMETRY_TOL = 1e-9
NEGATIVE_TOL = 1e-12


@dataclass(frozen=True)
class SampleSet:
    """``n`` observations of dimension ``p``, one per row."""

    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim == 1:
            v = v[:, None]
        if v.ndim != 2:
            raise ShapeError(f"samples must be a 2-d table, got ndim={v.ndim}")
        if v.shape[1] < 1:
            raise ShapeError("samples need at least one column")
        if v.shape[0] < 3:
            raise SizeError(f"need at least 3 samples, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise DomainError("samples contain non-finite values")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]

    @property
    def p(self) -> int:
        return self.values.shape[1]


@dataclass
class ResultDocument:
    """Serializable summary of one test run."""

    method: str
    statistic: float
    p_value: float
    optimal_scales: list = field(default_factory=list)
    canonical_scale: Optional[tuple] = None
    threshold: Optional[float] = None
    num_permutations: int = 0
    seed: int = 0
    map: Optional[np.ndarray] = None

    def __post_init__(self):
        if not 0.0 <= self.p_value <= 1.0:
            raise DomainError(f"p_value {self.p_value} outside [0, 1]")
        self.optimal_scales = [tuple(int(v) for v in s) for s in self.optimal_scales]
        if self.canonical_scale is not None:
            self.canonical_scale = tuple(int(v) for v in self.canonical_scale)
            if self.optimal_scales and self.canonical_scale not in self.optimal_scales:
                raise DomainError("canonical_scale must be one of optimal_scales")

    def to_dict(self) -> dict:
        out = {
            "method": self.method,
            "statistic": float(self.statistic),
            "p_value": float(self.p_value),
            "optimal_scales": [list(s) for s in self.optimal_scales],
            "canonical_scale": (
                list(self.canonical_scale) if self.canonical_scale is not None else None
            ),
            "threshold": None if self.threshold is None else float(self.threshold),
            "num_permutations": int(self.num_permutations),
            "seed": int(self.seed),
        }
        if self.map is not None:
            out["map"] = np.asarray(self.map, dtype=float).tolist()
        return out

    @classmethod
    def from_dict(cls, d: dict) -> "ResultDocument":
        m = d.get("map")
        return cls(
            method=d["method"],
            statistic=d["statistic"],
            p_value=d["p_value"],
            optimal_scales=d.get("optimal_scales", []),
            canonical_scale=d.get("canonical_scale"),
            threshold=d.get("threshold"),
            num_permutations=d.get("num_permutations", 0),
            seed=d.get("seed", 0),
            map=None if m is None else np.asarray(m, dtype=float),
        )


def _read_table(path, delimiter: str = ",", header: bool = False) -> np.ndarray:
    if not os.path.exists(path):
        raise FileNotFoundError(f"no such file: {path}")
    rows = []
    width = None
    with open(path, "r") as fh:
        lines = fh.read().splitlines()
    # a single trailing newline is not a blank row
    while lines and lines[-1] == "":
        lines.pop()
    start = 1 if header else 0
    for lineno, line in enumerate(lines[start:], start=start + 1):
        if not line.strip():
            raise InputFormatError(f"{path}: line {lineno} is blank")
        cells = line.split(delimiter)
        if width is None:
            width = len(cells)
        elif len(cells) != width:
            raise InputFormatError(
                f"{path}: line {lineno} has {len(cells)} fields, expected {width}"
            )
        row = []
        for col, cell in enumerate(cells, start=1):
            try:
                row.append(float(cell))
            except ValueError:
                raise InputFormatError(
                    f"{path}: non-numeric cell {cell.strip()!r} at row {lineno}, column {col}"
                ) from None
        rows.append(row)
    if not rows:
        raise InputFormatError(f"{path}: no data rows")
    return np.array(rows, dtype=float)


def load_samples(path, delimiter: str = ",", header: bool = False) -> SampleSet:
    """Read an ``n x p`` delimiter-separated table of observations.

    Raises
    ------
    InputFormatError
        Ragged rows, blank lines or non-numeric cells (the message names
        the offending line and column).
    SizeError
        Fewer than three rows.
    """
    return SampleSet(_read_table(path, delimiter, header))


def load_distance_matrix(path, delimiter: str = ",", header: bool = False):
    """Read a precomputed ``n x n`` distance table.

    Asymmetries up to 1e-9 are averaged away and the diagonal is set to
    exactly zero; anything larger is rejected as a likely corrupt input.
    """
    return as_distance_matrix(_read_table(path, delimiter, header))


def as_distance_matrix(m) -> "DistanceMatrix":
    """Validate a raw square array and wrap it as a distance matrix."""
    from .geometry import DistanceMatrix

    m = np.asarray(m, dtype=float)
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise ShapeError(f"distance matrix must be square, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError("distance matrix contains non-finite values")
    asym = np.max(np.abs(m - m.T)) if m.size else 0.0
    if asym > SYMMETRY_TOL:
        raise DomainError(f"distance matrix asymmetric by {asym:.3g} (> {SYMMETRY_TOL})")
    if np.min(m) < -NEGATIVE_TOL:
        raise DomainError(f"distance matrix has negative entry {np.min(m):.3g}")
    m = (m + m.T) / 2.0
    np.clip(m, 0.0, None, out=m)
    np.fill_diagonal(m, 0.0)
    return DistanceMatrix(m)


def write_samples(values, path, delimiter: str = ",") -> None:
    v = np.asarray(values, dtype=float)
    if v.ndim == 1:
        v = v[:, None]
    np.savetxt(path, v, fmt=FLOAT_FMT, delimiter=delimiter)


def write_map_grid(corr, path, delimiter: str = ",") -> None:
    """Row-major grid export: row ``k-1`` holds scales ``(k, 1..n)``."""
    np.savetxt(path, np.asarray(corr, dtype=float), fmt=FLOAT_FMT, delimiter=delimiter)


def dumps_result(doc: ResultDocument) -> str:
    return json.dumps(doc.to_dict(), indent=2, allow_nan=False) + "\n"


def write_result(doc: ResultDocument, path) -> None:
    text = dumps_result(doc)
    with open(path, "w") as fh:
        fh.write(text)


def read_result(path) -> ResultDocument:
    with open(path) as fh:
        return ResultDocument.from_dict(json.load(fh))


def write_json(obj, path) -> None:
    """Write any JSON-able record (power tables, screening results)."""
    text = json.dumps(obj, indent=2, allow_nan=False) + "\n"
    if path is None:
        print(text, end="")
        return
    with open(path, "w") as fh:
        fh.write(text)


def scales_to_list(scales: Sequence) -> list:
    return [[int(k), int(l)] for k, l in scales]
