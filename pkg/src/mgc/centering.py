"""Centering schemes that turn comparison matrices into A and B.

Every scheme is computed on the full matrix and the diagonal is zeroed
afterwards.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Union

import numpy as np

from .exceptions import SizeError
from .geometry import DistanceMatrix


class Scheme(str, enum.Enum):
    SIMPLE = "simple"
    DOUBLE = "double"
    UNBIASED = "unbiased"
    SINGLE_COLUMN = "single_column"
    SINGLE_ROW = "single_row"


@dataclass(frozen=True)
class CenteredMatrix:
    values: np.ndarray
    scheme: Scheme
    exclude_diagonal: bool = True

    @property
    def n(self) -> int:
        return self.values.shape[0]


def _simple(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    off_mean = (m.sum() - np.trace(m)) / (n * (n - 1))
    return m - off_mean


def double_centered_full(m: np.ndarray) -> np.ndarray:
    """Double centering with all ``n`` entries in every mean, diagonal kept.

    Every row and column of the result sums to zero.
    """
    row = m.mean(axis=1, keepdims=True)
    col = m.mean(axis=0, keepdims=True)
    return m - row - col + m.mean()


def _unbiased(m: np.ndarray) -> np.ndarray:
    n = m.shape[0]
    row = m.sum(axis=1, keepdims=True) / (n - 2)
    col = m.sum(axis=0, keepdims=True) / (n - 2)
    return m - row - col + m.sum() / ((n - 1) * (n - 2))


def center_array(m: np.ndarray, scheme: Union[Scheme, str]) -> np.ndarray:
    """Array-level centering used by the hot paths."""
    scheme = Scheme(scheme)
    n = m.shape[0]
    if scheme is Scheme.SIMPLE:
        out = _simple(m)
    elif scheme is Scheme.DOUBLE:
        out = double_centered_full(m)
    elif scheme is Scheme.UNBIASED:
        if n < 4:
            raise SizeError(f"unbiased centering needs n >= 4, got {n}")
        out = _unbiased(m)
    elif scheme is Scheme.SINGLE_COLUMN:
        out = m - m.mean(axis=0, keepdims=True)
    else:
        out = m - m.mean(axis=1, keepdims=True)
    np.fill_diagonal(out, 0.0)
    # entries this small are cancellation residue; an exactly centered
    # constant matrix must come out as zeros, not as amplified roundoff
    scale = float(np.max(np.abs(m))) if m.size else 0.0
    out[np.abs(out) <= n * np.finfo(float).eps * scale] = 0.0
    return out


def center(d: Union[DistanceMatrix, np.ndarray], scheme: Union[Scheme, str]) -> CenteredMatrix:
    """Center a distance (or kernel) matrix under ``scheme``.

    SIMPLE subtracts the off-diagonal mean. DOUBLE subtracts row and
    column means and adds back the grand mean, all means taken over the
    full ``n`` entries. UNBIASED is U-centering (divisors ``n-2`` and
    ``(n-1)(n-2)``), which requires ``n >= 4``. SINGLE_COLUMN and
    SINGLE_ROW subtract only column or only row means.
    """
    m = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    scheme = Scheme(scheme)
    return CenteredMatrix(center_array(m, scheme), scheme, True)
