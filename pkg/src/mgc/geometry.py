"""Pairwise comparison matrices and nearest-neighbour rank matrices."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Literal, Union

import numpy as np
from scipy.spatial.distance import cdist

from .dataio import SampleSet
from .exceptions import DomainError, NumericError, ShapeError

DISTANCE = "distance"
KERNEL = "kernel_similarity"
MEDIAN = "median"


@dataclass(frozen=True)
class DistanceMatrix:
    """Symmetric ``n x n`` comparison matrix.

    ``kind`` is ``"distance"`` (zero diagonal, non-negative) or
    ``"kernel_similarity"`` (larger means closer).
    """

    values: np.ndarray
    kind: str = DISTANCE

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1]:
            raise ShapeError(f"comparison matrix must be square, got shape {v.shape}")
        if self.kind not in (DISTANCE, KERNEL):
            raise ValueError(f"unknown matrix kind {self.kind!r}")
        object.__setattr__(self, "values", v)

    @property
    def n(self) -> int:
        return self.values.shape[0]


@dataclass(frozen=True)
class RankMatrix:
    """Nearest-neighbour ranks; ``ranks[i, j]`` is 0 on the diagonal.

    ``by_column``: ``ranks[i, j]`` is the rank of sample ``i`` among the
    neighbours of sample ``j``. ``by_row``: rank of ``j`` among the
    neighbours of ``i``.
    """

    ranks: np.ndarray
    orientation: Literal["by_column", "by_row"]

    @property
    def n(self) -> int:
        return self.ranks.shape[0]


def _as_values(s) -> np.ndarray:
    if isinstance(s, SampleSet):
        return s.values
    v = np.asarray(s, dtype=float)
    return v[:, None] if v.ndim == 1 else v


def pairwise_distances(s: Union[SampleSet, np.ndarray], metric: str = "euclidean") -> DistanceMatrix:
    """Euclidean distance between every pair of rows of ``s``."""
    if metric != "euclidean":
        raise ValueError(f"unsupported metric {metric!r}; only 'euclidean' is available")
    x = _as_values(s)
    if x.shape[1] == 1:
        d = np.abs(x - x.T)
    else:
        d = cdist(x, x, metric="euclidean")
    if not np.all(np.isfinite(d)):
        raise NumericError("pairwise distances overflowed")
    np.fill_diagonal(d, 0.0)
    return DistanceMatrix(d)


def median_bandwidth(d: Union[DistanceMatrix, np.ndarray]) -> float:
    """Median of the strictly positive off-diagonal distances."""
    v = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    upper = v[np.triu_indices(v.shape[0], k=1)]
    upper = upper[upper > 0]
    if upper.size == 0:
        raise DomainError("median bandwidth undefined: all pairwise distances are zero")
    return float(np.median(upper))


def kernel_from_distances(d: Union[DistanceMatrix, np.ndarray], bandwidth=MEDIAN) -> DistanceMatrix:
    """Gaussian kernel ``exp(-d^2 / (2 sigma^2))`` of a Euclidean distance matrix."""
    v = d.values if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)
    if isinstance(bandwidth, str):
        if bandwidth != MEDIAN:
            raise ValueError(f"unknown bandwidth rule {bandwidth!r}")
        sigma = median_bandwidth(v)
    else:
        sigma = float(bandwidth)
        if not sigma > 0:
            raise DomainError(f"bandwidth must be positive, got {bandwidth}")
    return DistanceMatrix(np.exp(-(v * v) / (2.0 * sigma * sigma)), kind=KERNEL)


def gaussian_kernel_matrix(s: Union[SampleSet, np.ndarray], bandwidth=MEDIAN) -> DistanceMatrix:
    """Gaussian kernel matrix of the samples.

    ``bandwidth="median"`` uses the median of the positive pairwise
    Euclidean distances as sigma.
    """
    return kernel_from_distances(pairwise_distances(s), bandwidth)


def _row_ranks(m: np.ndarray, descending: bool = False) -> np.ndarray:
    n = m.shape[0]
    key = -m if descending else m.copy()
    # self always comes first; stable sort breaks ties by ascending index
    np.fill_diagonal(key, -np.inf)
    order = np.argsort(key, axis=1)
    # the unstable sort is only trusted on rows without ties
    srt = np.take_along_axis(key, order, axis=1)
    tied = np.flatnonzero(np.any(srt[:, 1:] == srt[:, :-1], axis=1))
    del srt
    if tied.size:
        order[tied] = np.argsort(key[tied], axis=1, kind="stable")
    ranks = np.empty((n, n), dtype=np.int32)
    np.put_along_axis(ranks, order, np.arange(n, dtype=np.int32)[None, :], axis=1)
    return ranks


def _values_and_direction(d):
    if isinstance(d, DistanceMatrix):
        return d.values, d.kind == KERNEL
    return np.asarray(d, dtype=float), False


def column_ranks(d: Union[DistanceMatrix, np.ndarray]) -> RankMatrix:
    """Rank every sample within each column (0 for the column's own sample).

    Distances are ranked ascending and kernel similarities descending;
    ties go to the smaller row index.
    """
    v, desc = _values_and_direction(d)
    return RankMatrix(np.ascontiguousarray(_row_ranks(v.T, desc).T), "by_column")


def row_ranks(d: Union[DistanceMatrix, np.ndarray]) -> RankMatrix:
    """Rank every sample within each row (0 for the row's own sample)."""
    v, desc = _values_and_direction(d)
    return RankMatrix(_row_ranks(v, desc), "by_row")


def check_permutation(pi, n: int) -> np.ndarray:
    pi = np.asarray(pi)
    if pi.shape != (n,) or not np.issubdtype(pi.dtype, np.integer):
        raise ValueError(f"permutation must be an integer vector of length {n}")
    if not np.array_equal(np.sort(pi), np.arange(n)):
        raise ValueError("permutation is not a bijection on 0..n-1")
    return pi


def apply_permutation(d: DistanceMatrix, pi) -> DistanceMatrix:
    """Relabel samples: ``result[i, j] = d[pi[i], pi[j]]``."""
    pi = check_permutation(pi, d.n)
    return DistanceMatrix(d.values[np.ix_(pi, pi)], kind=d.kind)


def permute_ranks(r: RankMatrix, pi) -> RankMatrix:
    """Ranks of the relabelled matrix, obtained by index remapping.

    Equal to re-ranking ``apply_permutation(d, pi)`` from scratch whenever
    the matrix has no tied off-diagonal entries within a row/column.
    """
    pi = check_permutation(pi, r.n)
    return RankMatrix(r.ranks[np.ix_(pi, pi)], r.orientation)


def has_ties(d: Union[DistanceMatrix, np.ndarray]) -> bool:
    """True when some row holds two equal off-diagonal entries."""
    v, _ = _values_and_direction(d)
    n = v.shape[0]
    if n < 3:
        return False
    off = v[~np.eye(n, dtype=bool)].reshape(n, n - 1)
    s = np.sort(off, axis=1)
    return bool(np.any(s[:, 1:] == s[:, :-1]))
