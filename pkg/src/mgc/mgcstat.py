"""Smoothed maximum over the local correlation map."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import List, Tuple

import numpy as np
from scipy import ndimage

from .centering import Scheme, center_array
from .exceptions import ShapeError
from .geometry import DistanceMatrix, KERNEL, _row_ranks
from .localcorr import LocalCorrMap, local_corr_map_arrays

_EIGHT = np.ones((3, 3), dtype=bool)


@dataclass(frozen=True)
class MGCConfig:
    """Centering applied to the x and y comparison matrices."""

    scheme_x: Scheme = Scheme.UNBIASED
    scheme_y: Scheme = Scheme.UNBIASED

    @classmethod
    def single(cls) -> "MGCConfig":
        """Column-centered x with row-centered y."""
        return cls(Scheme.SINGLE_COLUMN, Scheme.SINGLE_ROW)

    @classmethod
    def mantel(cls) -> "MGCConfig":
        return cls(Scheme.SIMPLE, Scheme.SIMPLE)


@dataclass(frozen=True)
class ScaleSelection:
    statistic: float
    optimal_scales: List[Tuple[int, int]]
    canonical_scale: Tuple[int, int]
    threshold: float
    region_mask: np.ndarray = field(repr=False)
    region_area: int
    defaulted_to_global: bool


def _corr(m) -> np.ndarray:
    return m.corr if isinstance(m, LocalCorrMap) else np.asarray(m, dtype=float)


def threshold(m) -> float:
    """Significance cut-off derived from the negative local correlations.

    ``3.5 * max(0.01, sqrt(mean of squared negatives))``, raised to at
    least ``2/n`` and to the global correlation.
    """
    c = _corr(m)
    n = c.shape[0]
    neg = c[c < 0]
    tau0 = float(np.mean(neg * neg)) if neg.size else 0.0
    tau1 = max(0.01, np.sqrt(tau0)) * 3.5
    return float(max(tau1, 2.0 / n, c[-1, -1]))


def largest_component(mask: np.ndarray) -> np.ndarray:
    """Largest 8-connected component of a boolean grid.

    Equal-sized components are resolved in favour of the one holding the
    lexicographically smallest cell.
    """
    mask = np.asarray(mask, dtype=bool)
    labels, count = ndimage.label(mask, structure=_EIGHT)
    if count == 0:
        return np.zeros_like(mask)
    sizes = np.bincount(labels.ravel())[1:]
    # labels are issued in raster order, so argmax picks the earliest tie
    return labels == (int(np.argmax(sizes)) + 1)


def significant_region(m, tau: float) -> Tuple[np.ndarray, int]:
    region = largest_component(_corr(m) > tau)
    return region, int(region.sum())


def mgc_statistic(m) -> ScaleSelection:
    """Smoothed maximum of a local correlation map.

    The global correlation is used unless the largest significant region
    covers at least ``2n`` scales, in which case the statistic is the
    largest correlation inside it.
    """
    c = _corr(m)
    n = c.shape[0]
    tau = threshold(c)
    region, area = significant_region(c, tau)
    if area >= 2 * n:
        stat = float(np.max(c[region]))
        ks, ls = np.nonzero(region & (c == stat))
        scales = sorted((int(k) + 1, int(l) + 1) for k, l in zip(ks, ls))
        return ScaleSelection(stat, scales, scales[0], tau, region, area, False)
    return ScaleSelection(float(c[-1, -1]), [(n, n)], (n, n), tau, region, area, True)


def _ranks_for(m: np.ndarray, kind: str, by: str) -> np.ndarray:
    desc = kind == KERNEL
    if by == "column":
        return np.ascontiguousarray(_row_ranks(m.T, desc).T)
    return _row_ranks(m, desc)


def mgc_from_distances(dA, dB, config: MGCConfig = MGCConfig()):
    """Full statistic pipeline on two comparison matrices.

    Returns
    -------
    (ScaleSelection, LocalCorrMap)
    """
    va = dA.values if isinstance(dA, DistanceMatrix) else np.asarray(dA, dtype=float)
    vb = dB.values if isinstance(dB, DistanceMatrix) else np.asarray(dB, dtype=float)
    if va.shape != vb.shape:
        raise ShapeError(f"sample counts differ: {va.shape[0]} vs {vb.shape[0]}")
    kind_a = dA.kind if isinstance(dA, DistanceMatrix) else "distance"
    kind_b = dB.kind if isinstance(dB, DistanceMatrix) else "distance"
    a = center_array(va, config.scheme_x)
    b = center_array(vb, config.scheme_y)
    ra = _ranks_for(va, kind_a, "column")
    rb = _ranks_for(vb, kind_b, "row")
    cmap = LocalCorrMap(
        local_corr_map_arrays(a, b, ra, rb),
        (Scheme(config.scheme_x).value, Scheme(config.scheme_y).value),
    )
    return mgc_statistic(cmap), cmap
