"""Local generalized correlations, one scale at a time or all at once.

Scale ``(k, l)`` keeps the cells whose x-rank (by column) is below ``k``
and whose y-rank (by row) is below ``l``; with self-rank 0, ``k = 1``
keeps only the diagonal and ``(n, n)`` keeps everything. Means and
variances run over all ``n^2`` cells, masked-out zeros included.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Tuple

import numpy as np

from .centering import CenteredMatrix
from .exceptions import ShapeError
from .geometry import RankMatrix

# variances below this fraction of the full-scale sum of squares are roundoff
VAR_RTOL = 1e-13


@dataclass(frozen=True)
class LocalCorrMap:
    """Local correlations; ``corr[k-1, l-1]`` is scale ``(k, l)``."""

    corr: np.ndarray
    scheme_pair: Optional[Tuple[str, str]] = None

    @property
    def n(self) -> int:
        return self.corr.shape[0]

    @property
    def global_corr(self) -> float:
        return float(self.corr[-1, -1])

    def at(self, k: int, l: int) -> float:
        return float(self.corr[k - 1, l - 1])


def _arr(m) -> np.ndarray:
    if isinstance(m, CenteredMatrix):
        return m.values
    if isinstance(m, RankMatrix):
        return m.ranks
    return np.asarray(m)


def _check_shapes(*ms) -> int:
    n = ms[0].shape[0]
    for m in ms:
        if m.shape != (n, n):
            raise ShapeError(f"expected {n}x{n} inputs, got {m.shape}")
    return n


def _normalize(cov, var_a, var_b, floor_a, floor_b):
    """``cov / sqrt(var_a var_b)`` with zero wherever a variance vanishes."""
    ok_a = var_a > floor_a
    ok_b = var_b > floor_b
    denom = np.sqrt(np.where(ok_a, var_a, 1.0) * np.where(ok_b, var_b, 1.0))
    return np.where(ok_a & ok_b, cov / denom, 0.0)


def global_corr(a, b) -> float:
    """Correlation of the two centered matrices across all ``n^2`` cells.

    ``sum((a - mean a)(b - mean b)) / (n^2 sd_a sd_b)``; 0 when either
    matrix is constant.
    """
    a = np.asarray(_arr(a), dtype=float)
    b = np.asarray(_arr(b), dtype=float)
    n = _check_shapes(a, b)
    nn = float(n * n)
    ea, eb = a.sum(), b.sum()
    va, vb = np.vdot(a, a), np.vdot(b, b)
    cov = np.vdot(a, b) - ea * eb / nn
    out = _normalize(cov, va - ea * ea / nn, vb - eb * eb / nn, VAR_RTOL * va, VAR_RTOL * vb)
    return float(out)


def local_corr_at_scale(A, B, rA, rB, k: int, l: int) -> float:
    """Local correlation at one scale, straight from the masked matrices.

    ``rA`` must rank by column and ``rB`` by row.
    """
    a, b = _arr(A).astype(float), _arr(B).astype(float)
    ra, rb = _arr(rA), _arr(rB)
    n = _check_shapes(a, b, ra, rb)
    if not (1 <= k <= n and 1 <= l <= n):
        raise ValueError(f"scale ({k}, {l}) outside 1..{n}")
    nn = float(n * n)
    ak = np.where(ra < k, a, 0.0)
    bl = np.where(rb < l, b, 0.0)
    ea, eb = ak.sum(), bl.sum()
    va, vb = np.vdot(ak, ak), np.vdot(bl, bl)
    cov = np.vdot(ak, bl) - ea * eb / nn
    # floors come from the full matrices so both code paths agree
    fa, fb = VAR_RTOL * np.vdot(a, a), VAR_RTOL * np.vdot(b, b)
    return float(_normalize(cov, va - ea * ea / nn, vb - eb * eb / nn, fa, fb))


def local_corr_map_arrays(a: np.ndarray, b: np.ndarray, ra: np.ndarray, rb: np.ndarray) -> np.ndarray:
    """All ``n^2`` local correlations in ``O(n^2)`` after ranking.

    Each cell ``(i, j)`` deposits ``a_ij b_ij`` at grid position
    ``(ra_ij, rb_ij)`` and ``a_ij``, ``a_ij^2`` (``b_ij``, ``b_ij^2``) at
    index ``ra_ij`` (``rb_ij``). Cumulative sums along both grid axes then
    give, at ``(k-1, l-1)``, the sums over every cell inside scale
    ``(k, l)``; this is the same quantity the 2-d inclusion-exclusion
    recurrence produces.
    """
    n = a.shape[0]
    nn = float(n * n)
    ra_flat = ra.ravel().astype(np.intp)
    rb_flat = rb.ravel().astype(np.intp)
    a_flat = a.ravel()
    b_flat = b.ravel()

    cross = np.bincount(ra_flat * n + rb_flat, weights=a_flat * b_flat, minlength=n * n)
    cross = cross.reshape(n, n)
    np.cumsum(cross, axis=0, out=cross)
    np.cumsum(cross, axis=1, out=cross)

    ea = np.cumsum(np.bincount(ra_flat, weights=a_flat, minlength=n))
    va = np.cumsum(np.bincount(ra_flat, weights=a_flat * a_flat, minlength=n))
    eb = np.cumsum(np.bincount(rb_flat, weights=b_flat, minlength=n))
    vb = np.cumsum(np.bincount(rb_flat, weights=b_flat * b_flat, minlength=n))

    var_a = va - ea * ea / nn
    var_b = vb - eb * eb / nn
    cross -= np.outer(ea, eb) / nn
    ok_a = var_a > VAR_RTOL * va[-1]
    ok_b = var_b > VAR_RTOL * vb[-1]
    sa = np.where(ok_a, np.sqrt(np.where(ok_a, var_a, 1.0)), np.inf)
    sb = np.where(ok_b, np.sqrt(np.where(ok_b, var_b, 1.0)), np.inf)
    cross /= sa[:, None]
    cross /= sb[None, :]
    # dividing by inf leaves -0.0 behind for negative numerators
    cross += 0.0
    return cross


def all_local_corrs(A, B, rA, rB) -> LocalCorrMap:
    """Every local correlation at once; see :func:`local_corr_map_arrays`."""
    a, b = _arr(A).astype(float, copy=False), _arr(B).astype(float, copy=False)
    ra, rb = _arr(rA), _arr(rB)
    _check_shapes(a, b, ra, rb)
    if isinstance(rA, RankMatrix) and rA.orientation != "by_column":
        raise ValueError("rA must be ranked by column")
    if isinstance(rB, RankMatrix) and rB.orientation != "by_row":
        raise ValueError("rB must be ranked by row")
    pair = None
    if isinstance(A, CenteredMatrix) and isinstance(B, CenteredMatrix):
        pair = (A.scheme.value, B.scheme.value)
    return LocalCorrMap(local_corr_map_arrays(a, b, ra, rb), pair)
