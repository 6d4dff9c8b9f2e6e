"""Test statistics, permutation p-values, power and FDR control.

Every random draw in a replicate loop comes from a generator seeded with
``SeedSequence([seed, index])``, so results do not depend on how the
replicates are spread over worker processes.
"""

from __future__ import annotations

import dataclasses
import enum
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .centering import Scheme, center_array
from .dataio import SampleSet
from .exceptions import DomainError, ShapeError
from .geometry import DISTANCE, KERNEL, DistanceMatrix, _row_ranks, has_ties, kernel_from_distances, pairwise_distances
from .localcorr import LocalCorrMap, global_corr, local_corr_map_arrays
from .mgcstat import ScaleSelection, mgc_statistic
from .synth import SimulationSpec, sample_dependency, sample_null


class Method(str, enum.Enum):
    MGC = "mgc"
    MGC_MANTEL = "mgc-mantel"
    DCORR = "dcorr"
    MCORR = "mcorr"
    MANTEL = "mantel"
    HSIC = "hsic"


_DEFAULT_SCHEME = {
    Method.MGC: Scheme.UNBIASED,
    Method.MGC_MANTEL: Scheme.SIMPLE,
    Method.DCORR: Scheme.DOUBLE,
    Method.MCORR: Scheme.UNBIASED,
    Method.MANTEL: Scheme.SIMPLE,
    Method.HSIC: Scheme.DOUBLE,
}
LOCAL_METHODS = frozenset({Method.MGC, Method.MGC_MANTEL})

# null statistics this close to the observed one count as ties; relabelling
# changes summation order, which moves exact ties by a few ulps
TIE_ATOL = 1e-12


@dataclass(frozen=True)
class MethodSpec:
    """A named statistic plus its centering (and kernel bandwidth for HSIC)."""

    name: Method
    scheme_x: Optional[Scheme] = None
    scheme_y: Optional[Scheme] = None
    bandwidth: Union[str, float] = "median"

    def __post_init__(self):
        object.__setattr__(self, "name", Method(self.name))
        default = _DEFAULT_SCHEME[self.name]
        object.__setattr__(self, "scheme_x", Scheme(self.scheme_x or default))
        object.__setattr__(self, "scheme_y", Scheme(self.scheme_y or default))

    @property
    def is_local(self) -> bool:
        return self.name in LOCAL_METHODS


MethodLike = Union[MethodSpec, Method, str]


def as_method(m: MethodLike) -> MethodSpec:
    return m if isinstance(m, MethodSpec) else MethodSpec(Method(m))


@dataclass(frozen=True)
class PValue:
    value: float
    num_permutations: int
    num_ge: int


@dataclass(frozen=True)
class PowerEstimate:
    power: float
    alpha: float
    critical_value: float
    num_replicates: int
    standard_error: float


@dataclass(frozen=True)
class TestResult:
    """Observed statistic, its p-value and (for local methods) the scale choice."""

    statistic: float
    pvalue: PValue
    selection: Optional[ScaleSelection]
    corr_map: Optional[LocalCorrMap]
    null_statistics: np.ndarray


# ---------------------------------------------------------------- statistics


def _values(d) -> Tuple[np.ndarray, str]:
    if isinstance(d, DistanceMatrix):
        return d.values, d.kind
    return np.asarray(d, dtype=float), DISTANCE


def _comparison(d, spec: MethodSpec) -> Tuple[np.ndarray, str]:
    v, kind = _values(d)
    if spec.name is Method.HSIC and kind == DISTANCE:
        return kernel_from_distances(v, spec.bandwidth).values, KERNEL
    return v, kind


def _col_ranks(v: np.ndarray, kind: str) -> np.ndarray:
    return np.ascontiguousarray(_row_ranks(v.T, kind == KERNEL).T)


@dataclass
class _Prepared:
    """Centered matrices and ranks, reused across permutations of y."""

    spec: MethodSpec
    a: np.ndarray
    b: np.ndarray
    ra: Optional[np.ndarray]
    rb: Optional[np.ndarray]
    raw_b: np.ndarray
    kind_b: str
    rerank: bool

    @classmethod
    def build(cls, spec: MethodSpec, dA, dB) -> "_Prepared":
        va, kind_a = _comparison(dA, spec)
        vb, kind_b = _comparison(dB, spec)
        if va.shape != vb.shape:
            raise ShapeError(f"sample counts differ: {va.shape[0]} vs {vb.shape[0]}")
        a = center_array(va, spec.scheme_x)
        b = center_array(vb, spec.scheme_y)
        ra = rb = None
        rerank = False
        if spec.is_local:
            ra = _col_ranks(va, kind_a)
            rb = _row_ranks(vb, kind_b == KERNEL)
            # relabelled ranks equal fresh ranks only when there are no ties
            rerank = has_ties(vb)
        return cls(spec, a, b, ra, rb, vb, kind_b, rerank)

    def corr_map(self, pi=None) -> LocalCorrMap:
        b, rb = self.b, self.rb
        if pi is not None:
            idx = np.ix_(pi, pi)
            b = b[idx]
            if self.rerank:
                rb = _row_ranks(self.raw_b[idx], self.kind_b == KERNEL)
            else:
                rb = rb[idx]
        pair = (self.spec.scheme_x.value, self.spec.scheme_y.value)
        return LocalCorrMap(local_corr_map_arrays(self.a, b, self.ra, rb), pair)

    def stat(self, pi=None) -> float:
        if self.spec.is_local:
            return mgc_statistic(self.corr_map(pi)).statistic
        b = self.b if pi is None else self.b[np.ix_(pi, pi)]
        return global_corr(self.a, b)


def statistic(method: MethodLike, dA, dB) -> float:
    """Value of ``method`` on a pair of distance matrices.

    DCORR, MCORR and MANTEL correlate the double-, U- and simply-centered
    distances; HSIC does the same with double-centered Gaussian kernels
    (median bandwidth). MGC and MGC_MANTEL return the smoothed maximum of
    their local correlation maps.
    """
    return _Prepared.build(as_method(method), dA, dB).stat()


def statistic_from_samples(method: MethodLike, x, y) -> float:
    return statistic(method, pairwise_distances(x), pairwise_distances(y))


# --------------------------------------------------------------- permutation


def replicate_rng(seed: int, index: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence([int(seed), int(index)]))


def permutation_for(seed: int, index: int, n: int) -> np.ndarray:
    return replicate_rng(seed, index).permutation(n)


def _perm_chunk(prep: _Prepared, seed: int, start: int, stop: int) -> np.ndarray:
    n = prep.a.shape[0]
    return np.array([prep.stat(permutation_for(seed, t, n)) for t in range(start, stop)])


def _chunks(total: int, workers: int) -> List[Tuple[int, int]]:
    # boundaries depend only on (total, workers); results are concatenated in order
    size = max(1, math.ceil(total / max(1, workers * 4)))
    return [(s, min(s + size, total)) for s in range(0, total, size)]


def _run_chunked(fn, args, total: int, workers: int) -> np.ndarray:
    if workers <= 1 or total <= 1:
        return fn(*args, 0, total)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        futures = [pool.submit(fn, *args, s, e) for s, e in _chunks(total, workers)]
        parts = [f.result() for f in futures]
    return np.concatenate(parts)


def permutation_test(method: MethodLike, dA, dB, r: int = 1000, seed: int = 0, workers: int = 1) -> TestResult:
    """Permutation p-value: ``(#{null >= observed} + 1) / (r + 1)``.

    Null values within ``TIE_ATOL`` of the observed statistic count as ties.

    Permutation ``t`` relabels the samples of ``dB`` with a permutation
    drawn from ``SeedSequence([seed, t])``.
    """
    if r < 1:
        raise ValueError(f"need at least one permutation, got r={r}")
    spec = as_method(method)
    prep = _Prepared.build(spec, dA, dB)
    selection = cmap = None
    if spec.is_local:
        cmap = prep.corr_map()
        selection = mgc_statistic(cmap)
        observed = selection.statistic
    else:
        observed = prep.stat()
    null = _run_chunked(_perm_chunk, (prep, seed), r, workers)
    num_ge = int(np.sum(null >= observed - TIE_ATOL))
    pv = PValue((num_ge + 1) / (r + 1), r, num_ge)
    return TestResult(observed, pv, selection, cmap, null)


# --------------------------------------------------------------------- power


def critical_value(null_stats: np.ndarray, alpha: float) -> float:
    """The ``ceil((1 - alpha) r)``-th smallest null statistic."""
    r = len(null_stats)
    rank = math.ceil(round((1.0 - alpha) * r, 9))
    rank = min(max(rank, 1), r)
    return float(np.sort(null_stats)[rank - 1])


def _power_chunk(sim: SimulationSpec, specs: Tuple[MethodSpec, ...], seed: int, start: int, stop: int) -> np.ndarray:
    out = np.empty((stop - start, 2, len(specs)))
    for row, t in enumerate(range(start, stop)):
        rng = replicate_rng(seed, t)
        pairs = (sample_null(sim, rng), sample_dependency(sim, rng))
        for which, pair in enumerate(pairs):
            dx, dy = pairwise_distances(pair.x), pairwise_distances(pair.y)
            for m, spec in enumerate(specs):
                out[row, which, m] = _Prepared.build(spec, dx, dy).stat()
    return out


def replicate_statistics(sim: SimulationSpec, methods: Sequence[MethodLike], r: int, seed: int = 0, workers: int = 1) -> np.ndarray:
    """Statistics of every method on ``r`` null and ``r`` alternative draws.

    Returns an array of shape ``(r, 2, len(methods))``; index 0 on the
    middle axis is the null draw, 1 the dependent draw.
    """
    specs = tuple(as_method(m) for m in methods)
    return _run_chunked(_power_chunk, (sim, specs, seed), r, workers)


def power_from_statistics(null_stats, alt_stats, alpha: float) -> PowerEstimate:
    null_stats = np.asarray(null_stats, dtype=float)
    alt_stats = np.asarray(alt_stats, dtype=float)
    omega = critical_value(null_stats, alpha)
    power = float(np.mean(alt_stats > omega))
    r = len(alt_stats)
    return PowerEstimate(power, alpha, omega, r, math.sqrt(power * (1 - power) / r))


def _check_alpha(alpha):
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"alpha must lie in (0, 1), got {alpha}")


def estimate_power(sim: SimulationSpec, method: MethodLike, n: Optional[int] = None, r: int = 1000, alpha: float = 0.05, seed: int = 0, workers: int = 1) -> PowerEstimate:
    """Monte-Carlo power of ``method`` against relationship ``sim``.

    Null replicates redraw x and y independently from their marginals;
    the critical value is the empirical ``1 - alpha`` quantile of the null
    statistics and power is the share of alternative statistics strictly
    above it.
    """
    return estimate_power_many(sim, [method], n, r, alpha, seed, workers)[0]


def estimate_power_many(sim: SimulationSpec, methods: Sequence[MethodLike], n: Optional[int] = None, r: int = 1000, alpha: float = 0.05, seed: int = 0, workers: int = 1) -> List[PowerEstimate]:
    """Like :func:`estimate_power` for several methods on shared draws."""
    _check_alpha(alpha)
    if r < 1:
        raise ValueError(f"need at least one replicate, got r={r}")
    if n is not None:
        sim = dataclasses.replace(sim, n=n)
    stats = replicate_statistics(sim, methods, r, seed, workers)
    return [power_from_statistics(stats[:, 0, m], stats[:, 1, m], alpha) for m in range(len(methods))]


def sample_size_for_power(sim: SimulationSpec, method: MethodLike, target: float, alpha: float = 0.05, n_grid: Sequence[int] = (), r: int = 1000, seed: int = 0, workers: int = 1) -> Optional[int]:
    """Smallest ``n`` on the (ascending) grid whose power reaches ``target``.

    Returns ``None`` when no grid size gets there.
    """
    grid = list(n_grid)
    if not grid:
        raise ValueError("n_grid is empty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("n_grid must be strictly ascending")
    if target > 1:
        return None
    for n in grid:
        est = estimate_power(sim, method, n, r, alpha, seed, workers)
        if est.power >= target:
            return n
    return None


# ------------------------------------------------------------ multiple tests


def adjust_pvalues_bh(pvals, q: float = 0.05) -> Tuple[np.ndarray, np.ndarray]:
    """Benjamini-Hochberg step-up procedure.

    Returns
    -------
    reject : bool array
        True for hypotheses rejected at FDR level ``q``.
    adjusted : float array
        BH-adjusted p-values; ``reject == (adjusted <= q)``.
    """
    p = np.asarray(pvals, dtype=float).ravel()
    if np.any(~np.isfinite(p)) or np.any((p < 0) | (p > 1)):
        raise DomainError("p-values must lie in [0, 1]")
    if not 0.0 < q < 1.0:
        raise DomainError(f"q must lie in (0, 1), got {q}")
    m = p.size
    if m == 0:
        return np.zeros(0, dtype=bool), np.zeros(0)
    order = np.argsort(p, kind="stable")
    ranks = np.arange(1, m + 1)
    p_sorted = p[order]
    passing = np.nonzero(p_sorted <= ranks * q / m)[0]
    reject_sorted = ranks <= (passing[-1] + 1 if passing.size else 0)
    scaled = p_sorted * m / ranks
    adj_sorted = np.minimum(np.minimum.accumulate(scaled[::-1])[::-1], 1.0)
    # keep adjusted <= q in step with the step-up decision at 1-ulp boundaries
    adj_sorted = np.where(reject_sorted, np.minimum(adj_sorted, q), np.maximum(adj_sorted, np.nextafter(q, 2.0)))
    adjusted = np.empty(m)
    adjusted[order] = adj_sorted
    reject = np.empty(m, dtype=bool)
    reject[order] = reject_sorted
    return reject, adjusted
