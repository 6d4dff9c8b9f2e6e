import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ortho_group

from mgc.geometry import DistanceMatrix, apply_permutation, pairwise_distances
from mgc.mgcstat import (
    MGCConfig,
    largest_component,
    mgc_from_distances,
    mgc_statistic,
    significant_region,
    threshold,
)
from mgc.synth import SimulationSpec, sample_dependency

from oracles import flood_fill_components, reference_largest, union_find_components


def _pipeline(x, y, config=MGCConfig()):
    return mgc_from_distances(pairwise_distances(x), pairwise_distances(y), config)


def test_threshold_floor():
    c = np.zeros((100, 100))
    c[-1, -1] = 0.01
    assert threshold(c) == pytest.approx(0.035, abs=1e-15)


def test_threshold_from_negatives():
    c = np.full((10, 10), -0.1)
    c[0, 0] = 0.05
    c[-1, -1] = 0.02
    assert threshold(c) == pytest.approx(0.35, abs=1e-12)


def test_threshold_global_dominates():
    c = np.zeros((20, 20))
    c[-1, -1] = 0.9
    assert threshold(c) == 0.9


def test_threshold_two_over_n():
    assert threshold(np.zeros((10, 10))) == pytest.approx(0.2)


def test_empty_region():
    region, area = significant_region(np.zeros((8, 8)), 0.5)
    assert area == 0 and not region.any()


def test_larger_block_wins():
    c = np.zeros((12, 12))
    c[0:2, 0:2] = 1.0  # 4 cells
    c[6:8, 6:9] = 1.0  # 6 cells
    region, area = significant_region(c, 0.5)
    assert area == 6
    assert region[6:8, 6:9].all() and not region[0:2, 0:2].any()


def test_equal_blocks_go_to_earliest_cell():
    m = np.zeros((10, 10), dtype=bool)
    m[5:7, 0:2] = True
    m[0:2, 7:9] = True
    assert largest_component(m)[0, 7]


def test_diagonal_neighbours_connect():
    m = np.eye(6, dtype=bool)
    assert largest_component(m).sum() == 6


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1), st.floats(0.2, 0.7))
def test_region_matches_flood_fill(seed, density):
    m = np.random.default_rng(seed).random((20, 20)) < density
    expected = reference_largest(flood_fill_components(m), m.shape)
    np.testing.assert_array_equal(largest_component(m), expected)


def test_flood_fill_and_union_find_agree(rng):
    for _ in range(20):
        m = rng.random((15, 15)) < 0.45
        a = sorted(flood_fill_components(m))
        b = sorted(union_find_components(m))
        assert a == b


def test_single_cell_above_threshold_defaults():
    n = 10
    c = np.zeros((n, n))
    c[3, 4] = 0.8
    c[-1, -1] = 0.05
    sel = mgc_statistic(c)
    assert sel.region_area == 1
    assert sel.defaulted_to_global
    assert sel.statistic == 0.05 and sel.canonical_scale == (n, n) and sel.optimal_scales == [(n, n)]


def test_large_region_picks_its_maximum():
    n = 10
    c = np.zeros((n, n))
    c[2:6, 3:9] = 0.5
    c[4, 5] = 0.7
    c[3, 7] = 0.7
    sel = mgc_statistic(c)
    assert not sel.defaulted_to_global
    assert sel.statistic == 0.7
    assert sel.optimal_scales == [(4, 8), (5, 6)]
    assert sel.canonical_scale == (4, 8)
    assert sel.region_area == 24


@pytest.mark.parametrize("n", [20, 50])
@pytest.mark.parametrize("a", [1.0, -2.0])
@pytest.mark.parametrize("p", [1, 2, 3])
def test_exact_linear_selects_global_scale(rng, n, a, p):
    x = rng.standard_normal((n, p))
    sel, cmap = _pipeline(x, a * x + 3.0)
    assert sel.canonical_scale == (n, n)
    assert abs(sel.statistic - 1.0) <= 1e-12
    assert abs(cmap.global_corr - 1.0) <= 1e-12


@pytest.mark.parametrize("p", [1, 2, 3])
def test_orthogonal_map_selects_global_scale(p):
    x = np.random.default_rng(p).standard_normal((30, p))
    w = ortho_group.rvs(p, random_state=p) if p > 1 else np.array([[-1.0]])
    sel, _ = _pipeline(x, x @ w.T + 1.0)
    assert sel.canonical_scale == (30, 30)
    assert abs(sel.statistic - 1.0) <= 1e-12


def test_two_x_plus_one():
    x = np.random.default_rng(30).standard_normal((30, 1))
    sel, cmap = _pipeline(x, 2 * x + 1)
    assert abs(sel.statistic - 1.0) <= 1e-12
    assert abs(cmap.at(30, 30) - 1.0) <= 1e-12
    assert sel.canonical_scale == (30, 30)


def test_spiral_optimal_scale_is_local():
    pair = sample_dependency(SimulationSpec(8, 60, 1, 0.0, seed=1))
    sel, cmap = _pipeline(pair.x, pair.y)
    assert sel.canonical_scale != (60, 60)
    assert not sel.defaulted_to_global
    # frozen from this implementation's own pipeline at this seed
    assert sel.canonical_scale == (2, 8)
    assert sel.statistic == pytest.approx(0.06978672142038489, abs=1e-12)
    assert sel.statistic >= cmap.global_corr


def test_identical_matrices():
    d = pairwise_distances(np.random.default_rng(3).standard_normal((25, 2)))
    sel, _ = mgc_from_distances(d, d)
    assert sel.statistic == pytest.approx(1.0, abs=1e-12)
    assert sel.canonical_scale == (25, 25)


def test_mismatched_sizes():
    with pytest.raises(ValueError):
        mgc_from_distances(DistanceMatrix(np.zeros((4, 4))), DistanceMatrix(np.zeros((5, 5))))


@pytest.mark.xfail(
    strict=True,
    reason="the smoothed maximum never falls below the global value, so its null mean sits a few "
    "standard errors above zero at this trial count",
)
def test_null_mean_near_zero(rng):
    stats = np.array(
        [_pipeline(rng.standard_normal((100, 1)), rng.standard_normal((100, 1)))[0].statistic for _ in range(500)]
    )
    se = stats.std(ddof=1) / np.sqrt(stats.size)
    assert abs(stats.mean()) <= 3 * se


def test_null_global_mean_near_zero_and_mgc_above_it(rng):
    stats, globals_ = [], []
    for _ in range(300):
        sel, cmap = _pipeline(rng.standard_normal((100, 1)), rng.standard_normal((100, 1)))
        stats.append(sel.statistic)
        globals_.append(cmap.global_corr)
    stats, globals_ = np.array(stats), np.array(globals_)
    assert abs(globals_.mean()) <= 3 * globals_.std(ddof=1) / np.sqrt(globals_.size)
    assert np.all(stats >= globals_)


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 19))
def test_joint_relabelling_invariance(seed, sim):
    pair = sample_dependency(SimulationSpec(sim, 30, 1, 1.0, seed=seed))
    dx, dy = pairwise_distances(pair.x), pairwise_distances(pair.y)
    pi = np.random.default_rng(seed).permutation(30)
    base, _ = mgc_from_distances(dx, dy)
    moved, _ = mgc_from_distances(apply_permutation(dx, pi), apply_permutation(dy, pi))
    assert abs(base.statistic - moved.statistic) <= 1e-12


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from([0.5, 3.0, 1e3]))
def test_rescaling_inputs_changes_nothing(seed, factor):
    pair = sample_dependency(SimulationSpec(8, 40, 1, 1.0, seed=seed))
    sel, cmap = _pipeline(pair.x, pair.y)
    sel2, cmap2 = _pipeline(pair.x * factor, pair.y)
    sel3, cmap3 = _pipeline(pair.x, pair.y * factor)
    for other_sel, other_map in ((sel2, cmap2), (sel3, cmap3)):
        assert np.max(np.abs(other_map.corr - cmap.corr)) <= 1e-12
        assert other_sel.canonical_scale == sel.canonical_scale
        assert other_sel.defaulted_to_global == sel.defaulted_to_global


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_raising_threshold_never_grows_region(seed):
    c = np.random.default_rng(seed).uniform(-0.2, 0.6, (25, 25))
    areas = [significant_region(c, t)[1] for t in np.linspace(-0.2, 0.6, 17)]
    assert all(a >= b for a, b in zip(areas, areas[1:]))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(6, 19))
def test_statistic_dominates_global(seed, sim):
    pair = sample_dependency(SimulationSpec(sim, 50, 1, 1.0, seed=seed))
    sel, cmap = _pipeline(pair.x, pair.y)
    if sel.defaulted_to_global:
        assert sel.statistic == cmap.global_corr and sel.canonical_scale == (50, 50)
    else:
        assert sel.statistic >= cmap.global_corr
        assert sel.threshold >= cmap.global_corr
        for k, l in sel.optimal_scales:
            assert cmap.at(k, l) == sel.statistic
            assert sel.region_mask[k - 1, l - 1]
        assert sel.canonical_scale == min(sel.optimal_scales)
