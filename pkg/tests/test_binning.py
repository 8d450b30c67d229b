import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import _oracles as oracle
from dftrft.binning import BinningConfig, bin_indices, build_histogram, candidate_thresholds
from dftrft.data import DataValidationError, Target


def test_thresholds_examples():
    np.testing.assert_array_equal(candidate_thresholds(0, 3, BinningConfig(4)).thresholds,
                                  [0.75, 1.5, 2.25])
    t = candidate_thresholds(0, 8, BinningConfig(16)).thresholds
    np.testing.assert_array_equal(t, np.arange(1, 16) * 0.5)
    assert len(candidate_thresholds(5, 5, BinningConfig(16))) == 0


def test_config_rejects_small_b():
    with pytest.raises(ValueError, match="bins must be"):
        BinningConfig(1)


def test_thresholds_strictly_increasing():
    t = candidate_thresholds(-2.3, 7.1, BinningConfig(32)).thresholds
    assert len(t) == 31
    assert np.all(np.diff(t) > 0)


@pytest.mark.parametrize("lo, hi", [(0.0, 1.0), (-3.7, 12.9), (1e-3, 1e-3 + 1e-9), (-1e6, 3.3e5)])
def test_nesting_power_of_two(lo, hi):
    for j in range(1, 6):
        small = set(candidate_thresholds(lo, hi, BinningConfig(2**j)).thresholds.tolist())
        big = set(candidate_thresholds(lo, hi, BinningConfig(2 ** (j + 1))).thresholds.tolist())
        assert small < big


def test_histogram_class_counts_example():
    h = build_histogram([0, 1, 2, 3], Target.categorical([0, 0, 1, 1]), BinningConfig(4))
    np.testing.assert_array_equal(h.class_counts, [[1, 1, 0, 0], [0, 0, 1, 1]])


def test_histogram_moments_example():
    h = build_histogram([0, 1, 2, 3], Target.continuous([0, 2, 10, 12]), BinningConfig(4))
    got = np.column_stack([h.count, h.sum, h.sumsq])
    np.testing.assert_array_equal(got, [[1, 0, 0], [1, 2, 4], [1, 10, 100], [1, 12, 144]])


def test_constant_feature_lands_in_top_bin():
    h = build_histogram([5, 5, 5], Target.categorical([0, 1, 0]), BinningConfig(16))
    assert h.degenerate
    assert h.bin_counts()[15] == 3 and h.bin_counts().sum() == 3


def test_max_sample_in_top_bin_and_threshold_ties_go_right():
    x = np.array([0.0, 1.5, 3.0])
    cand = candidate_thresholds(0.0, 3.0, BinningConfig(4))
    # 1.5 equals the second threshold, so it is not left of it.
    assert bin_indices(x, cand, 4).tolist() == [0, 2, 3]


def test_length_mismatch():
    with pytest.raises(DataValidationError):
        build_histogram([0, 1, 2], Target.categorical([0, 1]), BinningConfig(4))


def test_floor_rule_on_generic_data():
    rng = np.random.default_rng(11)
    x = rng.normal(size=500)
    B = 16
    cand = candidate_thresholds(x.min(), x.max(), BinningConfig(B))
    floor_rule = np.clip(np.floor(B * (x - x.min()) / (x.max() - x.min())), 0, B - 1).astype(int)
    got = bin_indices(x, cand, B)
    # Differences can only come from samples within rounding distance of a threshold.
    off = np.flatnonzero(got != floor_rule)
    for i in off:
        assert np.min(np.abs(cand.thresholds - x[i])) < 1e-12 * (x.max() - x.min())


datasets = st.integers(2, 40).flatmap(
    lambda n: st.tuples(
        st.lists(st.one_of(st.integers(-5, 5).map(float),
                           st.floats(-100, 100, allow_nan=False, allow_infinity=False)),
                 min_size=n, max_size=n),
        st.lists(st.integers(0, 2), min_size=n, max_size=n),
        st.sampled_from([2, 4, 8, 16]),
    )
)


@settings(max_examples=200, deadline=None)
@given(datasets)
def test_prefix_sums_match_direct_scan(data):
    x, raw_labels, B = data
    labels = raw_labels + [0, 1]
    x = x + [x[0], x[-1]]
    t_cat = Target.categorical(labels, 3 if 2 in labels else 2)
    y = [float(v) * 1.5 - 2 for v in labels]
    hc = build_histogram(x, t_cat, BinningConfig(B))
    hm = build_histogram(x, Target.continuous(y), BinningConfig(B))
    assert hc.bin_counts().sum() == len(x)
    cands = hc.candidates.thresholds.tolist()
    assert cands == oracle.thresholds(x, B)
    if not cands:
        return
    lc = hc.left_class_counts()
    n_l, s_l, ss_l = hm.left_moments()
    for b, t in enumerate(cands):
        n, left_labels = oracle.left_stats(x, labels, t)
        _, left_y = oracle.left_stats(x, y, t)
        assert [left_labels.count(c) for c in range(t_cat.n_classes)] == lc[:, b].tolist()
        assert n_l[b] == n
        assert s_l[b] == pytest.approx(sum(left_y), abs=1e-9)
        assert ss_l[b] == pytest.approx(sum(v * v for v in left_y), abs=1e-9)


def test_affine_map_keeps_bins_exactly():
    # Power-of-two scale and integer shift on integer data keep every value exact.
    rng = np.random.default_rng(5)
    for _ in range(50):
        x = rng.integers(-20, 20, size=30).astype(float)
        a, c = 2.0 ** rng.integers(-3, 4), float(rng.integers(-50, 50))
        for B in (4, 16):
            ca = candidate_thresholds(x.min(), x.max(), BinningConfig(B))
            cb = candidate_thresholds((a * x + c).min(), (a * x + c).max(), BinningConfig(B))
            np.testing.assert_array_equal(cb.thresholds, a * ca.thresholds + c)
            np.testing.assert_array_equal(bin_indices(x, ca, B), bin_indices(a * x + c, cb, B))


def test_affine_map_generic_floats():
    rng = np.random.default_rng(6)
    for _ in range(50):
        x = rng.normal(size=60)
        a, c = rng.uniform(0.01, 100), rng.uniform(-100, 100)
        ca = candidate_thresholds(x.min(), x.max(), BinningConfig(16))
        cb = candidate_thresholds((a * x + c).min(), (a * x + c).max(), BinningConfig(16))
        np.testing.assert_allclose(cb.thresholds, a * ca.thresholds + c, rtol=1e-12, atol=1e-12 * (abs(c) + a))
        np.testing.assert_array_equal(bin_indices(x, ca, 16), bin_indices(a * x + c, cb, 16))


def test_affine_map_integer_data_on_grid():
    # Integer values land on thresholds; generic a, c round differently on each side.
    rng = np.random.default_rng(8)
    for _ in range(200):
        x = rng.integers(0, 5, size=40).astype(float)
        x[:2] = [0, 4]
        a, c = rng.uniform(0.01, 100), rng.uniform(-100, 100)
        for B in (4, 8, 16):
            ca = candidate_thresholds(x.min(), x.max(), BinningConfig(B))
            y = a * x + c
            cb = candidate_thresholds(y.min(), y.max(), BinningConfig(B))
            np.testing.assert_array_equal(bin_indices(x, ca, B), bin_indices(y, cb, B))
