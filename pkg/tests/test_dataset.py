"""Normalization, windowing, split, and FWD1 serialization contracts."""

import numpy as np
import pytest

from fracmusic.dataset import (
    FeatureDataset,
    NormParams,
    combine_complex,
    denormalize,
    gather_windows,
    load_dataset,
    make_windows,
    normalize,
    save_dataset,
    split_complex,
    train_test_split,
    window_starts,
)
from fracmusic.errors import (
    BadMagic,
    ConstantChannel,
    EmptyInput,
    IntervalTooShort,
    ResultingIntervalTooShort,
    VersionMismatch,
)


def small_dataset(n=40, window=4, horizon=1, split=30, seed=0):
    rng = np.random.default_rng(seed)
    raw_r = rng.normal(size=n)
    raw_i = rng.normal(size=n)
    r, pr = normalize(raw_r[:split])
    i, pi = normalize(raw_i[:split])
    full_r, _ = normalize(raw_r, pr)
    full_i, _ = normalize(raw_i, pi)
    return FeatureDataset(
        real_channel=full_r,
        imag_channel=full_i,
        real_norm=pr,
        imag_norm=pi,
        window_len=window,
        horizon=horizon,
        split_index=split,
    )


class TestSplitCombine:
    def test_componentwise(self):
        re, im = split_complex(np.array([1 + 2j, 3 - 4j]))
        np.testing.assert_array_equal(re, [1, 3])
        np.testing.assert_array_equal(im, [2, -4])

    def test_real_signal_zero_imag(self):
        _, im = split_complex(np.array([1.0, 2.0, 3.0]))
        np.testing.assert_array_equal(im, np.zeros(3))

    def test_combine_inverts_split_exactly(self):
        rng = np.random.default_rng(1)
        x = rng.normal(size=20) + 1j * rng.normal(size=20)
        np.testing.assert_array_equal(combine_complex(*split_complex(x)), x)

    def test_empty_rejected(self):
        with pytest.raises(EmptyInput):
            split_complex(np.array([]))


class TestNormalize:
    def test_endpoints_map_to_unit_interval(self):
        y, p = normalize([0.0, 5.0, 10.0])
        np.testing.assert_allclose(y, [-1.0, 0.0, 1.0])
        assert p == NormParams(0.0, 10.0)

    def test_already_normalized_endpoints_fixed(self):
        y, _ = normalize([-1.0, 1.0])
        np.testing.assert_allclose(y, [-1.0, 1.0])

    def test_roundtrip(self):
        rng = np.random.default_rng(2)
        for seed in range(5):
            x = np.random.default_rng(seed).normal(size=200) * rng.uniform(0.1, 50)
            y, p = normalize(x)
            assert np.max(np.abs(denormalize(y, p) - x)) <= 1e-12
            assert y.min() >= -1.0 and y.max() <= 1.0

    def test_constant_channel_rejected(self):
        with pytest.raises(ConstantChannel):
            normalize(np.full(10, 3.3))

    def test_denormalize_examples(self):
        p = NormParams(0.0, 10.0)
        np.testing.assert_allclose(denormalize([-1.0, 0.0, 1.0], p), [0, 5, 10])
        assert denormalize(np.array([]), p).size == 0
        assert denormalize([1.2], p)[0] == pytest.approx(11.0)


class TestMakeWindows:
    def test_count_formula(self):
        batch = make_windows(np.arange(1000.0), 200, 1, (0, 1000))
        assert batch.inputs.shape == (800, 200)
        assert batch.targets.shape == (800, 1)

    def test_enumeration(self):
        batch = make_windows(np.array([1.0, 2, 3, 4, 5]), 2, 1, (0, 5))
        np.testing.assert_array_equal(batch.inputs, [[1, 2], [2, 3], [3, 4]])
        np.testing.assert_array_equal(batch.targets, [[3], [4], [5]])

    def test_boundary_single_pair(self):
        batch = make_windows(np.arange(5.0), 4, 1, (0, 5))
        assert batch.inputs.shape == (1, 4)

    def test_too_short(self):
        with pytest.raises(IntervalTooShort):
            make_windows(np.arange(5.0), 5, 1, (0, 5))

    def test_shift_property_brute_force(self):
        # every target equals the channel value right after its window
        rng = np.random.default_rng(3)
        x = rng.normal(size=50)
        for window in (1, 3, 7):
            for horizon in (1, 2):
                batch = make_windows(x, window, horizon, (5, 45))
                for i in range(batch.inputs.shape[0]):
                    s = 5 + i
                    np.testing.assert_array_equal(batch.inputs[i], x[s:s + window])
                    np.testing.assert_array_equal(
                        batch.targets[i], x[s + window:s + window + horizon]
                    )

    def test_lazy_path_matches(self):
        rng = np.random.default_rng(4)
        x = rng.normal(size=100)
        for stride in (1, 3, 10):
            batch = make_windows(x, 8, 1, (10, 90), stride=stride)
            starts = window_starts((10, 90), 8, 1, stride=stride)
            lazy = gather_windows(x, starts, 8, 1)
            np.testing.assert_array_equal(batch.inputs, lazy.inputs)
            np.testing.assert_array_equal(batch.targets, lazy.targets)


class TestTrainTestSplit:
    def test_split_at_fraction(self):
        train, test = train_test_split(1000, 0.8, window_len=10, horizon=1)
        assert train == (0, 800)
        assert test == (800, 1000)

    def test_dataset_overload(self):
        ds = small_dataset()
        train, test = train_test_split(ds, 0.75)
        assert train == (0, 30)
        assert test == (30, 40)

    def test_too_small_test_interval(self):
        with pytest.raises(ResultingIntervalTooShort):
            train_test_split(100, 0.95, window_len=10, horizon=1)

    def test_windows_disjoint_exhaustive(self):
        # no train window touches the test region and vice versa
        for length in range(30, 60, 7):
            for frac in (0.5, 0.7, 0.8):
                try:
                    train, test = train_test_split(length, frac, window_len=5, horizon=1)
                except ResultingIntervalTooShort:
                    continue
                t_starts = window_starts(train, 5, 1)
                v_starts = window_starts(test, 5, 1)
                assert np.max(t_starts) + 5 + 1 <= train[1]
                assert np.min(v_starts) >= test[0]
                assert set(t_starts).isdisjoint(v_starts)


class TestSerialization:
    def test_roundtrip_bit_exact(self, tmp_path):
        ds = small_dataset(seed=9)
        p = tmp_path / "d.fwd1"
        save_dataset(ds, p)
        back = load_dataset(p)
        np.testing.assert_array_equal(back.real_channel, ds.real_channel)
        np.testing.assert_array_equal(back.imag_channel, ds.imag_channel)
        assert back.real_norm == ds.real_norm
        assert back.imag_norm == ds.imag_norm
        assert (back.window_len, back.horizon, back.split_index) == (
            ds.window_len, ds.horizon, ds.split_index,
        )

    def test_bad_magic(self, tmp_path):
        p = tmp_path / "x.fwd1"
        p.write_bytes(b"NOPE" + bytes(64))
        with pytest.raises(BadMagic):
            load_dataset(p)

    def test_version_mismatch(self, tmp_path):
        ds = small_dataset()
        p = tmp_path / "v.fwd1"
        save_dataset(ds, p)
        blob = bytearray(p.read_bytes())
        blob[4] = 2
        p.write_bytes(bytes(blob))
        with pytest.raises(VersionMismatch):
            load_dataset(p)


class TestFeatureDataset:
    def test_train_interval_range_enforced(self):
        bad = np.linspace(-2, 2, 40)  # exceeds [-1,1] inside train region
        with pytest.raises(ValueError):
            FeatureDataset(
                real_channel=bad,
                imag_channel=np.zeros(40),
                real_norm=NormParams(0, 1),
                imag_norm=NormParams(0, 1),
                window_len=4,
                horizon=1,
                split_index=30,
            )

    def test_test_interval_overshoot_allowed(self):
        ch = np.zeros(40)
        ch[35] = 1.7  # outside [-1,1] but in the test region
        ds = FeatureDataset(
            real_channel=ch,
            imag_channel=ch.copy(),
            real_norm=NormParams(0, 1),
            imag_norm=NormParams(0, 1),
            window_len=4,
            horizon=1,
            split_index=30,
        )
        assert ds.length == 40

    def test_bad_split_rejected(self):
        with pytest.raises(ValueError):
            FeatureDataset(
                real_channel=np.zeros(10),
                imag_channel=np.zeros(10),
                real_norm=NormParams(0, 1),
                imag_norm=NormParams(0, 1),
                split_index=10,
            )
