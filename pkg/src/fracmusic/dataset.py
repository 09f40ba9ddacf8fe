"""Fractional-domain channels -> normalized, windowed supervised data.

The complex signal is split into real/imaginary channels, each min-max
normalized onto [-1, 1] with parameters taken from the training interval
only, then cut into overlapping (window, next-value) pairs that never
straddle the train/test boundary.

Dataset file format (".fwd1", little-endian throughout):

    magic   4 bytes  "FWD1"
    version u8       1
    window_len   u32
    horizon      u32
    split_index  u64
    length       u64          (per-channel sample count)
    real NormParams  2 x f64  (min, max)
    imag NormParams  2 x f64  (min, max)
    real channel     f64 x length
    imag channel     f64 x length

load(save(d)) is bit-exact.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadMagic,
    ConstantChannel,
    EmptyInput,
    IntervalTooShort,
    IoFailure,
    ResultingIntervalTooShort,
    VersionMismatch,
)

_MAGIC = b"FWD1"
_VERSION = 1


@dataclass(frozen=True)
class NormParams:
    """Affine min-max map onto [-1, 1]; exact inversion by denormalize."""

    min: float
    max: float

    def __post_init__(self):
        if not (self.max > self.min):
            raise ConstantChannel(
                f"max ({self.max}) must exceed min ({self.min})"
            )


def split_complex(signal):
    """Componentwise (real, imag) extraction of a complex sequence."""
    x = np.asarray(signal)
    if x.size == 0:
        raise EmptyInput("cannot split an empty signal")
    return np.real(x).astype(np.float64), np.imag(x).astype(np.float64)


def combine_complex(real_part, imag_part) -> np.ndarray:
    re = np.asarray(real_part, dtype=np.float64)
    im = np.asarray(imag_part, dtype=np.float64)
    if re.shape != im.shape:
        raise ValueError("real and imaginary parts must have equal shape")
    return re + 1j * im


def normalize(channel, params: NormParams | None = None):
    """Map a channel onto [-1, 1]: y = 2(x - min)/(max - min) - 1.

    When params is given (e.g. train-interval statistics reused for test
    data), it is applied as-is and values may leave [-1, 1].

    Returns (normalized, params).
    """
    x = np.asarray(channel, dtype=np.float64)
    if x.size < 2 and params is None:
        raise EmptyInput("need at least 2 samples to fit normalization")
    if params is None:
        lo, hi = float(np.min(x)), float(np.max(x))
        if hi == lo:
            raise ConstantChannel(f"constant channel (value {lo}); "
                                  "min-max normalization undefined")
        params = NormParams(min=lo, max=hi)
    y = 2.0 * (x - params.min) / (params.max - params.min) - 1.0
    return y, params


def denormalize(normalized, params: NormParams) -> np.ndarray:
    """Exact affine inverse of normalize; no clipping, so generated
    overshoots outside [-1, 1] survive to reconstruction."""
    y = np.asarray(normalized, dtype=np.float64)
    return (y + 1.0) * (params.max - params.min) / 2.0 + params.min


@dataclass
class FeatureDataset:
    """Normalized real/imag channel streams plus windowing metadata.

    Normalization parameters are fitted on [0, split_index) only, so the
    [-1, 1] bound is guaranteed for the train interval; test-interval values
    may legitimately overshoot and are inverted unclipped.
    """

    real_channel: np.ndarray
    imag_channel: np.ndarray
    real_norm: NormParams
    imag_norm: NormParams
    window_len: int = 200
    horizon: int = 1
    split_index: int = 0

    def __post_init__(self):
        self.real_channel = np.asarray(self.real_channel, dtype=np.float64)
        self.imag_channel = np.asarray(self.imag_channel, dtype=np.float64)
        if self.real_channel.shape != self.imag_channel.shape:
            raise ValueError("channels must have equal length")
        n = len(self.real_channel)
        if not (0 < self.split_index < n):
            raise ValueError(f"split_index {self.split_index} outside (0, {n})")
        if self.window_len < 1 or self.horizon < 1:
            raise ValueError("window_len and horizon must be positive")
        for name, ch in (("real", self.real_channel), ("imag", self.imag_channel)):
            if not np.all(np.isfinite(ch)):
                raise ValueError(f"{name} channel contains NaN/Inf")
            train = ch[: self.split_index]
            if train.size and (train.min() < -1.0 - 1e-12 or train.max() > 1.0 + 1e-12):
                raise ValueError(f"{name} train interval not normalized to [-1, 1]")

    @property
    def length(self) -> int:
        return len(self.real_channel)

    def channels(self):
        return (("real", self.real_channel, self.real_norm),
                ("imag", self.imag_channel, self.imag_norm))


@dataclass(frozen=True)
class WindowBatch:
    """Supervised pairs: targets immediately follow their input windows."""

    inputs: np.ndarray   # (batch, window_len)
    targets: np.ndarray  # (batch, horizon)


def make_windows(channel, window_len: int, horizon: int,
                 interval: tuple, stride: int = 1) -> WindowBatch:
    """Cut [start, stop) into overlapping (window, next values) pairs.

    inputs[i] = channel[s .. s+window_len), targets[i] = the following
    `horizon` values, with s = start + i*stride. At stride 1 this yields
    stop - start - window_len - horizon + 1 pairs.
    """
    x = np.asarray(channel, dtype=np.float64)
    start, stop = int(interval[0]), int(interval[1])
    if not (0 <= start < stop <= len(x)):
        raise ValueError(f"interval [{start}, {stop}) outside channel")
    if stride < 1:
        raise ValueError("stride must be >= 1")
    span = stop - start
    if span < window_len + horizon:
        raise IntervalTooShort(
            f"interval length {span} < window {window_len} + horizon {horizon}"
        )
    n_pairs = (span - window_len - horizon) // stride + 1
    starts = start + np.arange(n_pairs) * stride
    k = np.arange(window_len)
    inputs = x[starts[:, None] + k[None, :]]
    h = np.arange(horizon)
    targets = x[starts[:, None] + window_len + h[None, :]]
    return WindowBatch(inputs=inputs, targets=targets)


def window_starts(interval: tuple, window_len: int, horizon: int,
                  stride: int = 1) -> np.ndarray:
    """Start indices of the pairs make_windows would emit (lazy variant)."""
    start, stop = int(interval[0]), int(interval[1])
    span = stop - start
    if span < window_len + horizon:
        raise IntervalTooShort(
            f"interval length {span} < window {window_len} + horizon {horizon}"
        )
    n_pairs = (span - window_len - horizon) // stride + 1
    return start + np.arange(n_pairs) * stride


def gather_windows(channel, starts, window_len: int, horizon: int) -> WindowBatch:
    """Materialize the pairs at the given start indices."""
    x = np.asarray(channel, dtype=np.float64)
    starts = np.asarray(starts, dtype=np.int64)
    k = np.arange(window_len)
    inputs = x[starts[:, None] + k[None, :]]
    targets = x[starts[:, None] + window_len + np.arange(horizon)[None, :]]
    return WindowBatch(inputs=inputs, targets=targets)


def train_test_split(data, train_fraction: float,
                     window_len: int | None = None, horizon: int | None = None):
    """Split [0, length) at floor(length * fraction); windows never straddle.

    `data` is a FeatureDataset (window/horizon taken from it) or a plain
    channel length. Returns (train_interval, test_interval) as (start, stop)
    tuples; each interval must hold at least one complete window + horizon.
    """
    if isinstance(data, FeatureDataset):
        length, window_len, horizon = data.length, data.window_len, data.horizon
    else:
        length = int(data)
        if window_len is None or horizon is None:
            raise ValueError("window_len and horizon required with a bare length")
    if not 0.0 < train_fraction < 1.0:
        raise ValueError("train_fraction must be in (0, 1)")
    split = int(length * train_fraction)
    need = window_len + horizon
    if split < need:
        raise ResultingIntervalTooShort(
            f"train interval [0, {split}) cannot hold a {window_len}+{horizon} window"
        )
    if length - split < need:
        raise ResultingIntervalTooShort(
            f"test interval [{split}, {length}) cannot hold a "
            f"{window_len}+{horizon} window"
        )
    return (0, split), (split, length)


def save_dataset(ds: FeatureDataset, path) -> None:
    n = ds.length
    head = struct.pack(
        "<IIQQdddd",
        ds.window_len,
        ds.horizon,
        ds.split_index,
        n,
        ds.real_norm.min,
        ds.real_norm.max,
        ds.imag_norm.min,
        ds.imag_norm.max,
    )
    try:
        with open(path, "wb") as fh:
            fh.write(_MAGIC)
            fh.write(struct.pack("<B", _VERSION))
            fh.write(head)
            fh.write(ds.real_channel.astype("<f8").tobytes())
            fh.write(ds.imag_channel.astype("<f8").tobytes())
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc


def load_dataset(path) -> FeatureDataset:
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc
    if blob[:4] != _MAGIC:
        raise BadMagic(f"expected {_MAGIC!r} magic")
    if len(blob) < 5 or blob[4] != _VERSION:
        raise VersionMismatch(
            f"unsupported dataset version {blob[4] if len(blob) > 4 else '?'}"
        )
    head_size = struct.calcsize("<IIQQdddd")
    window_len, horizon, split, n, rmin, rmax, imin, imax = struct.unpack_from(
        "<IIQQdddd", blob, 5
    )
    body = blob[5 + head_size:]
    expected = 2 * n * 8
    if len(body) != expected:
        raise BadMagic(f"payload is {len(body)} bytes, expected {expected}")
    real = np.frombuffer(body[: n * 8], dtype="<f8").copy()
    imag = np.frombuffer(body[n * 8:], dtype="<f8").copy()
    return FeatureDataset(
        real_channel=real,
        imag_channel=imag,
        real_norm=NormParams(rmin, rmax),
        imag_norm=NormParams(imin, imax),
        window_len=window_len,
        horizon=horizon,
        split_index=split,
    )
