"""WAV decode/encode and FFT-domain resampling.

Only the subset needed for the rest of the system is supported, bit-exactly:
RIFF/WAVE little-endian containers with chunks "RIFF"/"WAVE"/"fmt "/"data",
PCM format tag 0x0001, 16-bit signed samples, 1 or 2 channels in, mono out.
No MIDI, no compressed codecs, no 24/32-bit or float PCM.
"""

from __future__ import annotations

import logging
import struct
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    EmptyInput,
    IoFailure,
    MalformedRiff,
    TruncatedData,
    UnsupportedFormat,
)

log = logging.getLogger(__name__)

_PCM_TAG = 0x0001


@dataclass
class AudioClip:
    """Mono sample buffer with its sample rate.

    Samples are dimensionless amplitudes, nominally in [-1, 1]; values outside
    that range are legal in memory and only clipped at encode time.
    """

    samples: np.ndarray
    sample_rate_hz: int

    def __post_init__(self):
        self.samples = np.asarray(self.samples, dtype=np.float64)
        if self.samples.ndim != 1:
            raise ValueError("AudioClip samples must be a 1-D array")
        if not np.all(np.isfinite(self.samples)):
            raise ValueError("AudioClip samples contain NaN/Inf")
        self.sample_rate_hz = int(self.sample_rate_hz)
        if self.sample_rate_hz <= 0:
            raise ValueError("sample_rate_hz must be positive")

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate_hz

    def __len__(self) -> int:
        return len(self.samples)


@dataclass(frozen=True)
class WavSpec:
    """Parsed "fmt " chunk of an accepted file (16-bit integer PCM only)."""

    channels: int
    bits_per_sample: int
    sample_rate_hz: int

    def __post_init__(self):
        if self.bits_per_sample != 16:
            raise UnsupportedFormat(
                f"only 16-bit PCM is accepted, got {self.bits_per_sample}-bit"
            )
        if self.channels < 1:
            raise UnsupportedFormat("channel count must be positive")
        if self.sample_rate_hz < 1:
            raise MalformedRiff("sample rate must be positive")


def read_wav(path) -> AudioClip:
    """Decode a 16-bit PCM WAV file to a mono AudioClip.

    Stereo inputs are downmixed by averaging the two channels. Integer
    samples are scaled to [-1, 1] by dividing by 32768.

    Raises MalformedRiff for bad magic/chunk structure, UnsupportedFormat for
    non-PCM / non-16-bit / >2 channels, TruncatedData if the data chunk is
    shorter than declared, IoFailure if the file cannot be read.
    """
    try:
        with open(path, "rb") as fh:
            blob = fh.read()
    except OSError as exc:
        raise IoFailure(f"cannot read {path}: {exc}") from exc

    if len(blob) < 12:
        raise MalformedRiff("file shorter than a RIFF header")
    if blob[0:4] != b"RIFF":
        raise MalformedRiff("missing RIFF magic")
    if blob[8:12] != b"WAVE":
        raise MalformedRiff("missing WAVE form type")

    spec = None
    data = None
    pos = 12
    while pos + 8 <= len(blob):
        cid = blob[pos:pos + 4]
        (size,) = struct.unpack_from("<I", blob, pos + 4)
        body_start = pos + 8
        if cid == b"fmt ":
            if size < 16 or body_start + 16 > len(blob):
                raise MalformedRiff("fmt chunk too small")
            tag, channels, rate, _byte_rate, block_align, bits = struct.unpack_from(
                "<HHIIHH", blob, body_start
            )
            if tag != _PCM_TAG:
                raise UnsupportedFormat(f"format tag 0x{tag:04x} is not PCM")
            if bits != 16:
                raise UnsupportedFormat(f"{bits}-bit samples not supported")
            if channels not in (1, 2):
                raise UnsupportedFormat(f"{channels} channels not supported")
            if block_align != channels * 2:
                raise MalformedRiff(
                    f"block align {block_align} inconsistent with "
                    f"{channels} x 16-bit"
                )
            spec = WavSpec(channels=channels, bits_per_sample=bits, sample_rate_hz=rate)
        elif cid == b"data":
            if spec is None:
                raise MalformedRiff("data chunk before fmt chunk")
            if body_start + size > len(blob):
                raise TruncatedData(
                    f"data chunk declares {size} bytes, "
                    f"{len(blob) - body_start} available"
                )
            data = blob[body_start:body_start + size]
            break
        else:
            if body_start + size > len(blob):
                raise MalformedRiff(f"chunk {cid!r} overruns file")
        pos = body_start + size + (size & 1)  # chunks are word-aligned

    if spec is None:
        raise MalformedRiff("no fmt chunk found")
    if data is None:
        raise MalformedRiff("no data chunk found")
    if len(data) % (2 * spec.channels) != 0:
        raise MalformedRiff("data size is not a whole number of frames")

    ints = np.frombuffer(data, dtype="<i2")
    samples = ints.astype(np.float64) / 32768.0
    if spec.channels == 2:
        samples = 0.5 * (samples[0::2] + samples[1::2])
    return AudioClip(samples=samples, sample_rate_hz=spec.sample_rate_hz)


def write_wav(clip: AudioClip, path) -> int:
    """Encode a clip as mono 16-bit PCM WAVE.

    Samples outside [-1, 1] are clipped (count logged as a warning).
    Quantization is round-half-away-from-zero at 16-bit full scale, saturated
    to [-32768, 32767], so decode(encode(x)) stays within 1/32767 per sample.

    Returns the number of clipped samples.
    """
    x = clip.samples
    n_clipped = int(np.count_nonzero((x < -1.0) | (x > 1.0)))
    if n_clipped:
        log.warning("write_wav: clipped %d of %d samples to [-1, 1]",
                    n_clipped, len(x))
        x = np.clip(x, -1.0, 1.0)
    scaled = x * 32768.0
    q = np.sign(scaled) * np.floor(np.abs(scaled) + 0.5)
    ints = np.clip(q, -32768, 32767).astype("<i2")

    payload = ints.tobytes()
    rate = clip.sample_rate_hz
    header = b"".join([
        b"RIFF",
        struct.pack("<I", 36 + len(payload)),
        b"WAVE",
        b"fmt ",
        struct.pack("<IHHIIHH", 16, _PCM_TAG, 1, rate, rate * 2, 2, 16),
        b"data",
        struct.pack("<I", len(payload)),
    ])
    try:
        with open(path, "wb") as fh:
            fh.write(header)
            fh.write(payload)
    except OSError as exc:
        raise IoFailure(f"cannot write {path}: {exc}") from exc
    return n_clipped


def resample(clip: AudioClip, target_rate_hz: int) -> AudioClip:
    """Resample via the FFT: truncate/zero-pad the real spectrum.

    Output length is round(n * target / source) and the amplitude is rescaled
    by the length ratio, so a constant stays the same constant and interior
    tones keep their amplitude. Edge convention: the old Nyquist bin is halved
    when it becomes an interior bin (upsampling from even n); a bin landing on
    the new Nyquist keeps its real part (downsampling to even m).
    """
    if target_rate_hz <= 0:
        raise ValueError("target_rate_hz must be positive")
    n = len(clip.samples)
    if n == 0:
        raise EmptyInput("cannot resample an empty clip")
    if target_rate_hz == clip.sample_rate_hz:
        return AudioClip(clip.samples.copy(), clip.sample_rate_hz)

    m = int(round(n * target_rate_hz / clip.sample_rate_hz))
    if m < 1:
        raise EmptyInput(f"target length rounds to {m} samples")

    spec = np.fft.rfft(clip.samples)
    out_bins = m // 2 + 1
    new_spec = np.zeros(out_bins, dtype=complex)
    k = min(len(spec), out_bins)
    new_spec[:k] = spec[:k]
    if m > n and n % 2 == 0:
        new_spec[n // 2] *= 0.5
    if m < n and m % 2 == 0:
        new_spec[m // 2] = new_spec[m // 2].real
    out = np.fft.irfft(new_spec, n=m) * (m / n)
    return AudioClip(out, target_rate_hz)
