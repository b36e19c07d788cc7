"""Quality and information metrics plus a direct-evaluation reference
spectrum."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .core import Image, Signal


def _paired_arrays(x, y):
    def unwrap(v):
        if isinstance(v, Signal):
            return v.samples
        if isinstance(v, Image):
            return v.data
        return np.asarray(v, dtype=np.float64)

    a, b = unwrap(x), unwrap(y)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    return a, b


def mae(x, y) -> float:
    """Mean absolute element difference (color images: averaged over all
    channels)."""
    a, b = _paired_arrays(x, y)
    return float(np.mean(np.abs(a - b)))


def mse(x, y) -> float:
    """Mean squared element difference (color images: averaged over all
    channels)."""
    a, b = _paired_arrays(x, y)
    return float(np.mean((a - b) ** 2))


def psnr(x, y, max_val: float = 255.0) -> float:
    """10 log10(max_val^2 / mse) in dB; identical inputs give +inf."""
    m = mse(x, y)
    if m == 0.0:
        return math.inf
    return 10.0 * math.log10(max_val * max_val / m)


def cr(uncompressed: float, compressed: float) -> float:
    """Uncompressed size over compressed size."""
    if uncompressed <= 0:
        raise ValueError("uncompressed size must be positive")
    if compressed <= 0:
        raise ValueError("compressed size must be positive")
    return uncompressed / compressed


def pss(ratio: float) -> float:
    """Percent space savings: (1 - 1/CR) * 100."""
    return (1.0 - 1.0 / ratio) * 100.0


@dataclass
class Histogram:
    counts: np.ndarray
    bin_edges: np.ndarray

    @property
    def total(self) -> int:
        return int(self.counts.sum())

    def probabilities(self) -> np.ndarray:
        return self.counts / self.total


U8_RANGE = (0.0, 255.0)


def _hist_range(a: np.ndarray, value_range):
    if value_range is not None:
        return value_range
    mn, mx = float(a.min()), float(a.max())
    if mx == mn:
        mx = mn + 1.0
    return mn, mx


def histogram(x, bins: int = 256, value_range=None) -> Histogram:
    """Occupancy counts over `bins` equal-width bins.

    Images default to the 8-bit range; other data is binned over its own
    min-max span.
    """
    if isinstance(x, Image):
        a = x.data
        if value_range is None:
            value_range = U8_RANGE
    elif isinstance(x, Signal):
        a = x.samples
    else:
        a = np.asarray(x, dtype=np.float64)
    counts, edges = np.histogram(a.ravel(), bins=bins, range=_hist_range(a, value_range))
    return Histogram(counts, edges)


def _entropy_from_probs(p: np.ndarray) -> float:
    nz = p[p > 0]
    return float(-np.sum(nz * np.log2(nz)))


def entropy(x, bins: int = 256, value_range=None) -> float:
    """Shannon entropy in bits of the binned value distribution."""
    return _entropy_from_probs(histogram(x, bins, value_range).probabilities())


def _joint_counts(x, y, bins, range_x, range_y):
    def unwrap(v):
        if isinstance(v, Image):
            return v.data, U8_RANGE
        if isinstance(v, Signal):
            return v.samples, None
        return np.asarray(v, dtype=np.float64), None

    a, ra = unwrap(x)
    b, rb = unwrap(y)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    ra = _hist_range(a, range_x if range_x is not None else ra)
    rb = _hist_range(b, range_y if range_y is not None else rb)
    counts, _, _ = np.histogram2d(a.ravel(), b.ravel(), bins=bins, range=(ra, rb))
    return counts


def joint_entropy(x, y, bins: int = 256, range_x=None, range_y=None) -> float:
    """Entropy in bits of the joint 2D value distribution."""
    counts = _joint_counts(x, y, bins, range_x, range_y)
    return _entropy_from_probs(counts.ravel() / counts.sum())


def mutual_information(x, y, bins: int = 256, range_x=None, range_y=None) -> float:
    """I(X, Y) = H(X) + H(Y) - H(X, Y), all from one joint histogram so the
    identity I(X, X) = H(X) holds exactly; clamped at zero."""
    counts = _joint_counts(x, y, bins, range_x, range_y)
    p = counts / counts.sum()
    h_joint = _entropy_from_probs(p.ravel())
    h_x = _entropy_from_probs(p.sum(axis=1))
    h_y = _entropy_from_probs(p.sum(axis=0))
    info = h_x + h_y - h_joint
    if info < -1e-9:
        raise AssertionError(f"mutual information fell below tolerance: {info}")
    return max(info, 0.0)


def michelson_contrast(x) -> float:
    """(max - min) / (max + min), defined as 0 when max + min is 0."""
    a = x.data if isinstance(x, Image) else (x.samples if isinstance(x, Signal) else np.asarray(x, dtype=np.float64))
    if a.size == 0:
        raise ValueError("empty input")
    mx, mn = float(a.max()), float(a.min())
    if mx + mn == 0.0:
        return 0.0
    return (mx - mn) / (mx + mn)


def psd(s: Signal, nfft: int):
    """Reference power spectral density from a directly evaluated transform.

    The signal is zero-extended to nfft points, the transform is evaluated
    by explicit summation, power is |X|^2 / (nfft * L), and the positive-
    frequency half is returned with its frequency axis in Hz.
    """
    a = s.samples
    length = a.size
    if nfft < length:
        raise ValueError("nfft must be >= signal length")
    k = np.arange(nfft)
    # direct evaluation; quadratic cost is acceptable for a reference path
    phase = np.exp(-2j * np.pi * np.outer(k, np.arange(length)) / nfft)
    spectrum = phase @ a.astype(np.complex128)
    power = (spectrum * np.conj(spectrum)).real / (nfft * length)
    half = nfft // 2
    freqs = s.sample_rate * np.arange(half) / nfft
    return freqs, power[:half]


def dft_direct(a, nfft: int) -> np.ndarray:
    """Directly evaluated length-nfft transform of a zero-extended array."""
    a = np.asarray(a, dtype=np.complex128)
    if nfft < a.size:
        raise ValueError("nfft must be >= input length")
    k = np.arange(nfft)
    phase = np.exp(-2j * np.pi * np.outer(k, np.arange(a.size)) / nfft)
    return phase @ a
