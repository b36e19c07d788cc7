"""Shared containers, padding, equalization, and element-wise arithmetic."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

SIGNAL_EQ_RANGE = (1.0, 2.0)
IMAGE_EQ_RANGE = (1.0, 256.0)


def _as_float_array(x, name="array"):
    a = np.asarray(x, dtype=np.float64)
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} contains non-finite values")
    return a


@dataclass
class Signal:
    """A 1D sequence of real samples with its sample rate in Hz."""

    samples: np.ndarray
    sample_rate: float = 1.0
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.samples = _as_float_array(self.samples, "samples")
        if self.samples.ndim != 1:
            raise ValueError("samples must be one-dimensional")
        if self.samples.size < 2:
            raise ValueError("a signal needs at least 2 samples")
        if not (self.sample_rate > 0):
            raise ValueError("sample_rate must be positive")

    def __len__(self):
        return self.samples.size

    def copy(self) -> "Signal":
        return Signal(self.samples.copy(), self.sample_rate, dict(self.meta))


@dataclass
class Image:
    """A 1- or 3-channel real-valued image, shape (channels, rows, cols).

    Pixel data is held in double precision; 8-bit files are converted on
    ingest and re-quantized only on export.
    """

    data: np.ndarray
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        self.data = _as_float_array(self.data, "image data")
        if self.data.ndim == 2:
            self.data = self.data[None, :, :]
        if self.data.ndim != 3 or self.data.shape[0] not in (1, 3):
            raise ValueError("image data must be (rows, cols) or (channels, rows, cols) with 1 or 3 channels")
        if self.data.shape[1] < 2 or self.data.shape[2] < 2:
            raise ValueError("image must be at least 2x2")

    @property
    def channels(self) -> int:
        return self.data.shape[0]

    @property
    def rows(self) -> int:
        return self.data.shape[1]

    @property
    def cols(self) -> int:
        return self.data.shape[2]

    @classmethod
    def from_u8(cls, arr) -> "Image":
        a = np.asarray(arr)
        if a.min() < 0 or a.max() > 255:
            raise ValueError("8-bit ingest expects values in [0, 255]")
        return cls(a.astype(np.float64))

    def to_u8(self) -> np.ndarray:
        """Round and clamp to [0, 255]; shape (channels, rows, cols) uint8."""
        return np.clip(np.round(self.data), 0, 255).astype(np.uint8)

    def copy(self) -> "Image":
        return Image(self.data.copy(), dict(self.meta))


@dataclass
class Kernel1D:
    taps: np.ndarray

    def __post_init__(self):
        self.taps = _as_float_array(self.taps, "taps")
        m = self.taps.size
        if self.taps.ndim != 1 or m < 3 or m % 2 == 0:
            raise ValueError("1D kernel length must be odd and >= 3")


@dataclass
class Kernel2D:
    taps: np.ndarray

    def __post_init__(self):
        self.taps = _as_float_array(self.taps, "taps")
        if self.taps.ndim != 2 or self.taps.shape[0] != self.taps.shape[1]:
            raise ValueError("2D kernel must be square")
        m = self.taps.shape[0]
        if m < 3 or m % 2 == 0:
            raise ValueError("2D kernel size must be odd and >= 3")


def pad_signal(s: Signal, L: int, mode: str = "zero") -> Signal:
    """Extend a signal by L samples on each side (zero fill or cyclic wrap)."""
    if L < 0:
        raise ValueError("pad length must be >= 0")
    if mode not in ("zero", "cyclic"):
        raise ValueError(f"unknown pad mode {mode!r}")
    if L == 0:
        return s.copy()
    padded = pad_array_1d(s.samples, L, mode)
    return Signal(padded, s.sample_rate, dict(s.meta))


def pad_array_1d(a: np.ndarray, L: int, mode: str) -> np.ndarray:
    if mode == "zero":
        return np.pad(a, L)
    return np.pad(a, L, mode="wrap")


def crop_signal(s: Signal, L: int) -> Signal:
    """Inverse of pad_signal: drop L samples from each end."""
    if L == 0:
        return s.copy()
    return Signal(s.samples[L:-L].copy(), s.sample_rate, dict(s.meta))


def pad_image(i: Image, L: int) -> Image:
    """Zero-fill margins of width L on all four sides of every channel."""
    if L < 0:
        raise ValueError("pad length must be >= 0")
    if L == 0:
        return i.copy()
    return Image(np.pad(i.data, ((0, 0), (L, L), (L, L))), dict(i.meta))


def crop_image(i: Image, L: int) -> Image:
    if L == 0:
        return i.copy()
    return Image(i.data[:, L:-L, L:-L].copy(), dict(i.meta))


def equalize_array(a: np.ndarray, lo: float, hi: float):
    """Affine rescale of an array onto [lo, hi].

    Returns (rescaled, degenerate). A constant input cannot be stretched and
    comes back as all-lo with degenerate=True.
    """
    if not hi > lo:
        raise ValueError("equalize needs hi > lo")
    a = np.asarray(a, dtype=np.float64)
    mn = a.min()
    mx = a.max()
    if mx == mn:
        return np.full_like(a, lo), True
    return (a - mn) / (mx - mn) * (hi - lo) + lo, False


def equalize(x, lo: float, hi: float):
    """Rescale a Signal or Image onto [lo, hi]; same type out.

    A degenerate (constant) input is flagged in the result's meta dict under
    "equalize_degenerate".
    """
    if isinstance(x, Signal):
        out, degenerate = equalize_array(x.samples, lo, hi)
        result = Signal(out, x.sample_rate, dict(x.meta))
    elif isinstance(x, Image):
        out, degenerate = equalize_array(x.data, lo, hi)
        result = Image(out, dict(x.meta))
    else:
        raise TypeError("equalize expects a Signal or Image; use equalize_array for raw arrays")
    result.meta["equalize_degenerate"] = degenerate
    return result


def hadamard_quotient(a, b) -> np.ndarray:
    """Element-wise a / b. Any zero in b is an error naming the flat index."""
    a = np.asarray(a, dtype=np.float64)
    b = np.asarray(b, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"shape mismatch: {a.shape} vs {b.shape}")
    zeros = np.flatnonzero(b == 0)
    if zeros.size:
        raise ZeroDivisionError(f"division by zero at index {int(zeros[0])}")
    return a / b
