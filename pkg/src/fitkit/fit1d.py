"""Per-sample frequency estimates for 1D signals.

The overlap estimators slide a derivative window over the padded signal and
divide by a guarded amplitude term; the non-overlap estimators divide the
pairwise detail band by the pairwise approximation band at half resolution.
All outputs are nonnegative values in hertz.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .core import Signal, SIGNAL_EQ_RANGE, equalize_array, pad_array_1d
from .multires import haar1d_forward

TWO_PI = 2.0 * np.pi

OVERLAP_VARIANTS = ("raw", "equalized", "averaged", "mask_eq", "mask_av", "diff_eq", "diff_av")
NONOVERLAP_VARIANTS = ("eq", "av")
ZERO_MEAN_EPS = 1e-12


@dataclass
class FitSeries:
    """values: Hz per sample (overlap) or per pair (non-overlap)."""

    values: np.ndarray
    variant: str
    alignment: str  # "per_sample" or "per_pair"
    sample_rate: float = 1.0
    meta: dict = field(default_factory=dict)

    def __len__(self):
        return self.values.size


@dataclass
class WitnessBars:
    """Sorted fractional abscissae where level lines cross the signal."""

    positions: np.ndarray

    def __post_init__(self):
        self.positions = np.asarray(self.positions, dtype=np.float64)
        if self.positions.size and np.any(np.diff(self.positions) <= 0):
            raise ValueError("witness bar positions must be strictly increasing")


def scaling_mask(m: int) -> np.ndarray:
    """Length-m window mean operator (all ones over m)."""
    _check_odd(m)
    return np.ones(m) / m


def wavelet_mask(m: int) -> np.ndarray:
    """Length-m antisymmetric derivative operator: -1s, a 0, then +1s, over m-1."""
    _check_odd(m)
    half = (m - 1) // 2
    return np.concatenate([-np.ones(half), [0.0], np.ones(half)]) / (m - 1)


def _check_odd(m):
    if m < 3 or m % 2 == 0:
        raise ValueError(f"mask length must be odd and >= 3, got {m}")


def _windowed(a_padded: np.ndarray, mask: np.ndarray, n: int) -> np.ndarray:
    # correlation of the padded signal with the mask, trimmed to n samples
    half = (mask.size - 1) // 2
    out = np.convolve(a_padded, mask[::-1], mode="valid")
    start = (out.size - n) // 2
    return out[start:start + n]

def _centered_diff(a: np.ndarray, pad_mode: str) -> np.ndarray:
    p = pad_array_1d(a, 1, pad_mode)
    return (p[2:] - p[:-2]) / 2.0


def _forward_diff(a: np.ndarray, pad_mode: str) -> np.ndarray:
    # diff value at n pairs with sample n; one pad sample keeps the length
    p = pad_array_1d(a, 1, pad_mode)
    return p[2:] - p[1:-1]


def _avg_denominator(a: np.ndarray, meta: dict) -> float:
    den = abs(float(np.mean(a)))
    if den > ZERO_MEAN_EPS:
        return den
    meta["avg_fallback_abs"] = True
    return float(np.mean(np.abs(a)))


def fit_overlap(s: Signal, variant: str = "equalized", M: int = 3, pad_mode: str = "cyclic") -> FitSeries:
    """Sliding-window frequency estimate, one value per sample.

    variant:
      raw       |ds/dt| / |s|, errors on zero samples
      equalized signal first rescaled onto [1, 2]
      averaged  |ds/dt| / |avg(s)|
      mask_eq   window-mean denominator, computed on the [1, 2]-rescaled signal
      mask_av   window derivative over |avg(s)|
      diff_eq   forward difference over the [1, 2]-rescaled signal
      diff_av   forward difference over |avg(s)|
    M is the window length for the mask variants (odd, >= 3).
    """
    if variant not in OVERLAP_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    a = s.samples
    n = a.size
    meta: dict = {"variant": variant, "pad_mode": pad_mode}
    lo, hi = SIGNAL_EQ_RANGE

    if variant == "raw":
        if np.any(a == 0):
            idx = int(np.flatnonzero(a == 0)[0])
            raise ZeroDivisionError(f"raw variant undefined: zero sample at index {idx}")
        num = np.abs(_centered_diff(a, pad_mode))
        den = np.abs(a)
    elif variant == "equalized":
        eq, degenerate = equalize_array(a, lo, hi)
        meta["equalize_degenerate"] = degenerate
        num = np.abs(_centered_diff(eq, pad_mode))
        den = eq
    elif variant == "averaged":
        num = np.abs(_centered_diff(a, pad_mode))
        d = _avg_denominator(a, meta)
        if d <= ZERO_MEAN_EPS:
            meta["zero_signal"] = True
            return FitSeries(np.zeros(n), variant, "per_sample", s.sample_rate, meta)
        den = np.full(n, d)
    elif variant == "mask_eq":
        _check_odd(M)
        eq, degenerate = equalize_array(a, lo, hi)
        meta["equalize_degenerate"] = degenerate
        half = (M - 1) // 2
        padded = pad_array_1d(eq, half, pad_mode)
        num = np.abs(_windowed(padded, wavelet_mask(M), n))
        den = _windowed(padded, scaling_mask(M), n)
    elif variant == "mask_av":
        _check_odd(M)
        half = (M - 1) // 2
        padded = pad_array_1d(a, half, pad_mode)
        num = np.abs(_windowed(padded, wavelet_mask(M), n))
        d = _avg_denominator(a, meta)
        if d <= ZERO_MEAN_EPS:
            meta["zero_signal"] = True
            return FitSeries(np.zeros(n), variant, "per_sample", s.sample_rate, meta)
        den = np.full(n, d)
    elif variant == "diff_eq":
        eq, degenerate = equalize_array(a, lo, hi)
        meta["equalize_degenerate"] = degenerate
        num = np.abs(_forward_diff(eq, pad_mode))
        den = eq
    else:  # diff_av
        num = np.abs(_forward_diff(a, pad_mode))
        d = _avg_denominator(a, meta)
        if d <= ZERO_MEAN_EPS:
            meta["zero_signal"] = True
            return FitSeries(np.zeros(n), variant, "per_sample", s.sample_rate, meta)
        den = np.full(n, d)

    return FitSeries(num / den / TWO_PI, variant, "per_sample", s.sample_rate, meta)


def fit_nonoverlap(s: Signal, variant: str = "eq", form: str = "abs") -> FitSeries:
    """Half-resolution frequency estimate from disjoint sample pairs.

    form selects the algebraic route: "sqrt_conj" multiplies the imaginary
    quotient by its conjugate and takes the square root, "abs" divides the
    magnitudes directly. On real data both give the same values.
    """
    if variant not in NONOVERLAP_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if form not in ("sqrt_conj", "abs"):
        raise ValueError(f"unknown form {form!r}")
    a = s.samples
    if a.size % 2 != 0:
        raise ValueError("non-overlap estimate needs an even number of samples")
    meta: dict = {"variant": variant, "form": form}
    lo, hi = SIGNAL_EQ_RANGE

    if variant == "eq":
        eq, degenerate = equalize_array(a, lo, hi)
        meta["equalize_degenerate"] = degenerate
        sb = haar1d_forward(eq)
        den = sb.L
    else:
        sb = haar1d_forward(a)
        d = _avg_denominator(sb.L, meta)
        if d <= ZERO_MEAN_EPS:
            meta["zero_signal"] = True
            return FitSeries(np.zeros(sb.H.size), variant, "per_pair", s.sample_rate, meta)
        den = np.full(sb.H.size, d)

    if form == "sqrt_conj":
        quotient = 1j * sb.H / den
        values = np.sqrt((quotient * np.conj(quotient)).real) / TWO_PI
    else:
        values = np.abs(sb.H) / np.abs(den) / TWO_PI
    return FitSeries(values, variant, "per_pair", s.sample_rate, meta)


def witness_bars(s: Signal, levels: int) -> WitnessBars:
    """Crossing abscissae of `levels` equidistant lines spanning the signal range.

    Each line contributes the linearly interpolated positions where the
    signal crosses it; a crossing that lands exactly on a sample emits one
    bar. A constant signal has no crossings.
    """
    if levels < 2:
        raise ValueError("levels must be >= 2")
    a = s.samples
    mn, mx = a.min(), a.max()
    if mx == mn:
        return WitnessBars(np.empty(0))
    lines = np.linspace(mn, mx, levels)
    positions = []
    for y in lines:
        on_sample = np.flatnonzero(a == y)
        positions.extend(on_sample.astype(np.float64))
        d0 = a[:-1] - y
        d1 = a[1:] - y
        strict = np.flatnonzero(d0 * d1 < 0)
        frac = d0[strict] / (d0[strict] - d1[strict])
        positions.extend(strict + frac)
    merged = np.unique(np.asarray(positions, dtype=np.float64))
    return WitnessBars(merged)


def phase_plane(s: Signal, mode: str = "overlap", pad_mode: str = "cyclic") -> np.ndarray:
    """(x, xdot) pairs for plotting.

    overlap: (s_n, centered difference) at full length. nonoverlap:
    (pair mean, pair half-difference) at half length.
    """
    a = s.samples
    if mode == "overlap":
        return np.column_stack([a, _centered_diff(a, pad_mode)])
    if mode == "nonoverlap":
        sb = haar1d_forward(a)
        return np.column_stack([sb.L, sb.H])
    raise ValueError(f"unknown mode {mode!r}")
