"""Denoising suite: robust noise estimation, dead-zone thresholding,
directional and mean smoothing in 1D/2D, least-squares polynomial filters,
and a subband-domain pipeline that composes them."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Image, Signal
from .fit2d import correlate_same, square_masks
from .multires import Pyramid1D, Pyramid2D, merge_levels, split_levels


@dataclass
class ThresholdSpec:
    lam: float
    mode: str = "keep"  # "keep" zeroes the dead zone, "shrink" also subtracts lam

    def __post_init__(self):
        if self.lam < 0:
            raise ValueError("threshold must be >= 0")
        if self.mode not in ("keep", "shrink"):
            raise ValueError(f"unknown threshold mode {self.mode!r}")


@dataclass
class SavGolFilter:
    """Least-squares polynomial filter taps.

    1D: taps indexed n = -n_left .. n_right. 2D: one window-by-window tap
    matrix per polynomial coefficient; `coeff_index` records which.
    """

    taps: np.ndarray
    degree: int
    deriv: int = 0
    n_left: int = 0
    n_right: int = 0
    coeff_index: tuple | None = None
    meta: dict = field(default_factory=dict)


def mad_sigma(c) -> float:
    """Noise scale estimate: median absolute coefficient over 0.6745."""
    c = np.asarray(c, dtype=np.float64)
    if c.size == 0:
        raise ValueError("empty coefficient array")
    return float(np.median(np.abs(c)) / 0.6745)


def universal_threshold(c) -> float:
    """mad_sigma(c) * sqrt(2 ln N) with N the coefficient count."""
    c = np.asarray(c, dtype=np.float64)
    if c.size < 2:
        raise ValueError("need at least 2 coefficients")
    return mad_sigma(c) * math.sqrt(2.0 * math.log(c.size))


def threshold(c, spec: ThresholdSpec) -> np.ndarray:
    """Zero the dead zone [-lam, lam]; shrink mode moves survivors toward 0."""
    c = np.asarray(c, dtype=np.float64)
    out = np.where(np.abs(c) <= spec.lam, 0.0, c)
    if spec.mode == "shrink":
        out = np.where(out != 0.0, np.sign(out) * (np.abs(out) - spec.lam), 0.0)
    return out


def _ds2d_plane(a: np.ndarray, quantize: bool) -> np.ndarray:
    rows, cols = a.shape
    out = a.copy()
    c = a[1:-1, 1:-1]
    d1 = (a[2:, :-2] + c + a[:-2, 2:]) / 3.0   # anti-diagonal
    d2 = (a[:-2, 1:-1] + c + a[2:, 1:-1]) / 3.0  # vertical
    d3 = (a[:-2, :-2] + c + a[2:, 2:]) / 3.0   # diagonal
    d4 = (a[1:-1, :-2] + c + a[1:-1, 2:]) / 3.0  # horizontal
    cands = np.stack([d1, d2, d3, d4])
    pick = np.argmin(np.abs(cands - c), axis=0)
    rr, cc = np.indices(c.shape)
    chosen = cands[pick, rr, cc]
    if quantize:
        chosen = np.round(chosen)
    out[1:-1, 1:-1] = chosen
    return out


def ds2d(x, passes: int = 1):
    """Directional smoothing: per interior pixel, take the 3-tap directional
    mean closest in amplitude to the pixel (ties to the lowest direction).

    Pixel data of an Image is rounded after each pass; raw subband arrays
    are left real-valued. Border pixels pass through unchanged.
    """
    if passes < 1:
        raise ValueError("passes must be >= 1")
    is_image = isinstance(x, Image)
    planes = x.data if is_image else np.asarray(x, dtype=np.float64)[None, :, :]
    if planes.shape[1] < 3 or planes.shape[2] < 3:
        raise ValueError("directional smoothing needs at least 3x3 data")
    out = []
    for plane in planes:
        p = plane
        for _ in range(passes):
            p = _ds2d_plane(p, quantize=is_image)
        out.append(p)
    stacked = np.stack(out)
    return Image(stacked, dict(x.meta)) if is_image else stacked[0]


def mf2d(x, M: int = 3, passes: int = 1):
    """Box-mean filtering; zero padding keeps the size."""
    if M < 3 or M % 2 == 0:
        raise ValueError("kernel size must be odd and >= 3")
    if passes < 1:
        raise ValueError("passes must be >= 1")
    _, box = square_masks(M)
    is_image = isinstance(x, Image)
    planes = x.data if is_image else np.asarray(x, dtype=np.float64)[None, :, :]
    pad = (M - 1) // 2
    out = []
    for plane in planes:
        p = plane
        for _ in range(passes):
            p = correlate_same(p, box, pad)
            if is_image:
                p = np.round(p)
        out.append(p)
    stacked = np.stack(out)
    return Image(stacked, dict(x.meta)) if is_image else stacked[0]


def _ds1d_pass(a: np.ndarray) -> np.ndarray:
    n = a.size
    idx = np.arange(n)

    def sh(v, k):
        return v[(idx + k) % n]

    u = np.cumsum(a)
    d = (sh(a, 1) - sh(a, -1)) / 2.0
    cands = np.stack([
        (sh(d, -1) + a + sh(u, 1)) / 3.0,
        (d + a + u) / 3.0,
        (sh(d, 1) + a + sh(u, -1)) / 3.0,
        (sh(a, -1) + a + sh(a, 1)) / 3.0,
    ])
    pick = np.argmin(np.abs(cands - a), axis=0)
    return cands[pick, idx]


def ds1d(x, passes: int = 1):
    """1D directional smoothing over a window built from the running sum
    (up row), the samples, and the centered difference (down row); per
    sample the candidate mean closest to the sample wins, ties to the
    lowest candidate index. Indices wrap cyclically."""
    if passes < 1:
        raise ValueError("passes must be >= 1")
    is_signal = isinstance(x, Signal)
    a = x.samples if is_signal else np.asarray(x, dtype=np.float64)
    if a.size < 3:
        raise ValueError("need at least 3 samples")
    for _ in range(passes):
        a = _ds1d_pass(a)
    return Signal(a, x.sample_rate, dict(x.meta)) if is_signal else a


def _mf1d_pass(a: np.ndarray) -> np.ndarray:
    up = 1.1 * a
    down = 0.9 * a
    n = a.size
    idx = np.arange(n)
    total = np.zeros(n)
    for row in (down, a, up):
        for k in (-1, 0, 1):
            total = total + row[(idx + k) % n]
    return total / 9.0


def mf1d(x, passes: int = 1):
    """Window mean over the proportionally raised/lowered copies of the
    signal; algebraically equal to the 3-tap moving average."""
    if passes < 1:
        raise ValueError("passes must be >= 1")
    is_signal = isinstance(x, Signal)
    a = x.samples if is_signal else np.asarray(x, dtype=np.float64)
    if a.size < 3:
        raise ValueError("need at least 3 samples")
    for _ in range(passes):
        a = _mf1d_pass(a)
    return Signal(a, x.sample_rate, dict(x.meta)) if is_signal else a


def savgol_coeffs_1d(n_left: int, n_right: int, degree: int, deriv: int = 0) -> SavGolFilter:
    """Least-squares polynomial filter taps for a window of n_left + n_right + 1
    points; deriv selects the derivative order evaluated at the center."""
    if n_left < 0 or n_right < 0:
        raise ValueError("window extents must be >= 0")
    if n_left + n_right < degree:
        raise ValueError("underdetermined fit: window smaller than degree + 1")
    if deriv > degree:
        raise ValueError("derivative order exceeds polynomial degree")
    i = np.arange(-n_left, n_right + 1, dtype=np.float64)
    a = np.stack([i ** j for j in range(degree + 1)], axis=1)
    pinv = np.linalg.pinv(a)
    taps = pinv[deriv] * math.factorial(deriv)
    return SavGolFilter(taps, degree, deriv, n_left, n_right)


def savgol_apply_1d(s: Signal, f: SavGolFilter, pad_mode: str = "mirror") -> Signal:
    """g_i = sum_n c_n f_{i+n}; the boundary is mirror padded by default
    (cyclic selectable)."""
    a = s.samples
    if f.taps.size > a.size:
        raise ValueError("filter longer than signal")
    if pad_mode == "mirror":
        padded = np.pad(a, (f.n_left, f.n_right), mode="reflect")
    elif pad_mode == "cyclic":
        padded = np.pad(a, (f.n_left, f.n_right), mode="wrap")
    else:
        raise ValueError(f"unknown pad mode {pad_mode!r}")
    out = np.convolve(padded, f.taps[::-1], mode="valid")
    return Signal(out, s.sample_rate, dict(s.meta))


def poly_exponents_2d(degree: int):
    """Graded exponent order: (0,0), (1,0), (0,1), (2,0), (1,1), (0,2), ..."""
    exps = []
    for total in range(degree + 1):
        for j in range(total + 1):
            exps.append((total - j, j))
    return exps


def savgol_filters_2d(window: int, degree: int) -> dict:
    """One window-by-window filter per 2D polynomial coefficient.

    Keys are exponent pairs (p, q) for the term u^p v^q with u along rows
    and v along columns. The (0,0) filter smooths; (1,0) and (0,1) give the
    row- and column-direction partial derivatives at the patch center.
    """
    if window < 3 or window % 2 == 0:
        raise ValueError("window must be odd and >= 3")
    exps = poly_exponents_2d(degree)
    if window * window < len(exps):
        raise ValueError("underdetermined fit: window too small for degree")
    half = window // 2
    uu, vv = np.mgrid[-half:half + 1, -half:half + 1]
    u = uu.ravel().astype(np.float64)
    v = vv.ravel().astype(np.float64)
    a = np.stack([(u ** p) * (v ** q) for (p, q) in exps], axis=1)
    pinv = np.linalg.pinv(a)
    filters = {}
    for k, (p, q) in enumerate(exps):
        filters[(p, q)] = SavGolFilter(pinv[k].reshape(window, window), degree,
                                       coeff_index=(p, q))
    return filters


def savgol_apply_2d(x, f: SavGolFilter):
    """Correlate a channel (or every channel of an Image) with a 2D filter."""
    taps = f.taps
    pad = taps.shape[0] // 2
    if isinstance(x, Image):
        planes = np.stack([correlate_same(ch, taps, pad) for ch in x.data])
        return Image(planes, dict(x.meta))
    return correlate_same(np.asarray(x, dtype=np.float64), taps, pad)


_SMOOTHERS_1D = {"mf": mf1d, "ds": ds1d}
_SMOOTHERS_2D = {"mf": mf2d, "ds": ds2d}


def wavelet_denoise(x, basis: str = "haar", levels: int = 1, method: str = "keep",
                    passes: int = 1):
    """Decompose, clean the detail subbands, reconstruct.

    Threshold methods (keep/shrink) recompute the universal threshold per
    detail subband at every level. Smoother methods (mf/ds) run only on the
    finest-level detail subbands.
    """
    if method not in ("keep", "shrink", "mf", "ds"):
        raise ValueError(f"unknown method {method!r}")

    if isinstance(x, Signal):
        pyr = split_levels(x.samples, basis, levels)
        _clean_pyramid_1d(pyr, method, passes)
        return Signal(merge_levels(pyr), x.sample_rate, dict(x.meta))
    if isinstance(x, Image):
        planes = []
        for ch in x.data:
            pyr = split_levels(ch, basis, levels)
            _clean_pyramid_2d(pyr, method, passes)
            planes.append(merge_levels(pyr))
        return Image(np.stack(planes), dict(x.meta))
    a = np.asarray(x, dtype=np.float64)
    if a.ndim == 1:
        pyr = split_levels(a, basis, levels)
        _clean_pyramid_1d(pyr, method, passes)
        return merge_levels(pyr)
    pyr = split_levels(a, basis, levels)
    _clean_pyramid_2d(pyr, method, passes)
    return merge_levels(pyr)


def _clean_pyramid_1d(pyr: Pyramid1D, method: str, passes: int):
    if method in ("keep", "shrink"):
        pyr.details = [threshold(h, ThresholdSpec(universal_threshold(h), method))
                       for h in pyr.details]
    else:
        pyr.details[0] = _SMOOTHERS_1D[method](pyr.details[0], passes)


def _clean_pyramid_2d(pyr: Pyramid2D, method: str, passes: int):
    if method in ("keep", "shrink"):
        pyr.details = [tuple(threshold(b, ThresholdSpec(universal_threshold(b), method))
                             for b in bands)
                       for bands in pyr.details]
    else:
        smoother = _SMOOTHERS_2D[method]
        pyr.details[0] = tuple(smoother(b, passes=passes) for b in pyr.details[0])
