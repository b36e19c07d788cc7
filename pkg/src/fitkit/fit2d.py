"""Per-pixel frequency estimates for images.

The overlap form runs derivative masks over each zero-padded channel and
divides by a guarded amplitude term; the non-overlap form divides the three
detail subbands of a one-level pairwise split by the approximation subband,
giving directional estimates at half resolution.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.signal import correlate2d

from .core import Image, IMAGE_EQ_RANGE, equalize_array
from .fit1d import TWO_PI, ZERO_MEAN_EPS
from .multires import haar2d_forward

MASK_KINDS = ("segmental", "square")
OVERLAP_VARIANTS = ("raw", "equalized", "averaged", "mask")
NONOVERLAP_VARIANTS = ("raw", "eq", "av")


@dataclass
class FitImage:
    """Overlap: `values` per channel at full resolution. Non-overlap: the
    three directional arrays per channel at half resolution."""

    values: np.ndarray | None = None
    horizontal: np.ndarray | None = None
    vertical: np.ndarray | None = None
    diagonal: np.ndarray | None = None
    variant: str = ""
    meta: dict = field(default_factory=dict)


def _check_odd(m):
    if m < 3 or m % 2 == 0:
        raise ValueError(f"mask size must be odd and >= 3, got {m}")


def segmental_masks(m: int):
    """Row derivative/mean operator pair; transpose for the column versions."""
    _check_odd(m)
    half = (m - 1) // 2
    n_h = np.concatenate([-np.ones(half), [0.0], np.ones(half)])[None, :] / (m - 1)
    d_h = np.ones((1, m)) / m
    return n_h, d_h


def square_masks(m: int):
    """Anti-diagonal step mask and the box mean.

    The derivative mask has -1 above the anti-diagonal, 0 on it, +1 below,
    normalized by (m-1)*m; the mean mask is all ones over m^2.
    """
    _check_odd(m)
    r = np.arange(m)[:, None]
    c = np.arange(m)[None, :]
    n = np.where(r + c < m - 1, -1.0, np.where(r + c > m - 1, 1.0, 0.0)) / ((m - 1) * m)
    d = np.ones((m, m)) / (m * m)
    return n, d


def correlate_same(channel: np.ndarray, kernel: np.ndarray, pad: int,
                   pad_mode: str = "zero") -> np.ndarray:
    """Pad by `pad` on all sides, correlate (no kernel flip), crop back.

    pad_mode "zero" fills margins with zeros; "edge" replicates border
    values (used where a fake border gradient would be harmful).
    """
    if pad_mode == "zero":
        padded = np.pad(channel, pad)
    elif pad_mode == "edge":
        padded = np.pad(channel, pad, mode="edge")
    else:
        raise ValueError(f"unknown pad mode {pad_mode!r}")
    out = correlate2d(padded, kernel, mode="valid")
    r0 = (out.shape[0] - channel.shape[0]) // 2
    c0 = (out.shape[1] - channel.shape[1]) // 2
    return out[r0:r0 + channel.shape[0], c0:c0 + channel.shape[1]]


def directional_derivative(i: Image, mask_kind: str = "segmental", M: int = 3):
    """Per-channel derivative magnitude.

    Segmental: row and column derivative responses combined by Pythagoras;
    returns (I_H, I_V, magnitude), each (channels, rows, cols). Square: one
    combined mask; I_H and I_V are None.
    """
    if mask_kind not in MASK_KINDS:
        raise ValueError(f"unknown mask kind {mask_kind!r}")
    _check_odd(M)
    pad = (M - 1) // 2
    if mask_kind == "segmental":
        n_h, _ = segmental_masks(M)
        i_h = np.stack([correlate_same(ch, n_h, pad) for ch in i.data])
        i_v = np.stack([correlate_same(ch, n_h.T, pad) for ch in i.data])
        return i_h, i_v, np.sqrt(i_h ** 2 + i_v ** 2)
    n_sq, _ = square_masks(M)
    mag = np.stack([correlate_same(ch, n_sq, pad) for ch in i.data])
    return None, None, mag


def smoothing_denominator(i: Image, mask_kind: str = "segmental", M: int = 3) -> np.ndarray:
    """Window-mean amplitude per channel (Pythagorean pair for segmental)."""
    if mask_kind not in MASK_KINDS:
        raise ValueError(f"unknown mask kind {mask_kind!r}")
    _check_odd(M)
    pad = (M - 1) // 2
    if mask_kind == "segmental":
        _, d_h = segmental_masks(M)
        b_h = np.stack([correlate_same(ch, d_h, pad) for ch in i.data])
        b_v = np.stack([correlate_same(ch, d_h.T, pad) for ch in i.data])
        return np.sqrt(b_h ** 2 + b_v ** 2)
    _, d_sq = square_masks(M)
    return np.stack([correlate_same(ch, d_sq, pad) for ch in i.data])


def fit_image_overlap(i: Image, mask_kind: str = "segmental", M: int = 3,
                      variant: str = "equalized") -> FitImage:
    """Full-resolution frequency estimate per pixel, per channel.

    raw divides by the pixel values and errors on zeros; equalized rescales
    each channel onto [1, 256] first; averaged divides by the channel mean;
    mask divides by the window-mean amplitude of the equalized channel.
    """
    if variant not in OVERLAP_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    lo, hi = IMAGE_EQ_RANGE
    meta: dict = {"variant": variant, "mask_kind": mask_kind, "M": M}

    if variant == "raw":
        zero = np.argwhere(i.data == 0)
        if zero.size:
            ch, r, c = (int(v) for v in zero[0])
            raise ZeroDivisionError(f"raw variant undefined: zero pixel at channel {ch}, ({r}, {c})")
        _, _, mag = directional_derivative(i, mask_kind, M)
        den = np.abs(i.data)
    elif variant == "equalized":
        planes = []
        flags = []
        for ch in i.data:
            eq, degenerate = equalize_array(ch, lo, hi)
            planes.append(eq)
            flags.append(degenerate)
        eq_img = Image(np.stack(planes))
        meta["equalize_degenerate"] = flags
        _, _, mag = directional_derivative(eq_img, mask_kind, M)
        den = eq_img.data
    elif variant == "averaged":
        _, _, mag = directional_derivative(i, mask_kind, M)
        means = np.abs(i.data.mean(axis=(1, 2)))
        if np.any(means <= ZERO_MEAN_EPS):
            meta["avg_fallback_abs"] = True
            fallback = np.abs(i.data).mean(axis=(1, 2))
            means = np.where(means <= ZERO_MEAN_EPS, fallback, means)
        if np.any(means <= ZERO_MEAN_EPS):
            meta["zero_channel"] = True
            means = np.where(means <= ZERO_MEAN_EPS, 1.0, means)
        den = np.broadcast_to(means[:, None, None], i.data.shape)
    else:  # mask
        _, _, mag = directional_derivative(i, mask_kind, M)
        planes = []
        for ch in i.data:
            eq, _ = equalize_array(ch, lo, hi)
            planes.append(eq)
        den = smoothing_denominator(Image(np.stack(planes)), mask_kind, M)

    return FitImage(values=np.abs(mag) / den / TWO_PI, variant=variant, meta=meta)


def fit_image_nonoverlap(i: Image, variant: str = "eq", form: str = "abs") -> FitImage:
    """Directional estimates at half resolution from a one-level split.

    Horizontal, vertical, and diagonal detail subbands are each divided by
    the approximation subband (raw), by the approximation of the channel
    rescaled onto [1, 256] (eq), or by the approximation mean (av).
    """
    if variant not in NONOVERLAP_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if form not in ("sqrt_conj", "abs"):
        raise ValueError(f"unknown form {form!r}")
    if i.rows % 2 or i.cols % 2:
        raise ValueError("non-overlap estimate needs even image dimensions")
    lo, hi = IMAGE_EQ_RANGE
    meta: dict = {"variant": variant, "form": form}

    out_h, out_v, out_d = [], [], []
    for ch in i.data:
        if variant == "eq":
            eq, degenerate = equalize_array(ch, lo, hi)
            meta.setdefault("equalize_degenerate", []).append(degenerate)
            sb = haar2d_forward(eq)
            den = sb.LL
        elif variant == "raw":
            sb = haar2d_forward(ch)
            zero = np.argwhere(sb.LL == 0)
            if zero.size:
                r, c = (int(v) for v in zero[0])
                raise ZeroDivisionError(f"raw variant undefined: zero approximation at ({r}, {c})")
            den = sb.LL
        else:
            sb = haar2d_forward(ch)
            d = abs(float(sb.LL.mean()))
            if d <= ZERO_MEAN_EPS:
                meta["avg_fallback_abs"] = True
                d = float(np.abs(sb.LL).mean())
            if d <= ZERO_MEAN_EPS:
                meta["zero_channel"] = True
                d = 1.0
            den = np.full_like(sb.LL, d)

        for band, bucket in ((sb.LH, out_h), (sb.HL, out_v), (sb.HH, out_d)):
            if form == "sqrt_conj":
                quotient = 1j * band / den
                bucket.append(np.sqrt((quotient * np.conj(quotient)).real) / TWO_PI)
            else:
                bucket.append(np.abs(band) / np.abs(den) / TWO_PI)

    return FitImage(horizontal=np.stack(out_h), vertical=np.stack(out_v),
                    diagonal=np.stack(out_d), variant=variant, meta=meta)
