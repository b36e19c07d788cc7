"""Multiresolution transforms: pairwise-mean Haar (exactly invertible) and
the coslet construction (DCT spectrum split into quadrants, each inverse
transformed into a half-resolution subband)."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.fft import dctn, idctn


@dataclass
class SubbandSet1D:
    L: np.ndarray
    H: np.ndarray
    level: int = 1
    basis: str = "haar"


@dataclass
class SubbandSet2D:
    LL: np.ndarray
    LH: np.ndarray
    HL: np.ndarray
    HH: np.ndarray
    level: int = 1
    basis: str = "haar"


@dataclass
class Pyramid1D:
    """Recursive split of the approximation band: details[0] is the finest."""

    approx: np.ndarray
    details: list
    basis: str


@dataclass
class Pyramid2D:
    approx: np.ndarray
    details: list  # list of (LH, HL, HH), finest first
    basis: str


def _require_even(n, what):
    if n % 2 != 0:
        raise ValueError(f"{what} must be even, got {n}")


def haar1d_forward(s) -> SubbandSet1D:
    """Split into pairwise means L and pairwise half-differences H."""
    a = np.asarray(s, dtype=np.float64)
    _require_even(a.size, "signal length")
    even, odd = a[0::2], a[1::2]
    return SubbandSet1D((even + odd) / 2.0, (-even + odd) / 2.0, 1, "haar")


def haar1d_inverse(sb: SubbandSet1D) -> np.ndarray:
    l, h = np.asarray(sb.L, dtype=np.float64), np.asarray(sb.H, dtype=np.float64)
    if l.shape != h.shape:
        raise ValueError("L and H must have equal length")
    out = np.empty(l.size * 2, dtype=np.float64)
    out[0::2] = l - h
    out[1::2] = l + h
    return out


def haar2d_forward(x) -> SubbandSet2D:
    """Per 2x2 block [a b; c d]: mean and the three signed quarter-sums."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a single 2D channel")
    _require_even(a.shape[0], "row count")
    _require_even(a.shape[1], "column count")
    tl = a[0::2, 0::2]
    tr = a[0::2, 1::2]
    bl = a[1::2, 0::2]
    br = a[1::2, 1::2]
    ll = (tl + tr + bl + br) / 4.0
    lh = (-tl + tr - bl + br) / 4.0
    hl = (-tl - tr + bl + br) / 4.0
    hh = (tl - tr - bl + br) / 4.0
    return SubbandSet2D(ll, lh, hl, hh, 1, "haar")


def haar2d_inverse(sb: SubbandSet2D) -> np.ndarray:
    ll, lh, hl, hh = (np.asarray(b, dtype=np.float64) for b in (sb.LL, sb.LH, sb.HL, sb.HH))
    r, c = ll.shape
    out = np.empty((2 * r, 2 * c), dtype=np.float64)
    out[0::2, 0::2] = ll - lh - hl + hh
    out[0::2, 1::2] = ll + lh - hl - hh
    out[1::2, 0::2] = ll - lh + hl - hh
    out[1::2, 1::2] = ll + lh + hl + hh
    return out


def dct2d(x) -> np.ndarray:
    """Orthonormal (unitary) type-II DCT, separable over rows and columns."""
    return dctn(np.asarray(x, dtype=np.float64), norm="ortho")


def idct2d(c) -> np.ndarray:
    return idctn(np.asarray(c, dtype=np.float64), norm="ortho")


def dct1d(x) -> np.ndarray:
    return dctn(np.asarray(x, dtype=np.float64), norm="ortho")


def idct1d(c) -> np.ndarray:
    return idctn(np.asarray(c, dtype=np.float64), norm="ortho")


def coslet2d_forward(x) -> SubbandSet2D:
    """DCT the channel, cut the spectrum into four quadrants, and inverse
    transform each quadrant into a half-resolution subband."""
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a single 2D channel")
    _require_even(a.shape[0], "row count")
    _require_even(a.shape[1], "column count")
    j = dct2d(a)
    hr, hc = a.shape[0] // 2, a.shape[1] // 2
    return SubbandSet2D(
        idct2d(j[:hr, :hc]),
        idct2d(j[:hr, hc:]),
        idct2d(j[hr:, :hc]),
        idct2d(j[hr:, hc:]),
        1,
        "coslet",
    )


def coslet2d_inverse(sb: SubbandSet2D) -> np.ndarray:
    ll, lh, hl, hh = (np.asarray(b, dtype=np.float64) for b in (sb.LL, sb.LH, sb.HL, sb.HH))
    top = np.hstack([dct2d(ll), dct2d(lh)])
    bottom = np.hstack([dct2d(hl), dct2d(hh)])
    return idct2d(np.vstack([top, bottom]))


def coslet1d_forward(s) -> SubbandSet1D:
    """1D analogue: DCT, split the spectrum in half, inverse each half."""
    a = np.asarray(s, dtype=np.float64)
    _require_even(a.size, "signal length")
    j = dct1d(a)
    half = a.size // 2
    return SubbandSet1D(idct1d(j[:half]), idct1d(j[half:]), 1, "coslet")


def coslet1d_inverse(sb: SubbandSet1D) -> np.ndarray:
    return idct1d(np.concatenate([dct1d(sb.L), dct1d(sb.H)]))


_FWD_1D = {"haar": haar1d_forward, "coslet": coslet1d_forward}
_INV_1D = {"haar": haar1d_inverse, "coslet": coslet1d_inverse}
_FWD_2D = {"haar": haar2d_forward, "coslet": coslet2d_forward}
_INV_2D = {"haar": haar2d_inverse, "coslet": coslet2d_inverse}


def forward1d(s, basis: str) -> SubbandSet1D:
    try:
        return _FWD_1D[basis](s)
    except KeyError:
        raise ValueError(f"unknown basis {basis!r}") from None


def inverse1d(sb: SubbandSet1D) -> np.ndarray:
    return _INV_1D[sb.basis](sb)


def forward2d(x, basis: str) -> SubbandSet2D:
    try:
        return _FWD_2D[basis](x)
    except KeyError:
        raise ValueError(f"unknown basis {basis!r}") from None


def inverse2d(sb: SubbandSet2D) -> np.ndarray:
    return _INV_2D[sb.basis](sb)


def split_levels(x, basis: str, levels: int):
    """Recursively decompose the approximation band `levels` times.

    Returns a Pyramid1D for 1D input or a Pyramid2D for 2D input. Dimensions
    must be divisible by 2**levels.
    """
    a = np.asarray(x, dtype=np.float64)
    if levels < 1:
        raise ValueError("levels must be >= 1")
    div = 2 ** levels
    if a.ndim == 1:
        if a.size % div != 0:
            raise ValueError(f"length {a.size} not divisible by 2^{levels}")
        details = []
        approx = a
        for lvl in range(levels):
            sb = forward1d(approx, basis)
            sb.level = lvl + 1
            details.append(sb.H)
            approx = sb.L
        return Pyramid1D(approx, details, basis)
    if a.ndim == 2:
        if a.shape[0] % div != 0 or a.shape[1] % div != 0:
            raise ValueError(f"shape {a.shape} not divisible by 2^{levels}")
        details = []
        approx = a
        for lvl in range(levels):
            sb = forward2d(approx, basis)
            sb.level = lvl + 1
            details.append((sb.LH, sb.HL, sb.HH))
            approx = sb.LL
        return Pyramid2D(approx, details, basis)
    raise ValueError("split_levels expects 1D or 2D data")


def merge_levels(pyramid):
    """Invert split_levels."""
    if isinstance(pyramid, Pyramid1D):
        approx = pyramid.approx
        for h in reversed(pyramid.details):
            approx = inverse1d(SubbandSet1D(approx, h, 1, pyramid.basis))
        return approx
    if isinstance(pyramid, Pyramid2D):
        approx = pyramid.approx
        for lh, hl, hh in reversed(pyramid.details):
            approx = inverse2d(SubbandSet2D(approx, lh, hl, hh, 1, pyramid.basis))
        return approx
    raise TypeError("merge_levels expects a Pyramid1D or Pyramid2D")
