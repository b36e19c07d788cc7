"""Classical gradient edge detectors, a double-threshold hysteresis
detector, and the frequency-estimate detector for comparison."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field

import numpy as np
from scipy.ndimage import gaussian_filter

from .core import Image
from .fit2d import correlate_same, fit_image_overlap

GRADIENT_OPS = ("roberts", "sobel", "prewitt")
MAGNITUDE_MODES = ("l2", "l1", "max")

SOBEL_X = np.array([[-1.0, 0.0, 1.0], [-2.0, 0.0, 2.0], [-1.0, 0.0, 1.0]])
SOBEL_Y = np.array([[1.0, 2.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -2.0, -1.0]])
PREWITT_X = np.array([[-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0], [-1.0, 0.0, 1.0]])
PREWITT_Y = np.array([[1.0, 1.0, 1.0], [0.0, 0.0, 0.0], [-1.0, -1.0, -1.0]])
ROBERTS_X = np.array([[1.0, 0.0], [0.0, -1.0]])
ROBERTS_Y = np.array([[0.0, -1.0], [1.0, 0.0]])

LUMA_WEIGHTS = np.array([0.299, 0.587, 0.114])


@dataclass
class EdgeMap:
    magnitude: np.ndarray
    orientation: np.ndarray | None = None
    binary: np.ndarray | None = None
    meta: dict = field(default_factory=dict)


def to_gray(i: Image, mode: str = "luminance") -> np.ndarray:
    """Collapse color to one plane by luminance (default) or channel max."""
    if i.channels == 1:
        return i.data[0]
    if mode == "luminance":
        return np.tensordot(LUMA_WEIGHTS, i.data, axes=(0, 0))
    if mode == "channel_max":
        return i.data.max(axis=0)
    raise ValueError(f"unknown gray mode {mode!r}")


def _corr_2x2(plane: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    # 2x2 support: replicate one row/col at the bottom-right to keep size
    # without inventing a border gradient
    padded = np.pad(plane, ((0, 1), (0, 1)), mode="edge")
    out = np.zeros_like(plane)
    for (dr, dc), w in np.ndenumerate(kernel):
        if w != 0.0:
            out += w * padded[dr:dr + plane.shape[0], dc:dc + plane.shape[1]]
    return out


def gradient_edges(i: Image, op: str = "sobel", magnitude_mode: str = "l2",
                   gray_mode: str = "luminance") -> EdgeMap:
    """Gradient magnitude and orientation from one of the classic operator
    pairs."""
    if op not in GRADIENT_OPS:
        raise ValueError(f"unknown operator {op!r}")
    if magnitude_mode not in MAGNITUDE_MODES:
        raise ValueError(f"unknown magnitude mode {magnitude_mode!r}")
    plane = to_gray(i, gray_mode)
    if op == "roberts":
        gx = _corr_2x2(plane, ROBERTS_X)
        gy = _corr_2x2(plane, ROBERTS_Y)
    else:
        kx, ky = (SOBEL_X, SOBEL_Y) if op == "sobel" else (PREWITT_X, PREWITT_Y)
        gx = correlate_same(plane, kx, 1, pad_mode="edge")
        gy = correlate_same(plane, ky, 1, pad_mode="edge")
    if magnitude_mode == "l2":
        mag = np.sqrt(gx ** 2 + gy ** 2)
    elif magnitude_mode == "l1":
        mag = np.abs(gx) + np.abs(gy)
    else:
        mag = np.maximum(np.abs(gx), np.abs(gy))
    return EdgeMap(mag, orientation=np.arctan2(gy, gx),
                   meta={"op": op, "magnitude_mode": magnitude_mode})


def _nonmax_suppress(mag: np.ndarray, theta: np.ndarray) -> np.ndarray:
    # quantize orientation into 4 sectors and keep local ridge maxima
    rows, cols = mag.shape
    angle = np.mod(theta, np.pi)
    sector = np.zeros(mag.shape, dtype=np.int8)
    sector[(angle >= np.pi / 8) & (angle < 3 * np.pi / 8)] = 1
    sector[(angle >= 3 * np.pi / 8) & (angle < 5 * np.pi / 8)] = 2
    sector[(angle >= 5 * np.pi / 8) & (angle < 7 * np.pi / 8)] = 3
    offsets = {0: ((0, 1), (0, -1)), 1: ((-1, 1), (1, -1)),
               2: ((-1, 0), (1, 0)), 3: ((-1, -1), (1, 1))}
    padded = np.pad(mag, 1)
    keep = np.zeros_like(mag, dtype=bool)
    for sec, ((r1, c1), (r2, c2)) in offsets.items():
        m = sector == sec
        n1 = padded[1 + r1:1 + r1 + rows, 1 + c1:1 + c1 + cols]
        n2 = padded[1 + r2:1 + r2 + rows, 1 + c2:1 + c2 + cols]
        keep |= m & (mag >= n1) & (mag >= n2)
    return keep & (mag > 0)


def _hysteresis(mag: np.ndarray, keep: np.ndarray, t_low: float, t_high: float) -> np.ndarray:
    strong = keep & (mag >= t_high)
    candidate = keep & (mag >= t_low)
    out = strong.copy()
    queue = deque(zip(*np.nonzero(strong)))
    rows, cols = mag.shape
    while queue:
        r, c = queue.popleft()
        for dr in (-1, 0, 1):
            for dc in (-1, 0, 1):
                rr, cc = r + dr, c + dc
                if 0 <= rr < rows and 0 <= cc < cols and candidate[rr, cc] and not out[rr, cc]:
                    out[rr, cc] = True
                    queue.append((rr, cc))
    return out


def canny(i: Image, sigma: float = 1.0, t_low: float = 0.1, t_high: float = 0.3,
          gray_mode: str = "luminance") -> EdgeMap:
    """Gaussian smoothing, 2x2 finite-difference gradient, nonmaxima
    suppression over 4 orientation sectors, then double-threshold linking
    with 8-connected hysteresis."""
    if sigma <= 0:
        raise ValueError("sigma must be positive")
    if not t_low < t_high:
        raise ValueError("t_low must be below t_high")
    plane = to_gray(i, gray_mode)
    smoothed = gaussian_filter(plane, sigma, mode="nearest")
    padded = np.pad(smoothed, ((0, 1), (0, 1)), mode="edge")
    s00 = padded[:-1, :-1]
    s01 = padded[:-1, 1:]
    s10 = padded[1:, :-1]
    s11 = padded[1:, 1:]
    p = (s01 - s00 + s11 - s10) / 2.0
    q = (s00 - s10 + s01 - s11) / 2.0
    mag = np.hypot(p, q)
    theta = np.arctan2(q, p)
    keep = _nonmax_suppress(mag, theta)
    binary = _hysteresis(mag, keep, t_low, t_high)
    return EdgeMap(mag, orientation=theta, binary=binary,
                   meta={"sigma": sigma, "t_low": t_low, "t_high": t_high})


def fit_edges(i: Image, mask_kind: str = "segmental", M: int = 3,
              threshold_frac: float | None = None) -> EdgeMap:
    """Edge response from the equalized per-pixel frequency estimate; an
    optional fraction-of-max threshold yields a binary map."""
    fit = fit_image_overlap(i, mask_kind, M, variant="equalized")
    mag = fit.values.max(axis=0)
    binary = None
    if threshold_frac is not None:
        if not 0 < threshold_frac <= 1:
            raise ValueError("threshold_frac must be in (0, 1]")
        binary = mag >= threshold_frac * mag.max()
    return EdgeMap(mag, binary=binary, meta={"mask_kind": mask_kind, "M": M})
