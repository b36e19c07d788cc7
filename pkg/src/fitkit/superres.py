"""Resolution-halving codecs and edge restoration.

The encoder keeps only the approximation subband of a one-level split
(plus, for version 1, one least-squares projection scalar per dropped
detail band). The three decoder versions regenerate the detail bands from
the approximation: by projection scalar (v1), from a second-level split
replicated back up (v2), or from directional derivative masks (v3).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .core import Image, Signal, equalize_array, pad_array_1d
from .fit2d import correlate_same, segmental_masks, square_masks
from .metrics import cr as _cr, mse as _mse, pss as _pss
from .multires import (SubbandSet1D, SubbandSet2D, forward1d, forward2d,
                       inverse1d, inverse2d)

VERSIONS = (1, 2, 3)
V2_ALTERNATIVES = ("elementwise", "scalar_proj", "res_scalar")

# Detail bands of the pairwise split are half-differences of neighbouring
# approximation samples; the centered-difference masks overshoot them by a
# factor of 4, so the synthesized bands are scaled back accordingly.
V3_DETAIL_GAIN = 0.25


@dataclass
class SrPayload:
    basis: str                 # "haar" or "coslet"
    version: int               # 1, 2, or 3
    media: str                 # "signal" or "image"
    dims: tuple                # original dims: (N, 1) for signals, (rows, cols) for images
    channels: int
    ll: list                   # per-channel approximation arrays
    scalars: list = field(default_factory=list)  # per channel: [cH] or [cLH, cHL, cHH]
    meta: dict = field(default_factory=dict)

    def original_count(self) -> int:
        return self.channels * self.dims[0] * max(self.dims[1], 1)

    def payload_count(self) -> int:
        return int(sum(b.size for b in self.ll))

    def cr(self) -> float:
        """Sample-count compression ratio of the data payload (the handful
        of projection scalars is side information and not counted)."""
        return _cr(self.original_count(), self.payload_count())

    def pss(self) -> float:
        return _pss(self.cr())


@dataclass
class DeblurMask:
    """size-by-size kernel, off-center alpha everywhere and beta at the
    center; (size^2 - 1) * alpha + beta is 1 for deblurring, 0 for edge
    detection."""

    size: int
    alpha: float
    beta: float
    edge_mode: bool = False

    def __post_init__(self):
        if self.size < 3 or self.size % 2 == 0:
            raise ValueError("mask size must be odd and >= 3")
        target = 0.0 if self.edge_mode else 1.0
        if abs((self.size ** 2 - 1) * self.alpha + self.beta - target) > 1e-9:
            raise ValueError("mask constraint violated: (N^2-1)*alpha + beta != "
                             f"{target} within 1e-9")

    def taps(self) -> np.ndarray:
        t = np.full((self.size, self.size), self.alpha)
        t[self.size // 2, self.size // 2] = self.beta
        return t


def deblur_mask(N: int, alpha: float | None = None, beta: float | None = None,
                edge_mode: bool = False) -> DeblurMask:
    """Build a constrained mask. With only beta given, alpha is derived from
    the constraint; with both given the constraint is validated."""
    if beta is None:
        raise ValueError("beta is required")
    if alpha is None:
        target = 0.0 if edge_mode else 1.0
        alpha = (target - beta) / (N ** 2 - 1)
    return DeblurMask(N, alpha, beta, edge_mode)


def default_deblur_mask() -> DeblurMask:
    """Empirically tuned default: beta = 1.63 resolves to N = 7 under the
    deblurring constraint, with alpha renormalized to satisfy it exactly."""
    return deblur_mask(7, beta=1.63)


def nearest_constraint_size(alpha: float, beta: float, max_size: int = 33) -> int:
    """Odd N in [3, max_size] closest to the constraint
    (N^2-1)*alpha + beta = 1. The cap keeps near-zero alpha from demanding
    an impractically wide window."""
    if alpha == 0:
        return 3
    n_sq = 1.0 + (1.0 - beta) / alpha
    if n_sq < 9:
        return 3
    n = math.sqrt(n_sq)
    if n >= max_size:
        return max_size
    lower = max(3, int(n) - (1 - int(n) % 2))
    upper = lower + 2
    return lower if abs(n - lower) <= abs(upper - n) else upper


def projection_coeff(h, l) -> float:
    """Least-squares scalar c minimizing ||h - c*l||, via flattened inner
    products."""
    h = np.asarray(h, dtype=np.float64).ravel()
    l = np.asarray(l, dtype=np.float64).ravel()
    if h.shape != l.shape:
        raise ValueError("shape mismatch")
    denom = float(np.dot(l, l))
    if denom == 0.0:
        raise ZeroDivisionError("projection base is identically zero")
    return float(np.dot(h, l)) / denom


def res_upsample(a) -> np.ndarray:
    """Replicate every element into a 2x2 block."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2:
        raise ValueError("expected a 2D array")
    return np.repeat(np.repeat(a, 2, axis=0), 2, axis=1)


def _res_1d(a) -> np.ndarray:
    return np.repeat(np.asarray(a, dtype=np.float64), 2)


def sr_encode(x, basis: str = "haar", version: int = 1) -> SrPayload:
    """One forward split per channel; detail bands are dropped. Version 1
    additionally stores the projection scalar of each dropped band."""
    if version not in VERSIONS:
        raise ValueError(f"unknown version {version}")
    if isinstance(x, Signal):
        sb = forward1d(x.samples, basis)
        scalars = [[projection_coeff(sb.H, sb.L)]] if version == 1 else []
        return SrPayload(basis, version, "signal", (len(x), 1), 1, [sb.L], scalars)
    if isinstance(x, Image):
        ll, scalars = [], []
        for ch in x.data:
            sb = forward2d(ch, basis)
            ll.append(sb.LL)
            if version == 1:
                scalars.append([projection_coeff(sb.LH, sb.LL),
                                projection_coeff(sb.HL, sb.LL),
                                projection_coeff(sb.HH, sb.LL)])
        return SrPayload(basis, version, "image", (x.rows, x.cols), x.channels, ll, scalars)
    raise TypeError("sr_encode expects a Signal or Image")


def _v2_details_1d(l1: np.ndarray, basis: str, alt: str) -> np.ndarray:
    sb2 = forward1d(l1, basis)
    if alt == "elementwise":
        den, _ = equalize_array(_res_1d(sb2.L), 1.0, 2.0)
        return _res_1d(sb2.H) / den * l1
    if alt == "scalar_proj":
        return projection_coeff(sb2.H, sb2.L) * l1
    return projection_coeff(_res_1d(sb2.H), _res_1d(sb2.L)) * l1  # res_scalar


def _v2_details_2d(ll1: np.ndarray, basis: str, alt: str):
    sb2 = forward2d(ll1, basis)
    bands2 = (sb2.LH, sb2.HL, sb2.HH)
    if alt == "elementwise":
        den, _ = equalize_array(res_upsample(sb2.LL), 1.0, 256.0)
        return tuple(res_upsample(b) / den * ll1 for b in bands2)
    if alt == "scalar_proj":
        return tuple(projection_coeff(b, sb2.LL) * ll1 for b in bands2)
    ll_res = res_upsample(sb2.LL)
    return tuple(projection_coeff(res_upsample(b), ll_res) * ll1 for b in bands2)


def _v3_details_1d(l1: np.ndarray) -> np.ndarray:
    p = pad_array_1d(l1, 1, "cyclic")
    return V3_DETAIL_GAIN * (p[2:] - p[:-2]) / 2.0


def _correlate_edge(a: np.ndarray, kernel: np.ndarray) -> np.ndarray:
    # edge-replicated padding: synthesized details of a flat band stay zero
    return correlate_same(a, kernel, max(kernel.shape) // 2, pad_mode="edge")


def _v3_details_2d(ll1: np.ndarray):
    n_h, _ = segmental_masks(3)
    n_sq, _ = square_masks(3)
    lh = V3_DETAIL_GAIN * _correlate_edge(ll1, n_h)
    hl = V3_DETAIL_GAIN * _correlate_edge(ll1, n_h.T)
    hh = V3_DETAIL_GAIN * _correlate_edge(ll1, n_sq)
    return lh, hl, hh


def sr_decode(p: SrPayload, alt: str = "elementwise", deblur: DeblurMask | None = None,
              sample_rate: float = 1.0):
    """Regenerate the dropped detail bands and invert the split.

    alt selects the version-2 reconstruction route; it is ignored by
    versions 1 and 3. An optional deblurring mask is applied to the result.
    """
    if alt not in V2_ALTERNATIVES:
        raise ValueError(f"unknown alternative {alt!r}")
    if p.media == "signal":
        l1 = np.asarray(p.ll[0], dtype=np.float64)
        if p.version == 1:
            h1 = p.scalars[0][0] * l1
        elif p.version == 2:
            h1 = _v2_details_1d(l1, p.basis, alt)
        else:
            h1 = _v3_details_1d(l1)
        out = inverse1d(SubbandSet1D(l1, h1, 1, p.basis))
        sig = Signal(out, sample_rate)
        if deblur is not None:
            sig = deblur_1d(sig, deblur.size, deblur)
        return sig

    planes = []
    for idx in range(p.channels):
        ll1 = np.asarray(p.ll[idx], dtype=np.float64)
        if p.version == 1:
            c_lh, c_hl, c_hh = p.scalars[idx]
            bands = (c_lh * ll1, c_hl * ll1, c_hh * ll1)
        elif p.version == 2:
            bands = _v2_details_2d(ll1, p.basis, alt)
        else:
            bands = _v3_details_2d(ll1)
        planes.append(inverse2d(SubbandSet2D(ll1, *bands, 1, p.basis)))
    img = Image(np.stack(planes))
    if deblur is not None:
        img = deblur_2d(img, deblur)
    return img


def deblur_2d(i: Image, m: DeblurMask) -> Image:
    """Padded correlation with the mask, cropped back to the input size."""
    if m.size > min(i.rows, i.cols):
        raise ValueError("mask larger than image")
    taps = m.taps()
    pad = m.size // 2
    planes = np.stack([correlate_same(ch, taps, pad) for ch in i.data])
    return Image(planes, dict(i.meta))


def deblur_1d(s: Signal, N: int, m: DeblurMask | None = None) -> Signal:
    """Stack proportionally raised and lowered copies of the signal into an
    N-row package, correlate the mask across it, and keep the center row.

    Rows scale the signal by 1 +/- 0.1k so that the mask row sums reproduce
    the deblurring constraint and constants pass through unchanged.
    """
    if N < 3 or N % 2 == 0:
        raise ValueError("N must be odd and >= 3")
    if m is None:
        m = deblur_mask(N, beta=1.63)
    if m.size != N:
        raise ValueError("mask size must match N")
    half = N // 2
    rows = [(1.0 + 0.1 * k) * s.samples for k in range(half, -half - 1, -1)]
    stack = np.stack(rows)  # most-raised copy on top, most-lowered at the bottom
    padded = np.stack([pad_array_1d(r, half, "cyclic") for r in stack])
    taps = m.taps()
    out = np.zeros(len(s))
    for p in range(N):
        row = padded[p]
        for q in range(N):
            out += taps[p, q] * row[q:q + len(s)]
    return Signal(out, s.sample_rate, dict(s.meta))


@dataclass
class GaConfig:
    population: int = 64
    survivors: int = 16
    mutation_rate: float = 0.05
    mutation_sigma_frac: float = 0.05
    generations: int = 100
    alpha_bounds: tuple = (-0.1, -1e-6)
    beta_bounds: tuple = (1.0 + 1e-6, 2.0)
    seed: int = 0


def _chromosome_mask(alpha: float, beta: float) -> DeblurMask:
    n = nearest_constraint_size(alpha, beta)
    return deblur_mask(n, beta=beta)


def ga_fitness(alpha: float, beta: float, training) -> float:
    """Mean squared error of deblurring the degraded items back toward the
    originals, averaged over the training pairs. Chromosomes whose implied
    window does not fit the data score infinitely bad."""
    mask = _chromosome_mask(alpha, beta)
    total = 0.0
    for original, degraded in training:
        try:
            if isinstance(original, Signal):
                restored = deblur_1d(degraded, mask.size, mask)
                total += _mse(original.samples, restored.samples)
            else:
                restored = deblur_2d(degraded, mask)
                total += _mse(original.data, restored.data)
        except ValueError:
            return math.inf
    return total / len(training)


def ga_tune_mask(training, config: GaConfig | None = None):
    """Evolve (alpha, beta) against the training pairs; deterministic for a
    fixed seed. Returns the best chromosome as an (alpha, beta) tuple."""
    if not training:
        raise ValueError("training set must not be empty")
    cfg = config or GaConfig()
    rng = np.random.default_rng(cfg.seed)
    a_lo, a_hi = cfg.alpha_bounds
    b_lo, b_hi = cfg.beta_bounds

    def random_chromosome():
        return np.array([rng.uniform(a_lo, a_hi), rng.uniform(b_lo, b_hi)])

    pop = [random_chromosome() for _ in range(cfg.population)]
    sigmas = np.array([(a_hi - a_lo) * cfg.mutation_sigma_frac,
                       (b_hi - b_lo) * cfg.mutation_sigma_frac])

    def score_all(chroms):
        return [ga_fitness(c[0], c[1], training) for c in chroms]

    scores = score_all(pop)
    for _ in range(cfg.generations):
        order = np.argsort(scores, kind="stable")
        survivors = [pop[k] for k in order[:cfg.survivors]]
        children = []
        while len(children) < cfg.population - cfg.survivors:
            pa, pb = rng.integers(0, cfg.survivors, size=2)
            cut = rng.integers(1, 2)  # one-point crossover over the two genes
            child = np.concatenate([survivors[pa][:cut], survivors[pb][cut:]])
            mutate = rng.random(2) < cfg.mutation_rate
            child = child + mutate * rng.normal(0.0, sigmas)
            child[0] = np.clip(child[0], a_lo, a_hi)
            child[1] = np.clip(child[1], b_lo, b_hi)
            children.append(child)
        pop = survivors + children
        scores = score_all(pop)
    best = int(np.argmin(scores))
    return float(pop[best][0]), float(pop[best][1])
