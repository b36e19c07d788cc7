"""Deterministic synthetic test signals."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Signal

KINDS = ("four_tone", "two_tone", "sine", "ecg_like")

# Pulse-train template: Gaussian bumps at fixed phase offsets within each
# beat (amplitude, center, width), phase measured in beat fractions.
ECG_TEMPLATE = (
    (0.12, 0.10, 0.045),   # rounded lead-in bump
    (-0.15, 0.185, 0.025),  # sharp dip before the main spike
    (1.00, 0.225, 0.040),   # main spike
    (-0.20, 0.265, 0.025),  # sharp dip after the main spike
    (0.30, 0.50, 0.075),    # trailing rounded bump
)


@dataclass
class SynthSpec:
    kind: str
    fs: float = 1024.0
    duration: float = 1.0
    noise_percent: float = 0.0
    seed: int = 0
    freq: float = 10.0        # sine only
    pulse_rate: float = 80.0  # ecg_like only, pulses per second

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown kind {self.kind!r}")
        if not self.fs > 0:
            raise ValueError("fs must be positive")
        if not self.duration > 0:
            raise ValueError("duration must be positive")
        if self.noise_percent < 0:
            raise ValueError("noise_percent must be >= 0")


def four_tone(t: np.ndarray, duration: float) -> np.ndarray:
    """Four pure cosines (10, 25, 50, 100 Hz) over equal quarters of the
    duration; the canonical 20 s span gives 5 s per tone."""
    quarter = duration / 4.0
    out = np.empty_like(t)
    freqs = (10.0, 25.0, 50.0, 100.0)
    for k, f in enumerate(freqs):
        m = (t >= k * quarter) & (t < (k + 1) * quarter) if k < 3 else (t >= k * quarter)
        out[m] = np.cos(2.0 * np.pi * f * t[m])
    return out


def two_tone(t_centered: np.ndarray) -> np.ndarray:
    """1 Hz component for t <= 0, 2 Hz for t > 0."""
    return np.where(t_centered <= 0,
                    np.cos(2.0 * np.pi * t_centered),
                    np.cos(4.0 * np.pi * t_centered))


def ecg_pulse_train(t: np.ndarray, pulse_rate: float) -> np.ndarray:
    phase = np.mod(t * pulse_rate, 1.0)
    out = np.zeros_like(t)
    for amp, center, width in ECG_TEMPLATE:
        out += amp * np.exp(-0.5 * ((phase - center) / width) ** 2)
    return out


def synth(spec: SynthSpec) -> Signal:
    """Generate the requested waveform, plus Gaussian noise scaled to a
    percentage of the clean RMS. Deterministic for a fixed seed."""
    n = int(round(spec.fs * spec.duration))
    if n < 2:
        raise ValueError("duration too short for the sample rate")
    t = np.arange(n) / spec.fs
    if spec.kind == "four_tone":
        clean = four_tone(t, spec.duration)
    elif spec.kind == "two_tone":
        clean = two_tone(t - spec.duration / 2.0)
    elif spec.kind == "sine":
        clean = np.sin(2.0 * np.pi * spec.freq * t)
    else:
        clean = ecg_pulse_train(t, spec.pulse_rate)
    if spec.noise_percent > 0:
        rng = np.random.default_rng(spec.seed)
        sigma = spec.noise_percent / 100.0 * float(np.sqrt(np.mean(clean ** 2)))
        clean = clean + rng.normal(0.0, sigma, n)
    return Signal(clean, spec.fs, {"kind": spec.kind, "seed": spec.seed})
