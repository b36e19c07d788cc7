"""Command-line front end.

Every subcommand reads the declared inputs, writes the declared outputs,
and prints a single JSON line with the inputs, parameters, and metrics of
the run. Usage errors exit 2 (argparse); data errors exit 1.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import io as fio
from .core import Image, Signal
from .denoise import savgol_apply_1d, savgol_coeffs_1d, wavelet_denoise
from .edges import canny, fit_edges, gradient_edges
from .fit1d import fit_nonoverlap, fit_overlap, phase_plane, witness_bars
from .fit2d import fit_image_nonoverlap, fit_image_overlap
from .metrics import (entropy, mae, michelson_contrast, mse,
                      mutual_information, psd, psnr)
from .multires import merge_levels, split_levels
from .superres import (GaConfig, deblur_1d, deblur_2d, deblur_mask,
                       ga_tune_mask, nearest_constraint_size, sr_decode,
                       sr_encode)
from .synth import SynthSpec, synth


def _emit(record: dict):
    print(json.dumps(record, sort_keys=True, default=_jsonable))


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if v == float("inf"):
        return "inf"
    raise TypeError(f"not serializable: {type(v)}")


def _finite(v: float):
    return "inf" if v == float("inf") else v


def _read_media(path, sample_rate=1.0):
    if path.endswith((".pgm", ".ppm")):
        return fio.read_netpbm(path)
    return fio.read_signal_csv(path, sample_rate)


def _write_media(path, media):
    if isinstance(media, Image):
        fio.write_netpbm(path, media)
    else:
        fio.write_signal_csv(path, media)


def _fmt12(values):
    return [float(f"{v:.12g}") for v in values]


# ------------------------------------------------------------- subcommands

def cmd_synth(args):
    spec = SynthSpec(kind=args.kind, fs=args.fs, duration=args.duration,
                     noise_percent=args.noise, seed=args.seed,
                     freq=args.freq, pulse_rate=args.pulse_rate)
    sig = synth(spec)
    fio.write_signal_csv(args.output, sig)
    _emit({"cmd": "synth", "kind": args.kind, "fs": args.fs,
           "duration": args.duration, "noise_percent": args.noise,
           "seed": args.seed, "samples": len(sig), "output": args.output})


def cmd_fit1d(args):
    sig = fio.read_signal_csv(args.input, args.fs)
    if args.mode == "overlap":
        series = fit_overlap(sig, args.variant, args.m_size, args.pad)
    else:
        series = fit_nonoverlap(sig, args.variant, args.form)
    fio.write_signal_csv(args.output, Signal(series.values, sig.sample_rate))
    _emit({"cmd": "fit1d", "input": args.input, "mode": args.mode,
           "variant": args.variant, "m_size": args.m_size,
           "values": len(series), "max_hz": _fmt12([series.values.max()])[0],
           "output": args.output})


def cmd_fit2d(args):
    img = fio.read_netpbm(args.input)
    if args.mode == "overlap":
        fit = fit_image_overlap(img, args.mask, args.m_size, args.variant)
        planes = fit.values
    else:
        fit = fit_image_nonoverlap(img, args.variant, args.form)
        planes = np.concatenate([fit.horizontal, fit.vertical, fit.diagonal])
    fio.write_f32_planes(args.output, planes)
    record = {"cmd": "fit2d", "input": args.input, "mode": args.mode,
              "mask": args.mask, "m_size": args.m_size, "variant": args.variant,
              "plane_shape": list(planes.shape), "output": args.output}
    if args.render:
        lo, hi = planes.min(), planes.max()
        scale = 255.0 / (hi - lo) if hi > lo else 0.0
        scaled = (planes - lo) * scale
        if scaled.shape[0] not in (1, 3):
            scaled = scaled.max(axis=0, keepdims=True)
        fio.write_netpbm(args.render, Image(scaled))
        record["render"] = args.render
    _emit(record)


def cmd_witness(args):
    sig = fio.read_signal_csv(args.input, args.fs)
    bars = witness_bars(sig, args.levels)
    fio.atomic_write_bytes(args.output, "".join(
        f"{v:.17g}\n" for v in bars.positions).encode("ascii"))
    _emit({"cmd": "witness", "input": args.input, "levels": args.levels,
           "bars": int(bars.positions.size), "output": args.output})


def cmd_phase(args):
    sig = fio.read_signal_csv(args.input, args.fs)
    pairs = phase_plane(sig, args.mode)
    fio.atomic_write_bytes(args.output, "".join(
        f"{x:.17g},{dx:.17g}\n" for x, dx in pairs).encode("ascii"))
    _emit({"cmd": "phase", "input": args.input, "mode": args.mode,
           "pairs": int(pairs.shape[0]), "output": args.output})


def _transform_cmd(args, basis):
    media = _read_media(args.input, args.fs)
    if isinstance(media, Image):
        data = media.data[0] if media.channels == 1 else media.data
        per_channel = [split_levels(ch, basis, args.levels) for ch in media.data]
        approx = np.stack([p.approx for p in per_channel])
        recon = np.stack([merge_levels(p) for p in per_channel])
        err = float(np.max(np.abs(recon - media.data)))
        fio.write_f32_planes(args.output, approx)
        shape = list(approx.shape)
    else:
        pyr = split_levels(media.samples, basis, args.levels)
        err = float(np.max(np.abs(merge_levels(pyr) - media.samples)))
        fio.write_f32_planes(args.output, pyr.approx[None, :])
        shape = [1, int(pyr.approx.size)]
    _emit({"cmd": basis, "input": args.input, "levels": args.levels,
           "approx_shape": shape, "roundtrip_max_err": err, "output": args.output})


def cmd_haar(args):
    _transform_cmd(args, "haar")


def cmd_coslet(args):
    _transform_cmd(args, "coslet")


def cmd_denoise(args):
    media = _read_media(args.input, args.fs)
    if args.method == "sg":
        if isinstance(media, Image):
            raise ValueError("sg method targets signals; use --method mf/ds/keep/shrink for images")
        half = args.sg_window // 2
        out = savgol_apply_1d(media, savgol_coeffs_1d(half, half, args.sg_degree))
    else:
        out = wavelet_denoise(media, args.basis, args.levels, args.method, args.passes)
    _write_media(args.output, out)
    _emit({"cmd": "denoise", "input": args.input, "basis": args.basis,
           "levels": args.levels, "method": args.method, "passes": args.passes,
           "output": args.output})


def cmd_sr_encode(args):
    media = _read_media(args.input, args.fs)
    payload = sr_encode(media, args.basis, args.version)
    fio.write_payload(args.output, payload, f64=args.f64)
    _emit({"cmd": "sr-encode", "input": args.input, "basis": args.basis,
           "version": args.version, "cr": payload.cr(), "pss": payload.pss(),
           "f64": bool(args.f64), "output": args.output})


def cmd_sr_decode(args):
    payload = fio.read_payload(args.input)
    mask = deblur_mask(args.deblur_n, beta=args.deblur_beta) if args.deblur else None
    media = sr_decode(payload, alt=args.alt, deblur=mask, sample_rate=args.fs)
    _write_media(args.output, media)
    dims = [media.rows, media.cols] if isinstance(media, Image) else [len(media), 1]
    _emit({"cmd": "sr-decode", "input": args.input, "basis": payload.basis,
           "version": payload.version, "alt": args.alt, "deblur": bool(args.deblur),
           "dims": dims, "output": args.output})


def cmd_deblur(args):
    media = _read_media(args.input, args.fs)
    mask = deblur_mask(args.n, alpha=args.alpha, beta=args.beta, edge_mode=args.edge_mode)
    if isinstance(media, Image):
        out = deblur_2d(media, mask)
    else:
        out = deblur_1d(media, args.n, mask)
    _write_media(args.output, out)
    _emit({"cmd": "deblur", "input": args.input, "n": args.n,
           "alpha": mask.alpha, "beta": mask.beta, "output": args.output})


def cmd_ga_tune(args):
    training = []
    for pair in args.pair:
        orig_path, degraded_path = pair.split(":", 1)
        training.append((_read_media(orig_path, args.fs), _read_media(degraded_path, args.fs)))
    cfg = GaConfig(population=args.population, survivors=args.survivors,
                   mutation_rate=args.mutation_rate, generations=args.generations,
                   seed=args.seed)
    alpha, beta = ga_tune_mask(training, cfg)
    _emit({"cmd": "ga-tune", "pairs": len(training), "seed": args.seed,
           "alpha": alpha, "beta": beta, "n": nearest_constraint_size(alpha, beta)})


def cmd_edges(args):
    img = fio.read_netpbm(args.input)
    if args.op == "canny":
        edge = canny(img, args.sigma, args.t_low, args.t_high)
        out = edge.binary.astype(np.float64) * 255.0
    elif args.op == "fit":
        edge = fit_edges(img, args.mask, args.m_size)
        mx = edge.magnitude.max()
        out = edge.magnitude * (255.0 / mx if mx > 0 else 0.0)
    else:
        edge = gradient_edges(img, args.op, args.magnitude)
        mx = edge.magnitude.max()
        out = edge.magnitude * (255.0 / mx if mx > 0 else 0.0)
    fio.write_netpbm(args.output, Image(out[None, :, :]))
    _emit({"cmd": "edges", "input": args.input, "op": args.op,
           "nonzero": int(np.count_nonzero(out)), "output": args.output})


def cmd_metrics(args):
    a = _read_media(args.a, args.fs)
    b = _read_media(args.b, args.fs)
    record = {"cmd": "metrics", "a": args.a, "b": args.b,
              "mae": mae(a, b), "mse": mse(a, b),
              "psnr": _finite(psnr(a, b, args.max_val)),
              "michelson_a": michelson_contrast(a)}
    _emit(record)


def cmd_psd(args):
    sig = fio.read_signal_csv(args.input, args.fs)
    freqs, power = psd(sig, args.nfft)
    fio.atomic_write_bytes(args.output, "".join(
        f"{f:.17g},{p:.17g}\n" for f, p in zip(freqs, power)).encode("ascii"))
    peak = int(np.argmax(power))
    _emit({"cmd": "psd", "input": args.input, "nfft": args.nfft,
           "peak_hz": float(freqs[peak]), "output": args.output})


def cmd_mi(args):
    a = _read_media(args.a, args.fs)
    b = _read_media(args.b, args.fs)
    _emit({"cmd": "mi", "a": args.a, "b": args.b,
           "mi_bits": mutual_information(a, b, args.bins),
           "entropy_a": entropy(a, args.bins), "entropy_b": entropy(b, args.bins)})


# ------------------------------------------------------------------ wiring

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="fitkit",
                                     description="frequency-in-time toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, fn, **kwargs):
        p = sub.add_parser(name, **kwargs)
        p.set_defaults(fn=fn)
        return p

    p = add("synth", cmd_synth, help="generate a test signal")
    p.add_argument("--kind", required=True, choices=("four_tone", "two_tone", "sine", "ecg_like"))
    p.add_argument("--fs", type=float, default=1024.0)
    p.add_argument("--duration", type=float, default=1.0)
    p.add_argument("--noise", type=float, default=0.0, help="noise percent of signal RMS")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--freq", type=float, default=10.0)
    p.add_argument("--pulse-rate", type=float, default=80.0)
    p.add_argument("-o", "--output", required=True)

    p = add("fit1d", cmd_fit1d, help="per-sample frequency estimate of a signal")
    p.add_argument("input")
    p.add_argument("--mode", choices=("overlap", "nonoverlap"), default="overlap")
    p.add_argument("--variant", default="equalized")
    p.add_argument("--m-size", type=int, default=3)
    p.add_argument("--form", choices=("sqrt_conj", "abs"), default="abs")
    p.add_argument("--pad", choices=("cyclic", "zero"), default="cyclic")
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("fit2d", cmd_fit2d, help="per-pixel frequency estimate of an image")
    p.add_argument("input")
    p.add_argument("--mode", choices=("overlap", "nonoverlap"), default="overlap")
    p.add_argument("--mask", choices=("segmental", "square"), default="segmental")
    p.add_argument("--m-size", type=int, default=3)
    p.add_argument("--variant", default="equalized")
    p.add_argument("--form", choices=("sqrt_conj", "abs"), default="abs")
    p.add_argument("--render", help="optional min-max 8-bit rendering path")
    p.add_argument("-o", "--output", required=True, help="raw float32 planes")

    p = add("witness", cmd_witness, help="level-crossing abscissae of a signal")
    p.add_argument("input")
    p.add_argument("--levels", type=int, required=True)
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("phase", cmd_phase, help="phase-plane pairs of a signal")
    p.add_argument("input")
    p.add_argument("--mode", choices=("overlap", "nonoverlap"), default="overlap")
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    for name in ("haar", "coslet"):
        p = add(name, cmd_haar if name == "haar" else cmd_coslet,
                help=f"{name} multilevel split (writes the approximation band)")
        p.add_argument("input")
        p.add_argument("--levels", type=int, default=1)
        p.add_argument("--fs", type=float, default=1.0)
        p.add_argument("-o", "--output", required=True)

    p = add("denoise", cmd_denoise, help="subband-domain denoising")
    p.add_argument("input")
    p.add_argument("--basis", choices=("haar", "coslet"), default="haar")
    p.add_argument("--levels", type=int, default=1)
    p.add_argument("--method", choices=("keep", "shrink", "mf", "ds", "sg"), default="shrink")
    p.add_argument("--passes", type=int, default=1)
    p.add_argument("--sg-window", type=int, default=41)
    p.add_argument("--sg-degree", type=int, default=3)
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("sr-encode", cmd_sr_encode, help="drop detail bands into a payload file")
    p.add_argument("input")
    p.add_argument("--basis", choices=("haar", "coslet"), default="haar")
    p.add_argument("--version", type=int, choices=(1, 2, 3), default=1)
    p.add_argument("--f64", action="store_true", help="store float64 data")
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("sr-decode", cmd_sr_decode, help="reconstruct media from a payload file")
    p.add_argument("input")
    p.add_argument("--alt", choices=("elementwise", "scalar_proj", "res_scalar"),
                   default="elementwise")
    p.add_argument("--deblur", action="store_true")
    p.add_argument("--deblur-n", type=int, default=7)
    p.add_argument("--deblur-beta", type=float, default=1.63)
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("deblur", cmd_deblur, help="apply a constrained restoration mask")
    p.add_argument("input")
    p.add_argument("--n", type=int, default=7)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--beta", type=float, default=1.63)
    p.add_argument("--edge-mode", action="store_true")
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("ga-tune", cmd_ga_tune, help="tune mask parameters on original:degraded pairs")
    p.add_argument("--pair", action="append", required=True,
                   help="original:degraded file pair (repeatable)")
    p.add_argument("--population", type=int, default=64)
    p.add_argument("--survivors", type=int, default=16)
    p.add_argument("--mutation-rate", type=float, default=0.05)
    p.add_argument("--generations", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--fs", type=float, default=1.0)

    p = add("edges", cmd_edges, help="edge detection")
    p.add_argument("input")
    p.add_argument("--op", choices=("roberts", "sobel", "prewitt", "canny", "fit"),
                   default="sobel")
    p.add_argument("--magnitude", choices=("l2", "l1", "max"), default="l2")
    p.add_argument("--mask", choices=("segmental", "square"), default="segmental")
    p.add_argument("--m-size", type=int, default=3)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--t-low", type=float, default=5.0)
    p.add_argument("--t-high", type=float, default=15.0)
    p.add_argument("-o", "--output", required=True)

    p = add("metrics", cmd_metrics, help="error metrics between two files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--max-val", type=float, default=255.0)
    p.add_argument("--fs", type=float, default=1.0)

    p = add("psd", cmd_psd, help="reference power spectral density")
    p.add_argument("input")
    p.add_argument("--nfft", type=int, required=True)
    p.add_argument("--fs", type=float, default=1.0)
    p.add_argument("-o", "--output", required=True)

    p = add("mi", cmd_mi, help="mutual information between two files")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--bins", type=int, default=256)
    p.add_argument("--fs", type=float, default=1.0)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.fn(args)
    except (ValueError, OSError, ZeroDivisionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
