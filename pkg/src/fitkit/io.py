"""File formats: signal CSV, binary PGM/PPM, raw float32 planes, and the
encoded-payload container."""

from __future__ import annotations

import os
import struct
import tempfile

import numpy as np

from .core import Image, Signal
from .superres import SrPayload

SR_MAGIC = b"FITSR1"
_BASIS_CODE = {"haar": 0, "coslet": 1}
_BASIS_NAME = {v: k for k, v in _BASIS_CODE.items()}
_MEDIA_CODE = {"signal": 0, "image": 1}
_MEDIA_NAME = {v: k for k, v in _MEDIA_CODE.items()}


class FormatError(ValueError):
    """Malformed or unsupported file contents."""


def atomic_write_bytes(path, payload: bytes):
    """Write via a temp file in the same directory, then rename."""
    directory = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".tmp-", suffix=".part")
    try:
        with os.fdopen(fd, "wb") as fh:
            fh.write(payload)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------- CSV signals

def write_signal_csv(path, s: Signal):
    """One sample per line, 17 significant digits, LF terminated."""
    lines = "".join(f"{v:.17g}\n" for v in s.samples)
    atomic_write_bytes(path, lines.encode("ascii"))


def read_signal_csv(path, sample_rate: float = 1.0) -> Signal:
    with open(path, "rb") as fh:
        text = fh.read().decode("ascii")
    values = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.strip()
        if not line:
            continue
        try:
            values.append(float(line))
        except ValueError:
            raise FormatError(f"bad sample on line {lineno}: {line!r}") from None
    if len(values) < 2:
        raise FormatError("signal file needs at least 2 samples")
    return Signal(np.asarray(values), sample_rate)


# ------------------------------------------------------------- PGM/PPM images

def write_netpbm(path, i: Image):
    """P5 for one channel, P6 for three; binary, maxval 255."""
    u8 = i.to_u8()
    if i.channels == 1:
        header = f"P5\n{i.cols} {i.rows}\n255\n".encode("ascii")
        body = u8[0].tobytes()
    else:
        header = f"P6\n{i.cols} {i.rows}\n255\n".encode("ascii")
        body = np.moveaxis(u8, 0, -1).tobytes()  # interleave to RGB per pixel
    atomic_write_bytes(path, header + body)


def _next_token(data: bytes, pos: int):
    # skip whitespace and '#' comments between header tokens
    n = len(data)
    while pos < n:
        ch = data[pos:pos + 1]
        if ch == b"#":
            while pos < n and data[pos:pos + 1] != b"\n":
                pos += 1
        elif ch.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < n and not data[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FormatError("truncated header")
    return data[start:pos], pos


def read_netpbm(path) -> Image:
    with open(path, "rb") as fh:
        data = fh.read()
    if len(data) < 2:
        raise FormatError("not a netpbm file")
    magic = data[:2]
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FormatError(f"unsupported magic {magic!r}")
    pos = 2
    try:
        w_tok, pos = _next_token(data, pos)
        h_tok, pos = _next_token(data, pos)
        mv_tok, pos = _next_token(data, pos)
        width, height, maxval = int(w_tok), int(h_tok), int(mv_tok)
    except ValueError:
        raise FormatError("malformed header") from None
    if width < 2 or height < 2:
        raise FormatError("image too small")
    if not 0 < maxval <= 255:
        raise FormatError(f"unsupported maxval {maxval}")
    pos += 1  # single whitespace byte after the maxval token
    expected = width * height * channels
    body = data[pos:pos + expected]
    if len(body) != expected:
        raise FormatError(f"short file: expected {expected} bytes, got {len(body)}")
    raw = np.frombuffer(body, dtype=np.uint8).reshape(
        (height, width) if channels == 1 else (height, width, 3))
    planes = raw[None, :, :] if channels == 1 else np.moveaxis(raw, -1, 0)
    return Image.from_u8(planes)


# ---------------------------------------------------------- raw float planes

def write_f32_planes(path, planes: np.ndarray):
    """Bare row-major float32 dump; dims travel out of band."""
    a = np.ascontiguousarray(planes, dtype="<f4")
    atomic_write_bytes(path, a.tobytes())


def read_f32_planes(path, shape) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    expected = int(np.prod(shape)) * 4
    if len(data) != expected:
        raise FormatError(f"size mismatch: expected {expected} bytes, got {len(data)}")
    return np.frombuffer(data, dtype="<f4").reshape(shape).astype(np.float64)


# ----------------------------------------------------------- payload container

def pack_payload(p: SrPayload, f64: bool = False) -> bytes:
    """Serialize an encoded payload.

    Layout: 6-byte magic, version byte, basis byte, media byte, channel
    count byte, original dims as two little-endian uint32, scalar count
    byte, the scalars as little-endian float64, then the approximation data
    row-major per channel as little-endian float32 (float64 with f64=True;
    the reader infers the precision from the data length).
    """
    scalars = [v for per_channel in p.scalars for v in per_channel]
    head = struct.pack(
        "<6sBBBBIIB",
        SR_MAGIC,
        p.version,
        _BASIS_CODE[p.basis],
        _MEDIA_CODE[p.media],
        p.channels,
        p.dims[0],
        p.dims[1],
        len(scalars),
    )
    body = struct.pack(f"<{len(scalars)}d", *scalars) if scalars else b""
    dtype = "<f8" if f64 else "<f4"
    data = b"".join(np.ascontiguousarray(b, dtype=dtype).tobytes() for b in p.ll)
    return head + body + data


def unpack_payload(blob: bytes) -> SrPayload:
    head_size = struct.calcsize("<6sBBBBIIB")
    if len(blob) < head_size:
        raise FormatError("container too short")
    magic, version, basis_code, media_code, channels, d0, d1, n_scalars = struct.unpack(
        "<6sBBBBIIB", blob[:head_size])
    if magic != SR_MAGIC:
        raise FormatError(f"bad magic {magic!r}")
    if version not in (1, 2, 3):
        raise FormatError(f"bad version {version}")
    if basis_code not in _BASIS_NAME or media_code not in _MEDIA_NAME:
        raise FormatError("bad basis or media byte")
    if channels not in (1, 3):
        raise FormatError(f"bad channel count {channels}")
    pos = head_size
    scalar_bytes = 8 * n_scalars
    if len(blob) < pos + scalar_bytes:
        raise FormatError("truncated scalar block")
    flat_scalars = list(struct.unpack(f"<{n_scalars}d", blob[pos:pos + scalar_bytes])) if n_scalars else []
    pos += scalar_bytes

    media = _MEDIA_NAME[media_code]
    basis = _BASIS_NAME[basis_code]
    if media == "signal":
        if d0 % 2:
            raise FormatError("signal length must be even")
        band_shape = (d0 // 2,)
    else:
        if d0 % 2 or d1 % 2:
            raise FormatError("image dims must be even")
        band_shape = (d0 // 2, d1 // 2)
    count = channels * int(np.prod(band_shape))
    remaining = len(blob) - pos
    if remaining == count * 4:
        dtype = "<f4"
    elif remaining == count * 8:
        dtype = "<f8"
    else:
        raise FormatError(f"declared sizes need {count * 4} or {count * 8} data bytes, got {remaining}")
    flat = np.frombuffer(blob[pos:], dtype=dtype).astype(np.float64)
    per = int(np.prod(band_shape))
    ll = [flat[k * per:(k + 1) * per].reshape(band_shape) for k in range(channels)]

    if version == 1:
        expected_scalars = channels * (1 if media == "signal" else 3)
        if n_scalars != expected_scalars:
            raise FormatError(f"version 1 expects {expected_scalars} scalars, got {n_scalars}")
        width = 1 if media == "signal" else 3
        scalars = [flat_scalars[k * width:(k + 1) * width] for k in range(channels)]
    else:
        if n_scalars:
            raise FormatError(f"version {version} carries no scalars")
        scalars = []
    return SrPayload(basis, version, media, (d0, d1), channels, ll, scalars)


def write_payload(path, p: SrPayload, f64: bool = False):
    atomic_write_bytes(path, pack_payload(p, f64))


def read_payload(path) -> SrPayload:
    with open(path, "rb") as fh:
        return unpack_payload(fh.read())
