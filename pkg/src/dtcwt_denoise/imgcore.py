"""Grayscale image container, PGM I/O, AWGN simulation and quality metrics."""
from __future__ import annotations

import math
import os
import re
from dataclasses import dataclass

import numpy as np


class PGMError(Exception):
    """Base class for PGM decoding failures."""


class PGMHeaderError(PGMError):
    """The header is missing, malformed, or declares unsupported values."""


class PGMTruncatedError(PGMError):
    """The payload holds fewer samples than the header declares."""


@dataclass(frozen=True, eq=False)
class Image:
    """A 2-D grid of real intensities with its peak value.

    Pixels are float64 and are allowed to leave ``[0, peak]``; clamping only
    happens in :func:`save_pgm`.
    """

    pixels: np.ndarray
    peak: float = 255.0

    def __post_init__(self):
        px = np.array(self.pixels, dtype=np.float64)
        if px.ndim != 2 or px.shape[0] < 1 or px.shape[1] < 1:
            raise ValueError(f"Image pixels must be a non-empty 2-D grid, got shape {px.shape}")
        if not self.peak > 0:
            raise ValueError(f"peak must be positive, got {self.peak}")
        px.setflags(write=False)
        object.__setattr__(self, "pixels", px)
        object.__setattr__(self, "peak", float(self.peak))

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def shape(self) -> tuple:
        return self.pixels.shape

    def with_pixels(self, pixels) -> "Image":
        return Image(pixels, self.peak)

    def __eq__(self, other):
        if not isinstance(other, Image):
            return NotImplemented
        return self.peak == other.peak and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


def pixels_of(img) -> np.ndarray:
    return img.pixels if isinstance(img, Image) else np.asarray(img, dtype=np.float64)


def like_input(pixels, like):
    """Wrap ``pixels`` as an :class:`Image` if ``like`` was one."""
    if isinstance(like, Image):
        return like.with_pixels(pixels)
    return pixels


@dataclass(frozen=True)
class NoiseSpec:
    sigma: float
    seed: int = 0

    def __post_init__(self):
        if not self.sigma >= 0:
            raise ValueError(f"noise sigma must be >= 0, got {self.sigma}")


# -- PGM -------------------------------------------------------------------

_TOKEN = re.compile(rb"\s*(?:#[^\n\r]*[\n\r]\s*)*")
_WORD = re.compile(rb"[^\s#]+")


def _read_header(data: bytes):
    """Return (magic, width, height, maxval, payload offset)."""
    pos = 0
    tokens = []
    while len(tokens) < 4:
        pos = _TOKEN.match(data, pos).end()
        m = _WORD.match(data, pos)
        if m is None:
            raise PGMHeaderError("incomplete PGM header")
        tokens.append(m.group())
        pos = m.end()
    magic = tokens[0]
    if magic not in (b"P2", b"P5"):
        raise PGMHeaderError(f"unsupported magic number {magic!r}")
    try:
        width, height, maxval = (int(t) for t in tokens[1:])
    except ValueError:
        raise PGMHeaderError("non-integer value in PGM header") from None
    if width < 1 or height < 1:
        raise PGMHeaderError(f"invalid dimensions {width}x{height}")
    if not 0 < maxval <= 65535:
        raise PGMHeaderError(f"maxval {maxval} outside 1..65535")
    return magic, width, height, maxval, pos


def decode_pgm(data: bytes) -> Image:
    magic, width, height, maxval, pos = _read_header(data)
    count = width * height
    if magic == b"P5":
        # Exactly one whitespace byte separates the header from the raster.
        if pos >= len(data) or not data[pos:pos + 1].isspace():
            raise PGMTruncatedError("missing raster after header")
        raster = data[pos + 1:]
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = count * dtype.itemsize
        if len(raster) < need:
            raise PGMTruncatedError(
                f"payload holds {len(raster) // dtype.itemsize} samples, header declares {count}")
        values = np.frombuffer(raster[:need], dtype=dtype)
    else:
        body = data[pos:]
        body = re.sub(rb"#[^\n\r]*", b"", body)
        try:
            values = np.array(body.split(), dtype=np.int64)
        except ValueError:
            raise PGMHeaderError("non-integer sample in ASCII raster") from None
        if values.size < count:
            raise PGMTruncatedError(f"payload holds {values.size} samples, header declares {count}")
        values = values[:count]
        if values.min(initial=0) < 0 or values.max(initial=0) > maxval:
            raise PGMHeaderError("ASCII sample outside 0..maxval")
    return Image(values.reshape(height, width).astype(np.float64), peak=maxval)


def load_pgm(path) -> Image:
    """Read a binary (P5) or ASCII (P2) PGM file.

    Raises ``OSError`` on I/O failure, :class:`PGMHeaderError` on a malformed
    header and :class:`PGMTruncatedError` on a short payload.
    """
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_pgm(data)


def quantize(img: Image) -> np.ndarray:
    """Round to nearest (halves away from zero) and clamp to ``[0, peak]``."""
    px = img.pixels
    rounded = np.sign(px) * np.floor(np.abs(px) + 0.5)
    return np.clip(rounded, 0, round(img.peak)).astype(np.int64)


def encode_pgm(img: Image, ascii: bool = False) -> bytes:
    maxval = int(round(img.peak))
    if not 0 < maxval <= 65535:
        raise ValueError(f"peak {img.peak} cannot be stored as a PGM maxval")
    q = quantize(img)
    if ascii:
        header = f"P2\n{img.width} {img.height}\n{maxval}\n".encode()
        rows = (" ".join(str(v) for v in row) for row in q)
        return header + "\n".join(rows).encode() + b"\n"
    header = f"P5\n{img.width} {img.height}\n{maxval}\n".encode()
    dtype = ">u2" if maxval > 255 else "u1"
    return header + q.astype(dtype).tobytes()


def save_pgm(img, path, ascii: bool = False) -> None:
    """Write ``img`` as PGM after rounding and clamping to ``[0, peak]``."""
    if not isinstance(img, Image):
        img = Image(img)
    data = encode_pgm(img, ascii=ascii)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


# -- noise and metrics -----------------------------------------------------

def noise_field(shape, spec: NoiseSpec) -> np.ndarray:
    """Zero-mean Gaussian field drawn from PCG64 seeded with ``spec.seed``.

    Normals come from numpy's ziggurat sampler, which is a pure function of
    the bit generator state, so the field depends only on (shape, seed).
    """
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    return spec.sigma * rng.standard_normal(shape)


def add_awgn(img, spec: NoiseSpec):
    """Add i.i.d. Gaussian noise of std ``spec.sigma`` (deterministic in seed)."""
    px = pixels_of(img)
    if spec.sigma == 0:
        return like_input(px.copy(), img)
    return like_input(px + noise_field(px.shape, spec), img)


def _check_same_shape(a, b):
    if a.shape != b.shape:
        raise ValueError(f"dimension mismatch: {a.shape} vs {b.shape}")


def mse(a, b) -> float:
    pa, pb = pixels_of(a), pixels_of(b)
    _check_same_shape(pa, pb)
    return float(np.mean((pa - pb) ** 2))


def psnr(reference, test, peak: float | None = None) -> float:
    """Peak signal-to-noise ratio in dB; ``math.inf`` for identical inputs.

    The peak defaults to the reference image's peak, or 255 for arrays.
    """
    if peak is None:
        peak = reference.peak if isinstance(reference, Image) else 255.0
    err = mse(reference, test)
    if err == 0:
        return math.inf
    return 10.0 * math.log10(peak * peak / err)
