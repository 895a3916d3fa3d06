"""8-bit grayscale images, PGM I/O and PSNR."""
from __future__ import annotations

import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from ..errors import DataError, FormatError, ParameterError


@dataclass(frozen=True, eq=False)
class ImageU8:
    """Row-major 8-bit grayscale image backed by a read-only ``uint8`` array."""

    pixels: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.pixels)
        if arr.ndim != 2:
            raise DataError("image must be two-dimensional")
        if arr.dtype != np.uint8:
            if arr.size and (arr.min() < 0 or arr.max() > 255):
                raise DataError("pixel values must lie in 0..255")
            arr = arr.astype(np.uint8)
        arr = np.array(arr, dtype=np.uint8, copy=True)
        arr.setflags(write=False)
        object.__setattr__(self, "pixels", arr)

    @property
    def height(self) -> int:
        return self.pixels.shape[0]

    @property
    def width(self) -> int:
        return self.pixels.shape[1]

    @property
    def shape(self) -> tuple[int, int]:
        return self.pixels.shape

    def __eq__(self, other) -> bool:
        return isinstance(other, ImageU8) and np.array_equal(self.pixels, other.pixels)

    __hash__ = None


# ---------------------------------------------------------------------------
# PGM

def _tokens(data: bytes, count: int, pos: int) -> tuple[list[bytes], int]:
    """Read ``count`` whitespace-separated header tokens, skipping ``#`` comments."""
    out = []
    n = len(data)
    while len(out) < count:
        while pos < n and data[pos:pos + 1].isspace():
            pos += 1
        if pos < n and data[pos:pos + 1] == b"#":
            while pos < n and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < n and not data[pos:pos + 1].isspace() and data[pos:pos + 1] != b"#":
            pos += 1
        if start == pos:
            raise FormatError("truncated PGM header")
        out.append(data[start:pos])
    return out, pos


def pgm_read(source) -> ImageU8:
    """Read a P5 (binary) or P2 (ASCII) PGM with maxval 255."""
    if isinstance(source, (bytes, bytearray)):
        data = bytes(source)
    elif isinstance(source, (str, os.PathLike)):
        with open(source, "rb") as fh:
            data = fh.read()
    else:
        data = source.read()
    magic = data[:2]
    if magic not in (b"P5", b"P2"):
        raise FormatError(f"not a PGM file (magic {magic!r})")
    try:
        (w, h, maxval), pos = _tokens(data, 3, 2)
        w, h, maxval = int(w), int(h), int(maxval)
    except ValueError:
        raise FormatError("malformed PGM header") from None
    if w <= 0 or h <= 0:
        raise FormatError("PGM dimensions must be positive")
    if maxval != 255:
        raise FormatError(f"unsupported maxval {maxval}; only 8-bit (255) images are handled")
    if magic == b"P5":
        pos += 1  # single whitespace after maxval
        payload = data[pos:pos + w * h]
        if len(payload) < w * h:
            raise FormatError(f"truncated payload: expected {w * h} bytes, got {len(payload)}")
        arr = np.frombuffer(payload, dtype=np.uint8).reshape(h, w)
    else:
        try:
            vals = np.array(data[pos:].split(), dtype=np.int64)
        except ValueError:
            raise FormatError("non-numeric pixel in P2 payload") from None
        if vals.size < w * h:
            raise FormatError(f"truncated payload: expected {w * h} values, got {vals.size}")
        vals = vals[:w * h]
        if vals.min() < 0 or vals.max() > 255:
            raise FormatError("pixel value above maxval")
        arr = vals.reshape(h, w)
    return ImageU8(arr)


def pgm_bytes(img: ImageU8) -> bytes:
    return f"P5\n{img.width} {img.height}\n255\n".encode("ascii") + img.pixels.tobytes()


def pgm_write(img: ImageU8, destination) -> None:
    data = pgm_bytes(img)
    if isinstance(destination, (str, os.PathLike)):
        with open(destination, "wb") as fh:
            fh.write(data)
    else:
        destination.write(data)


# ---------------------------------------------------------------------------
# quality

@dataclass(frozen=True)
class QualityReport:
    mse: Fraction
    psnr_db: float  # math.inf when the images are identical

    @property
    def infinite(self) -> bool:
        return math.isinf(self.psnr_db)

    def as_dict(self) -> dict:
        return {"mse": float(self.mse), "mse_exact": str(self.mse),
                "psnr_db": "inf" if self.infinite else self.psnr_db}


def psnr(ref: ImageU8, test: ImageU8) -> QualityReport:
    if ref.shape != test.shape:
        raise ParameterError(f"image sizes differ: {ref.shape} vs {test.shape}")
    diff = ref.pixels.astype(np.int64) - test.pixels.astype(np.int64)
    sse = int((diff * diff).sum())
    mse = Fraction(sse, diff.size)
    if sse == 0:
        return QualityReport(mse, math.inf)
    return QualityReport(mse, 10 * math.log10(255 * 255 / mse))


def format_psnr(q: QualityReport) -> str:
    return "inf" if q.infinite else f"{q.psnr_db:.2f}"
