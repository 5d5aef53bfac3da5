"""Minimal raster codecs: binary PGM (P5) and 8-bit PNG (gray / RGB).

PGM is the primary fixture format (bit-exact, dependency-free). The PNG side
handles exactly what the pipeline needs: 8-bit depth, color types 0 and 2, no
interlacing; all five scanline filters are decoded, rows are written unfiltered.
"""

import struct
import zlib

import numpy as np

from .errors import FileFormatError

_PNG_SIGNATURE = b"\x89PNG\r\n\x1a\n"


# ---------------------------------------------------------------------------
# PGM


def read_pgm(path) -> np.ndarray:
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(b"P5"):
        raise FileFormatError("not a binary PGM (P5) file")
    # header tokens separated by whitespace; '#' starts a comment to end of line
    pos = 2
    tokens = []
    while len(tokens) < 3:
        while pos < len(data) and data[pos : pos + 1].isspace():
            pos += 1
        if pos < len(data) and data[pos : pos + 1] == b"#":
            while pos < len(data) and data[pos : pos + 1] != b"\n":
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos : pos + 1].isspace():
            pos += 1
        if start == pos:
            raise FileFormatError("truncated PGM header")
        tokens.append(data[start:pos])
    pos += 1  # single whitespace after maxval
    try:
        width, height, maxval = (int(t) for t in tokens)
    except ValueError:
        raise FileFormatError("non-numeric PGM header") from None
    if width < 1 or height < 1:
        raise FileFormatError(f"bad PGM dimensions {width}x{height}")
    if not 0 < maxval < 256:
        raise FileFormatError(f"only 8-bit PGM supported, maxval={maxval}")
    raster = data[pos : pos + width * height]
    if len(raster) != width * height:
        raise FileFormatError("truncated PGM raster")
    return np.frombuffer(raster, dtype=np.uint8).reshape(height, width).copy()


def write_pgm(path, pixels: np.ndarray) -> None:
    pixels = np.asarray(pixels)
    if pixels.dtype != np.uint8 or pixels.ndim != 2:
        raise FileFormatError("PGM writer needs a 2D uint8 array")
    h, w = pixels.shape
    with open(path, "wb") as fh:
        fh.write(f"P5\n{w} {h}\n255\n".encode("ascii"))
        fh.write(pixels.tobytes())


# ---------------------------------------------------------------------------
# PNG


def _paeth(a: int, b: int, c: int) -> int:
    p = a + b - c
    pa = abs(p - a)
    pb = abs(p - b)
    pc = abs(p - c)
    if pa <= pb and pa <= pc:
        return a
    if pb <= pc:
        return b
    return c


def _unfilter(raw: bytes, height: int, stride: int, bpp: int) -> np.ndarray:
    out = np.zeros((height, stride), dtype=np.uint8)
    pos = 0
    for row in range(height):
        ftype = raw[pos]
        pos += 1
        line = np.frombuffer(raw[pos : pos + stride], dtype=np.uint8).astype(np.int32)
        pos += stride
        prev = out[row - 1].astype(np.int32) if row else np.zeros(stride, dtype=np.int32)
        if ftype == 0:
            cur = line
        elif ftype == 1:  # Sub: sequential within the row
            cur = line.copy()
            for x in range(bpp, stride):
                cur[x] = (cur[x] + cur[x - bpp]) & 0xFF
        elif ftype == 2:  # Up
            cur = (line + prev) & 0xFF
        elif ftype == 3:  # Average
            cur = line.copy()
            for x in range(stride):
                left = cur[x - bpp] if x >= bpp else 0
                cur[x] = (cur[x] + ((left + prev[x]) >> 1)) & 0xFF
        elif ftype == 4:  # Paeth
            cur = line.copy()
            for x in range(stride):
                left = int(cur[x - bpp]) if x >= bpp else 0
                up = int(prev[x])
                ul = int(prev[x - bpp]) if x >= bpp else 0
                cur[x] = (cur[x] + _paeth(left, up, ul)) & 0xFF
        else:
            raise FileFormatError(f"unknown PNG filter type {ftype}")
        out[row] = cur.astype(np.uint8)
    return out


def read_png(path) -> np.ndarray:
    """Returns a (h, w) grayscale or (h, w, 3) RGB uint8 array."""
    with open(path, "rb") as fh:
        data = fh.read()
    if not data.startswith(_PNG_SIGNATURE):
        raise FileFormatError("not a PNG file")
    pos = len(_PNG_SIGNATURE)
    ihdr = None
    idat = bytearray()
    while pos + 8 <= len(data):
        length, ctype = struct.unpack(">I4s", data[pos : pos + 8])
        chunk = data[pos + 8 : pos + 8 + length]
        pos += 12 + length  # length + type + data + crc
        if ctype == b"IHDR":
            ihdr = struct.unpack(">IIBBBBB", chunk)
        elif ctype == b"IDAT":
            idat.extend(chunk)
        elif ctype == b"IEND":
            break
    if ihdr is None:
        raise FileFormatError("PNG missing IHDR")
    width, height, depth, color, comp, filt, interlace = ihdr
    if depth != 8:
        raise FileFormatError(f"only 8-bit PNG supported, bit depth {depth}")
    if color not in (0, 2):
        raise FileFormatError(f"only grayscale/RGB PNG supported, color type {color}")
    if comp != 0 or filt != 0 or interlace != 0:
        raise FileFormatError("unsupported PNG compression/filter/interlace method")
    channels = 1 if color == 0 else 3
    stride = width * channels
    try:
        raw = zlib.decompress(bytes(idat))
    except zlib.error as exc:
        raise FileFormatError(f"PNG deflate stream: {exc}") from None
    if len(raw) != height * (stride + 1):
        raise FileFormatError("PNG raster length mismatch")
    flat = _unfilter(raw, height, stride, channels)
    if channels == 1:
        return flat.reshape(height, width)
    return flat.reshape(height, width, 3)


def write_png(path, pixels: np.ndarray) -> None:
    """Writes 8-bit grayscale (h, w) or RGB (h, w, 3), rows unfiltered."""
    pixels = np.asarray(pixels)
    if pixels.dtype != np.uint8 or pixels.ndim not in (2, 3):
        raise FileFormatError("PNG writer needs a 2D or (h, w, 3) uint8 array")
    if pixels.ndim == 3 and pixels.shape[2] != 3:
        raise FileFormatError("PNG writer needs 3 channels for color images")
    height, width = pixels.shape[:2]
    color = 0 if pixels.ndim == 2 else 2
    body = pixels.reshape(height, -1)
    raw = b"".join(b"\x00" + body[r].tobytes() for r in range(height))

    def chunk(ctype: bytes, payload: bytes) -> bytes:
        crc = zlib.crc32(ctype + payload) & 0xFFFFFFFF
        return struct.pack(">I", len(payload)) + ctype + payload + struct.pack(">I", crc)

    ihdr = struct.pack(">IIBBBBB", width, height, 8, color, 0, 0, 0)
    with open(path, "wb") as fh:
        fh.write(_PNG_SIGNATURE)
        fh.write(chunk(b"IHDR", ihdr))
        fh.write(chunk(b"IDAT", zlib.compress(raw, 9)))
        fh.write(chunk(b"IEND", b""))
