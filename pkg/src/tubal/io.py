"""Bit-exact tensor file format and PGM/PPM image ingestion.

Tensor files carry a 17-byte header -- magic ``TNS1``, three little-endian
uint32 dims, one dtype tag byte -- followed by the payload in (i fastest,
then j, then k) order.  Tag 0 is a float64 little-endian data payload, tag 1
a uint8 0/1 mask payload.  Round trips are byte-exact.
"""

import struct

import numpy as np

from .errors import DimensionError, FileFormatError
from .tensor import as_mask, as_tensor

MAGIC = b"TNS1"
TAG_DATA = 0
TAG_MASK = 1
_HEADER = struct.Struct("<4sIIIB")
_MAX_ELEMENTS = 1 << 40


def write_tensor(path, a, mask=False):
    """Write ``a`` to ``path``; ``mask=True`` stores a uint8 0/1 payload."""
    if mask:
        payload = as_mask(a).astype(np.uint8).ravel(order="F").tobytes()
        tag = TAG_MASK
    else:
        payload = as_tensor(a).astype("<f8").ravel(order="F").tobytes()
        tag = TAG_DATA
    n1, n2, n3 = np.asarray(a).shape
    with open(path, "wb") as fh:
        fh.write(_HEADER.pack(MAGIC, n1, n2, n3, tag))
        fh.write(payload)


def read_tensor(path, expect=None):
    """Read a tensor file; returns float64 for data, uint8 for masks.

    ``expect`` may be "data" or "mask" to reject the other payload kind.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    if len(blob) < _HEADER.size:
        raise FileFormatError(f"{path}: truncated header")
    magic, n1, n2, n3, tag = _HEADER.unpack_from(blob)
    if magic != MAGIC:
        raise FileFormatError(f"{path}: bad magic {magic!r}")
    if min(n1, n2, n3) < 1:
        raise FileFormatError(f"{path}: dims must be >= 1, got {(n1, n2, n3)}")
    count = n1 * n2 * n3
    if count > _MAX_ELEMENTS:
        raise FileFormatError(f"{path}: dim overflow {(n1, n2, n3)}")
    if tag == TAG_DATA:
        kind, dtype, itemsize = "data", "<f8", 8
    elif tag == TAG_MASK:
        kind, dtype, itemsize = "mask", np.uint8, 1
    else:
        raise FileFormatError(f"{path}: unknown dtype tag {tag}")
    if expect is not None and kind != expect:
        raise FileFormatError(f"{path}: expected a {expect} payload, found {kind}")
    payload = blob[_HEADER.size:]
    if len(payload) != count * itemsize:
        raise FileFormatError(
            f"{path}: payload is {len(payload)} bytes, expected {count * itemsize}"
        )
    flat = np.frombuffer(payload, dtype=dtype)
    out = flat.reshape((n1, n2, n3), order="F")
    if tag == TAG_DATA:
        out = np.ascontiguousarray(out, dtype=np.float64)
        if not np.all(np.isfinite(out)):
            raise FileFormatError(f"{path}: non-finite entries in payload")
    else:
        if not np.all((out == 0) | (out == 1)):
            raise FileFormatError(f"{path}: mask payload has entries outside {{0, 1}}")
        out = np.ascontiguousarray(out)
    return out


def _next_token(blob, pos):
    while pos < len(blob):
        c = blob[pos:pos + 1]
        if c == b"#":
            end = blob.find(b"\n", pos)
            if end < 0:
                raise FileFormatError("unterminated comment in image header")
            pos = end + 1
        elif c.isspace():
            pos += 1
        else:
            break
    start = pos
    while pos < len(blob) and not blob[pos:pos + 1].isspace():
        pos += 1
    if start == pos:
        raise FileFormatError("truncated image header")
    return blob[start:pos], pos


def image_to_tensor(path):
    """Read a binary PGM (P5) as (h, w, 1) or PPM (P6) as (h, w, 3).

    Values are scaled to [0, 1] by maxval; maxval > 255 means two-byte
    big-endian samples, maxval > 65535 is unsupported.
    """
    with open(path, "rb") as fh:
        blob = fh.read()
    magic, pos = _next_token(blob, 0)
    if magic == b"P5":
        channels = 1
    elif magic == b"P6":
        channels = 3
    else:
        raise FileFormatError(f"{path}: unsupported image format {magic!r}")
    fields = []
    for _ in range(3):
        token, pos = _next_token(blob, pos)
        try:
            fields.append(int(token))
        except ValueError:
            raise FileFormatError(f"{path}: bad header token {token!r}") from None
    width, height, maxval = fields
    if width < 1 or height < 1:
        raise FileFormatError(f"{path}: bad image dims {width}x{height}")
    if not 0 < maxval <= 65535:
        raise FileFormatError(f"{path}: unsupported maxval {maxval}")
    pos += 1  # single whitespace byte separates header and raster
    dtype = ">u2" if maxval > 255 else np.uint8
    count = width * height * channels
    raster = np.frombuffer(blob, dtype=dtype, count=count, offset=pos) \
        if len(blob) - pos >= count * np.dtype(dtype).itemsize else None
    if raster is None:
        raise FileFormatError(f"{path}: truncated raster")
    cube = raster.reshape(height, width, channels).astype(np.float64) / maxval
    return np.ascontiguousarray(cube)


def tensor_to_image(path, a, maxval=255):
    """Write a (h, w, 1) tensor as PGM or (h, w, 3) as PPM.

    Values are clipped to [0, 1] and quantized by rounding to maxval steps.
    """
    a = as_tensor(a)
    if a.shape[2] == 1:
        magic = b"P5"
    elif a.shape[2] == 3:
        magic = b"P6"
    else:
        raise DimensionError(f"image tensors need 1 or 3 slices, got {a.shape[2]}")
    if not 0 < maxval <= 65535:
        raise ValueError(f"unsupported maxval {maxval}")
    q = np.rint(np.clip(a, 0.0, 1.0) * maxval)
    dtype = ">u2" if maxval > 255 else np.uint8
    raster = q.astype(dtype).tobytes(order="C")
    header = b"%s\n%d %d\n%d\n" % (magic, a.shape[1], a.shape[0], maxval)
    with open(path, "wb") as fh:
        fh.write(header)
        fh.write(raster)
