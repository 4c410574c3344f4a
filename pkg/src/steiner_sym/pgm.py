"""PGM (P2/P5) masks and snapshots.

The physical scale travels in a header comment ``#extent R``: the image
covers ``[-R, R]^2``.  Image rows run top to bottom, so pixel ``(row, col)``
holds the field cell ``values[col, n - 1 - row]`` (x to the right, y up).
"""

from __future__ import annotations

import os
import re

import numpy as np

from .errors import BadMaskFile
from .field import OccupancyField

_EXTENT_RE = re.compile(r"#\s*extent\s+([-+0-9.eE]+)")


def _tokens(data: bytes, count: int) -> tuple[list[bytes], list[str], int]:
    """First ``count`` header tokens, header comments, and the offset after them."""
    toks: list[bytes] = []
    comments: list[str] = []
    i = 0
    n = len(data)
    while len(toks) < count:
        while i < n and data[i : i + 1].isspace():
            i += 1
        if i >= n:
            raise BadMaskFile("truncated PGM header")
        if data[i : i + 1] == b"#":
            j = data.find(b"\n", i)
            j = n if j < 0 else j
            comments.append(data[i:j].decode("ascii", "replace").strip())
            i = j + 1
            continue
        j = i
        while j < n and not data[j : j + 1].isspace() and data[j : j + 1] != b"#":
            j += 1
        toks.append(data[i:j])
        i = j
    return toks, comments, i


def read_pgm(path: str | os.PathLike) -> tuple[np.ndarray, float]:
    """Load a PGM mask as ``(values, extent)`` in field axis order.

    Gray levels map linearly to occupancy ``level / maxval``.
    """
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise BadMaskFile(f"cannot read {path}: {exc}") from exc
    toks, comments, pos = _tokens(data, 4)
    magic = toks[0]
    if magic not in (b"P2", b"P5"):
        raise BadMaskFile(f"unsupported PGM magic {magic!r}")
    try:
        width, height, maxval = (int(t) for t in toks[1:])
    except ValueError as exc:
        raise BadMaskFile("malformed PGM header") from exc
    if width <= 0 or height <= 0 or not 0 < maxval < 65536:
        raise BadMaskFile("bad PGM dimensions or maxval")

    if magic == b"P5":
        body = data[pos + 1 :]  # exactly one whitespace byte after maxval
        dtype = np.dtype(">u2") if maxval > 255 else np.dtype("u1")
        need = width * height * dtype.itemsize
        if len(body) < need:
            raise BadMaskFile("truncated PGM raster")
        img = np.frombuffer(body[:need], dtype=dtype).astype(np.float64)
    else:
        rest, more_comments = _strip_comments(data[pos:])
        comments += more_comments
        try:
            img = np.array([int(t) for t in rest.split()], dtype=np.float64)
        except ValueError as exc:
            raise BadMaskFile("non-integer sample in P2 raster") from exc
        if img.size != width * height:
            raise BadMaskFile(f"expected {width * height} samples, found {img.size}")

    extent = None
    for c in comments:
        m = _EXTENT_RE.match(c)
        if m:
            try:
                extent = float(m.group(1))
            except ValueError as exc:
                raise BadMaskFile(f"bad extent comment {c!r}") from exc
    if extent is None or not extent > 0:
        raise BadMaskFile("PGM mask needs a '#extent R' header comment with R > 0")
    if width != height:
        raise BadMaskFile("PGM mask must be square")
    if np.any(img > maxval):
        raise BadMaskFile("sample exceeds maxval")
    img = img.reshape(height, width) / maxval
    return np.ascontiguousarray(img[::-1].T), extent


def _strip_comments(body: bytes) -> tuple[bytes, list[str]]:
    lines = []
    comments = []
    for line in body.split(b"\n"):
        k = line.find(b"#")
        if k >= 0:
            comments.append(line[k:].decode("ascii", "replace").strip())
            line = line[:k]
        lines.append(line)
    return b" ".join(lines), comments


def write_pgm(path: str | os.PathLike, values: np.ndarray, extent: float, binary: bool = True) -> None:
    """Write a 2-D occupancy array (field axis order) as an 8-bit PGM."""
    values = np.asarray(values, dtype=np.float64)
    if values.ndim != 2 or values.shape[0] != values.shape[1]:
        raise ValueError("write_pgm needs a square 2-D array")
    img = np.rint(np.clip(values, 0.0, 1.0) * 255.0).astype(np.uint8).T[::-1]
    n = values.shape[0]
    header = f"{'P5' if binary else 'P2'}\n#extent {extent!r}\n{n} {n}\n255\n".encode("ascii")
    with open(path, "wb") as fh:
        fh.write(header)
        if binary:
            fh.write(img.tobytes())
        else:
            fh.write("\n".join(" ".join(str(v) for v in row) for row in img).encode("ascii") + b"\n")


def write_snapshot_pgm(field: OccupancyField, path: str | os.PathLike) -> None:
    """P5 snapshot; 3-D fields are cut at the middle slice of the last axis."""
    values = field.values
    if field.dim == 3:
        values = values[:, :, field.grid.resolution // 2]
    write_pgm(path, values, field.grid.extent)
