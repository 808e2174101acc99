"""Reading and writing the shared frame file format.

Layout: a text header line ``FRAME v1 <M> <N> <real|complex>`` followed by
M*N whitespace-separated entries in column-major order, complex entries as
``a+bi``.  A binary variant appends the token ``binary`` to the header and
stores the entries as little-endian 64-bit floats (real/imaginary pairs for
complex frames), still column-major.

Text entries are written with ``repr`` so real frames round-trip exactly;
the binary variant round-trips exactly for both scalar fields.
"""
from __future__ import annotations

import os

import numpy as np

from .frame import COMPLEX, REAL, Frame

MAGIC = "FRAME"
VERSION = "v1"


class FrameParseError(ValueError):
    """Malformed frame file; messages carry 1-based line numbers."""


def _format_complex(z: complex) -> str:
    re, im = float(z.real), float(z.imag)
    sign = "+" if im >= 0 else "-"
    return f"{re!r}{sign}{abs(im)!r}i"


def _parse_complex(tok: str) -> complex:
    if not tok.endswith("i"):
        raise ValueError(tok)
    return complex(tok[:-1] + "j")


def write_frame(path, frame: Frame, binary: bool = False) -> None:
    """Write ``frame`` to ``path`` in the text (default) or binary format."""
    m, n = frame.rows, frame.cols
    header = f"{MAGIC} {VERSION} {m} {n} {frame.scalar_field}"
    flat = frame.data.flatten(order="F")
    if binary:
        with open(path, "wb") as fh:
            fh.write((header + " binary\n").encode("ascii"))
            if frame.is_complex:
                fh.write(flat.astype("<c16").tobytes())
            else:
                fh.write(flat.astype("<f8").tobytes())
        return
    with open(path, "w", encoding="ascii") as fh:
        fh.write(header + "\n")
        if frame.is_complex:
            cols = (
                " ".join(_format_complex(z) for z in flat[c * m : (c + 1) * m])
                for c in range(n)
            )
        else:
            cols = (
                " ".join(repr(float(x)) for x in flat[c * m : (c + 1) * m])
                for c in range(n)
            )
        fh.write("\n".join(cols))
        fh.write("\n")


def _parse_header(line: str, path) -> tuple[int, int, str, bool]:
    parts = line.split()
    if len(parts) < 5 or parts[0] != MAGIC or parts[1] != VERSION:
        raise FrameParseError(
            f"{path}: line 1: expected header '{MAGIC} {VERSION} <M> <N> <real|complex>'"
        )
    try:
        m, n = int(parts[2]), int(parts[3])
    except ValueError:
        raise FrameParseError(f"{path}: line 1: M and N must be integers") from None
    if m < 1 or n < 1:
        raise FrameParseError(f"{path}: line 1: M and N must be positive")
    field = parts[4]
    if field not in (REAL, COMPLEX):
        raise FrameParseError(f"{path}: line 1: scalar field must be 'real' or 'complex'")
    binary = False
    if len(parts) == 6 and parts[5] == "binary":
        binary = True
    elif len(parts) > 5:
        raise FrameParseError(f"{path}: line 1: unexpected trailing tokens {parts[5:]}")
    return m, n, field, binary


def read_frame(path) -> Frame:
    """Read a frame file written by :func:`write_frame`.

    Column norms are validated but never rescaled, so the data round-trips
    bit-for-bit through the binary format.
    """
    with open(path, "rb") as fh:
        raw = fh.read()
    newline = raw.find(b"\n")
    if newline < 0:
        raise FrameParseError(f"{path}: line 1: missing header line")
    try:
        header = raw[:newline].decode("ascii")
    except UnicodeDecodeError:
        raise FrameParseError(f"{path}: line 1: header is not ASCII") from None
    m, n, field, binary = _parse_header(header, path)
    count = m * n

    if binary:
        body = raw[newline + 1 :]
        dtype = "<c16" if field == COMPLEX else "<f8"
        itemsize = np.dtype(dtype).itemsize
        if len(body) != count * itemsize:
            raise FrameParseError(
                f"{path}: expected {count * itemsize} payload bytes, found {len(body)}"
            )
        flat = np.frombuffer(body, dtype=dtype)
        data = flat.reshape((m, n), order="F")
        try:
            return Frame(data, normalize=False)
        except ValueError as exc:
            raise FrameParseError(f"{path}: {exc}") from None

    try:
        text = raw[newline + 1 :].decode("ascii")
    except UnicodeDecodeError:
        raise FrameParseError(f"{path}: body is not ASCII text") from None
    tokens: list[tuple[int, str]] = []
    for lineno, line in enumerate(text.splitlines(), start=2):
        tokens.extend((lineno, tok) for tok in line.split())
    if len(tokens) != count:
        raise FrameParseError(f"{path}: expected {count} entries, found {len(tokens)}")
    if field == COMPLEX:
        flat = np.empty(count, dtype=np.complex128)
        for idx, (lineno, tok) in enumerate(tokens):
            try:
                flat[idx] = _parse_complex(tok)
            except ValueError:
                raise FrameParseError(
                    f"{path}: line {lineno}: cannot parse complex entry {tok!r}"
                ) from None
    else:
        flat = np.empty(count, dtype=np.float64)
        for idx, (lineno, tok) in enumerate(tokens):
            try:
                flat[idx] = float(tok)
            except ValueError:
                raise FrameParseError(
                    f"{path}: line {lineno}: cannot parse real entry {tok!r}"
                ) from None
    data = flat.reshape((m, n), order="F")
    try:
        return Frame(data, normalize=False)
    except ValueError as exc:
        raise FrameParseError(f"{path}: {exc}") from None


def default_frame_name(stem: str, directory=".") -> str:
    """Collision-free ``<stem>.frame`` path inside ``directory``."""
    base = os.path.join(directory, f"{stem}.frame")
    if not os.path.exists(base):
        return base
    k = 1
    while os.path.exists(os.path.join(directory, f"{stem}.{k}.frame")):
        k += 1
    return os.path.join(directory, f"{stem}.{k}.frame")
