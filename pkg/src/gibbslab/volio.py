"""Bit-exact volume containers and CSV reports.

A volume is stored as two sibling files: ``<base>.json`` (header) and
``<base>.raw`` (little-endian payload, i-fastest layout).  Scalar
volumes store float32, label volumes uint16, masks uint8 of {0, 1};
the header's dtype tag decides which typed object a read reconstructs.
Masks carry no physical frame, so their header records the unit FOV.

CSV reports are UTF-8 with a header row, '.' decimals and 6 significant
digits, and contain no timestamps, so identical inputs give identical
bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import CorruptFileError, UnsupportedFormatError
from .grid import Fov, Grid3, LabelVolume, ScalarVolume
from .morphology import BoolMask

_VERSION = 1
_LAYOUT = "i-fastest"

_DTYPES = {
    "f32": np.dtype("<f4"),
    "u16": np.dtype("<u2"),
    "u8": np.dtype("<u1"),
}

Payload = ScalarVolume | LabelVolume | BoolMask


def _base(path) -> Path:
    p = Path(path)
    if p.suffix in (".json", ".raw"):
        p = p.with_suffix("")
    return p


def _header(dims, fov: Fov, tag: str) -> dict:
    flat_fov = [c for interval in fov.bounds for c in interval]
    return {
        "dims": list(dims),
        "dtype": tag,
        "fov": flat_fov,
        "layout": _LAYOUT,
        "version": _VERSION,
    }


def write_volume(path, payload: Payload) -> None:
    """Write a scalar volume, label volume or mask as .json/.raw files."""
    base = _base(path)
    if isinstance(payload, ScalarVolume):
        tag = "f32"
        header = _header(payload.grid.counts, payload.grid.fov, tag)
        data = payload.values.astype(_DTYPES[tag])
    elif isinstance(payload, LabelVolume):
        tag = "u16"
        top = int(payload.labels.max())
        if top > np.iinfo(np.uint16).max:
            raise OverflowError(f"label {top} does not fit in u16")
        header = _header(payload.grid.counts, payload.grid.fov, tag)
        data = payload.labels.astype(_DTYPES[tag])
    elif isinstance(payload, BoolMask):
        tag = "u8"
        header = _header(payload.dims, Fov.cube(0.0, 1.0), tag)
        data = payload.bits.astype(_DTYPES[tag])
    else:
        raise TypeError(f"cannot serialize {type(payload).__name__}")
    base.parent.mkdir(parents=True, exist_ok=True)
    with open(base.with_suffix(".json"), "w", encoding="utf-8") as fh:
        json.dump(header, fh, sort_keys=True)
        fh.write("\n")
    data.ravel(order="F").tofile(base.with_suffix(".raw"))


def read_volume(path) -> Payload:
    """Read back a container written by :func:`write_volume`."""
    base = _base(path)
    try:
        with open(base.with_suffix(".json"), encoding="utf-8") as fh:
            header = json.load(fh)
    except json.JSONDecodeError as exc:
        raise CorruptFileError(f"{base}.json: invalid JSON ({exc})") from exc
    if header.get("version") != _VERSION:
        raise UnsupportedFormatError(
            f"{base}.json: version {header.get('version')!r} (expected {_VERSION})"
        )
    tag = header.get("dtype")
    if tag not in _DTYPES:
        raise UnsupportedFormatError(f"{base}.json: unknown dtype {tag!r}")
    if header.get("layout") != _LAYOUT:
        raise UnsupportedFormatError(
            f"{base}.json: unknown layout {header.get('layout')!r}"
        )
    dims = tuple(int(n) for n in header["dims"])
    if len(dims) != 3:
        raise CorruptFileError(f"{base}.json: dims must have 3 entries")
    fov_flat = [float(c) for c in header["fov"]]
    if len(fov_flat) != 6:
        raise CorruptFileError(f"{base}.json: fov must have 6 entries")
    raw = np.fromfile(base.with_suffix(".raw"), dtype=_DTYPES[tag])
    expected = dims[0] * dims[1] * dims[2]
    if raw.size != expected:
        raise CorruptFileError(
            f"{base}.raw: {raw.size} values, header promises {expected}"
        )
    arr = raw.reshape(dims, order="F")
    fov = Fov(tuple(zip(fov_flat[0::2], fov_flat[1::2])))
    if tag == "u8":
        if np.any(raw > 1):
            raise CorruptFileError(f"{base}.raw: mask bytes must be 0 or 1")
        return BoolMask(arr.astype(bool))
    grid = Grid3(fov, dims)
    if tag == "f32":
        return ScalarVolume(grid, arr.astype(np.float64))
    return LabelVolume(grid, arr.astype(np.int64))


def format_number(x) -> str:
    """Render a number with 6 significant digits (CSV convention)."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return f"{float(x):.6g}"


def write_csv(path, columns: list[str], rows) -> None:
    """Write a deterministic CSV report with the fixed number format."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    lines = [",".join(columns)]
    for row in rows:
        cells = []
        for cell in row:
            if isinstance(cell, str):
                cells.append(cell)
            else:
                cells.append(format_number(cell))
        lines.append(",".join(cells))
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
