"""Field-grid file format: text header, then raw little-endian float64.

Layout (documented here and in the README; readers need no side channel):

  * line 1: the magic string ``diracwave-grid 1`` (format version 1),
  * ``key = value`` lines: axis names/counts/coordinates, fixed
    coordinates, component count, and a parameter echo (``param_*``),
  * one blank line,
  * binary payload: row-major over the axes in header order, 9 float64 per
    point, component-interleaved:
    Re c0, Im c0, Re c1, Im c1, Re c2, Im c2, Re c3, Im c3, density.

Floats in the header are written with ``repr`` so they round-trip exactly;
the payload is written verbatim, so write-then-read is bit-exact.
"""

from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .errors import GridFormatError
from .grids import FieldGrid

__all__ = ["write_grid", "read_grid", "MAGIC"]

MAGIC = "diracwave-grid 1"

_LAYOUT = ("row-major little-endian float64 interleaved "
           "Re(c0) Im(c0) Re(c1) Im(c1) Re(c2) Im(c2) Re(c3) Im(c3) density")


def _format_value(value) -> str:
    if isinstance(value, (bool, int, str)):
        return str(value)
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, np.floating):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return str(value)


def _parse_value(text: str):
    for caster in (int, float):
        try:
            return caster(text)
        except ValueError:
            continue
    return text


def write_grid(grid: FieldGrid, path) -> None:
    """Serialize a grid; identical grids produce identical bytes."""
    header = io.StringIO()
    header.write(MAGIC + "\n")
    header.write(f"axis_count = {len(grid.axes)}\n")
    for i, (name, coords) in enumerate(grid.axes):
        header.write(f"axis_{i}_name = {name}\n")
        header.write(f"axis_{i}_count = {len(coords)}\n")
        header.write(f"axis_{i}_coords = {','.join(repr(float(c)) for c in coords)}\n")
    for name in sorted(grid.fixed):
        header.write(f"fixed_{name} = {repr(float(grid.fixed[name]))}\n")
    header.write("components = 4c+1r\n")
    header.write(f"layout = {_LAYOUT}\n")
    for key in sorted(grid.params):
        header.write(f"param_{key} = {_format_value(grid.params[key])}\n")
    header.write("\n")

    npoints = int(np.prod(grid.density.shape)) if grid.density.ndim else 1
    payload = np.empty((npoints, 9), dtype="<f8")
    flat_values = grid.values.reshape(npoints, 4)
    payload[:, 0:8:2] = flat_values.real
    payload[:, 1:8:2] = flat_values.imag
    payload[:, 8] = grid.density.reshape(npoints)

    with open(path, "wb") as fh:
        fh.write(header.getvalue().encode("ascii"))
        fh.write(payload.tobytes())


def read_grid(path) -> FieldGrid:
    """Parse a grid file written by :func:`write_grid`."""
    raw = Path(path).read_bytes()
    sep = raw.find(b"\n\n")
    if sep < 0:
        raise GridFormatError(f"{path}: missing blank line after header")
    try:
        header_text = raw[:sep].decode("ascii")
    except UnicodeDecodeError as exc:
        raise GridFormatError(f"{path}: header is not ASCII") from exc
    lines = header_text.split("\n")
    if lines[0] != MAGIC:
        raise GridFormatError(f"{path}: bad magic line {lines[0]!r}")

    entries: dict[str, str] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        if " = " not in line:
            raise GridFormatError(f"{path}: malformed header line {line!r}")
        key, value = line.split(" = ", 1)
        entries[key.strip()] = value

    try:
        axis_count = int(entries["axis_count"])
        axes = []
        for i in range(axis_count):
            name = entries[f"axis_{i}_name"]
            count = int(entries[f"axis_{i}_count"])
            coords = np.array([float(c) for c in entries[f"axis_{i}_coords"].split(",")])
            if coords.size != count:
                raise GridFormatError(
                    f"{path}: axis {name} declares {count} points, has {coords.size}"
                )
            axes.append((name, coords))
    except KeyError as exc:
        raise GridFormatError(f"{path}: missing header key {exc}") from exc

    if entries.get("components") != "4c+1r":
        raise GridFormatError(f"{path}: unsupported components {entries.get('components')!r}")

    fixed = {k[len("fixed_"):]: float(v) for k, v in entries.items() if k.startswith("fixed_")}
    params = {k[len("param_"):]: _parse_value(v) for k, v in entries.items()
              if k.startswith("param_")}

    counts = tuple(len(c) for _, c in axes)
    npoints = 1
    for c in counts:
        npoints *= c
    body = raw[sep + 2:]
    expected = npoints * 9 * 8
    if len(body) != expected:
        raise GridFormatError(
            f"{path}: payload has {len(body)} bytes, expected {expected}"
        )
    payload = np.frombuffer(body, dtype="<f8").reshape(npoints, 9)
    values = np.empty((npoints, 4), dtype=np.complex128)
    values.real = payload[:, 0:8:2]
    values.imag = payload[:, 1:8:2]
    density = payload[:, 8].copy().reshape(counts)
    return FieldGrid(
        axes=tuple(axes), fixed=fixed,
        values=values.reshape(counts + (4,)),
        density=density, params=params,
    )
