"""Reader for the diracwave grid file format (version 1).

Implemented from the documented format only: a text header (magic line
``diracwave-grid 1``, ``key = value`` lines, blank-line terminator)
followed by row-major little-endian float64 payload with 9 values per
point (four complex spinor components interleaved as Re/Im pairs, then the
density). This package never recomputes physics; the files are the single
source of numerical truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

MAGIC = "diracwave-grid 1"


class GridReadError(Exception):
    """Raised for files that do not follow the documented format."""


@dataclass(frozen=True)
class GridFile:
    axes: tuple[tuple[str, np.ndarray], ...]
    fixed: dict[str, float]
    values: np.ndarray     # (*counts, 4) complex
    density: np.ndarray    # (*counts,) real
    params: dict

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.axes)

    def axis(self, name: str) -> np.ndarray:
        for n, c in self.axes:
            if n == name:
                return c
        raise KeyError(name)

    @property
    def time(self) -> float:
        return float(self.fixed["x0"])

    def same_axes(self, other: "GridFile") -> bool:
        if self.axis_names != other.axis_names:
            return False
        return all(
            a.shape == b.shape and np.array_equal(a, b)
            for (_, a), (_, b) in zip(self.axes, other.axes)
        )


def _parse_param(text: str):
    for caster in (int, float):
        try:
            return caster(text)
        except ValueError:
            continue
    return text


def read_grid_file(path) -> GridFile:
    raw = Path(path).read_bytes()
    sep = raw.find(b"\n\n")
    if sep < 0:
        raise GridReadError(f"{path}: missing blank line after header")
    try:
        lines = raw[:sep].decode("ascii").split("\n")
    except UnicodeDecodeError as exc:
        raise GridReadError(f"{path}: header is not ASCII") from exc
    if lines[0] != MAGIC:
        raise GridReadError(f"{path}: not a diracwave grid (magic {lines[0]!r})")

    entries: dict[str, str] = {}
    for line in lines[1:]:
        if not line.strip():
            continue
        if " = " not in line:
            raise GridReadError(f"{path}: malformed header line {line!r}")
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
                raise GridReadError(f"{path}: axis {name} count mismatch")
            axes.append((name, coords))
    except KeyError as exc:
        raise GridReadError(f"{path}: missing header key {exc}") from exc
    if entries.get("components") != "4c+1r":
        raise GridReadError(f"{path}: unsupported components {entries.get('components')!r}")

    fixed = {k[6:]: float(v) for k, v in entries.items() if k.startswith("fixed_")}
    params = {k[6:]: _parse_param(v) for k, v in entries.items() if k.startswith("param_")}

    counts = tuple(len(c) for _, c in axes)
    npoints = int(np.prod(counts)) if counts else 1
    body = raw[sep + 2:]
    if len(body) != npoints * 9 * 8:
        raise GridReadError(
            f"{path}: payload is {len(body)} bytes, expected {npoints * 9 * 8}"
        )
    payload = np.frombuffer(body, dtype="<f8").reshape(npoints, 9)
    values = np.empty((npoints, 4), dtype=np.complex128)
    values.real = payload[:, 0:8:2]
    values.imag = payload[:, 1:8:2]
    return GridFile(
        axes=tuple(axes),
        fixed=fixed,
        values=values.reshape(counts + (4,)),
        density=payload[:, 8].copy().reshape(counts),
        params=params,
    )


def read_curve_table(path) -> dict[float, np.ndarray]:
    """Parse the fig2 table: tab-separated P, p1, p3 rows, '#' comments.

    Returns {P: (N, 2) array of (p1, p3)} preserving first-seen order.
    """
    rows = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        if not line.strip() or line.startswith("#"):
            continue
        parts = line.split("\t")
        if len(parts) != 3:
            raise GridReadError(f"{path}:{lineno}: expected 3 columns, got {len(parts)}")
        try:
            rows.append(tuple(float(p) for p in parts))
        except ValueError as exc:
            raise GridReadError(f"{path}:{lineno}: {exc}") from None
    curves: dict[float, list] = {}
    for P, p1, p3 in rows:
        curves.setdefault(P, []).append((p1, p3))
    return {P: np.asarray(points) for P, points in curves.items()}
