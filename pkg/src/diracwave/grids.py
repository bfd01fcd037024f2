"""Rectilinear space-time field grids.

A FieldGrid stores 4-component complex spinor samples over a tensor grid of
any subset of (x0, x1, x2, x3), with the remaining coordinates held fixed.
Values have the component axis last; density is the pointwise adjoint
product. Grids are immutable once built and safe to share across threads.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GridCompatibilityError, InvalidParameterError

__all__ = ["FieldGrid", "evaluate_grid", "axis_from_bounds"]

AXIS_NAMES = ("x0", "x1", "x2", "x3")


def axis_from_bounds(lo: float, hi: float, count: int, periodic: bool = False) -> np.ndarray:
    """Uniform axis coordinates; periodic grids exclude the right endpoint."""
    if count < 1:
        raise InvalidParameterError(f"axis count must be >= 1, got {count}")
    if hi <= lo:
        raise InvalidParameterError(f"axis bounds must increase, got [{lo}, {hi}]")
    if periodic:
        return lo + (hi - lo) * np.arange(count) / count
    return np.linspace(lo, hi, count)


@dataclass(frozen=True)
class FieldGrid:
    """Spinor samples plus derived density on a rectilinear grid.

    ``axes`` is an ordered tuple of (name, coordinates); ``fixed`` maps the
    remaining coordinate names to scalars. ``values`` has shape
    (*axis counts, 4); ``density`` is sum_c |values_c|^2. ``params`` echoes
    the physical parameters the grid was produced from.
    """

    axes: tuple[tuple[str, np.ndarray], ...]
    fixed: dict[str, float]
    values: np.ndarray
    density: np.ndarray = field(default=None)
    params: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        counts = tuple(len(c) for _, c in self.axes)
        if self.values.shape != counts + (4,):
            raise InvalidParameterError(
                f"values shape {self.values.shape} does not match axes {counts} + (4,)"
            )
        names = [n for n, _ in self.axes]
        if len(set(names)) != len(names):
            raise InvalidParameterError(f"duplicate axis names: {names}")
        for n in names:
            if n not in AXIS_NAMES:
                raise InvalidParameterError(f"unknown axis name {n!r}")
        if self.density is None:
            dens = np.sum(np.abs(self.values) ** 2, axis=-1)
            object.__setattr__(self, "density", dens)

    @property
    def axis_names(self) -> tuple[str, ...]:
        return tuple(n for n, _ in self.axes)

    def axis(self, name: str) -> np.ndarray:
        for n, c in self.axes:
            if n == name:
                return c
        raise KeyError(name)

    def coordinate(self, name: str):
        """Fixed scalar for off-grid coordinates (e.g. the time of a slice)."""
        if name in self.fixed:
            return self.fixed[name]
        raise KeyError(name)

    @property
    def time(self) -> float:
        if "x0" in self.fixed:
            return float(self.fixed["x0"])
        raise GridCompatibilityError("grid has x0 as an axis, not a fixed time")

    def cell_volume(self) -> float:
        vol = 1.0
        for _, c in self.axes:
            if len(c) < 2:
                raise InvalidParameterError("cell volume undefined for single-point axis")
            vol *= float(c[1] - c[0])
        return vol

    def on_axis_line(self, along: str = "x3") -> tuple[np.ndarray, np.ndarray]:
        """Density profile along one axis with every other axis at coordinate 0.

        Raises when another axis does not contain the coordinate 0.
        """
        index: list = []
        for n, c in self.axes:
            if n == along:
                index.append(slice(None))
                continue
            i = int(np.argmin(np.abs(c)))
            if abs(c[i]) > 1e-9 * max(1.0, float(np.max(np.abs(c)))):
                raise GridCompatibilityError(f"axis {n} does not pass through 0")
            index.append(i)
        return self.axis(along), self.density[tuple(index)]

    def same_axes(self, other: "FieldGrid") -> bool:
        if self.axis_names != other.axis_names:
            return False
        return all(
            a.shape == b.shape and np.allclose(a, b, rtol=0, atol=1e-12)
            for (_, a), (_, b) in zip(self.axes, other.axes)
        )


def evaluate_grid(evaluator, axes, fixed: dict, params: dict | None = None,
                  slab: int = 256) -> FieldGrid:
    """Fill a FieldGrid by calling ``evaluator.evaluate`` over a tensor mesh.

    ``axes`` is a sequence of (name, coords). The last axis is processed in
    slabs to bound peak memory; points are independent, so the split does
    not change any value.
    """
    axes = tuple((n, np.asarray(c, dtype=np.float64)) for n, c in axes)
    counts = tuple(len(c) for _, c in axes)
    coords_by_name = dict(axes)
    missing = [n for n in AXIS_NAMES if n not in coords_by_name and n not in fixed]
    if missing:
        raise InvalidParameterError(f"coordinates neither on axes nor fixed: {missing}")

    values = np.empty(counts + (4,), dtype=np.complex128)
    last_name = axes[-1][0]
    last_coords = axes[-1][1]

    def mesh_arg(name: str, last_slice: np.ndarray):
        if name in fixed and name not in coords_by_name:
            return float(fixed[name])
        pos = [i for i, (n, _) in enumerate(axes) if n == name][0]
        c = last_slice if name == last_name else coords_by_name[name]
        shape = [1] * len(axes)
        shape[pos] = len(c)
        return c.reshape(shape)

    for start in range(0, len(last_coords), slab):
        stop = min(start + slab, len(last_coords))
        chunk = last_coords[start:stop]
        args = {n: mesh_arg(n, chunk) for n in AXIS_NAMES}
        block = evaluator.evaluate(args["x0"], args["x1"], args["x2"], args["x3"])
        values[..., start:stop, :] = np.broadcast_to(
            block, counts[:-1] + (stop - start, 4)
        )
    return FieldGrid(axes=axes, fixed=dict(fixed), values=values, params=dict(params or {}))
