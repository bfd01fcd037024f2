"""Multi-panel space density heatmaps with reference velocity lines.

One panel per input grid (one time slice each), sharing a single color
scale. For each requested reference velocity v, a vertical line marks
x3 = v * x0 in every panel: a signal launched from the origin at that
speed would have reached the line.

Usage:
    fig-density --input a.dwg b.dwg c.dwg --output fig.png \
                [--velocities 2,1,0.9] [--cmap inferno]
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reader import GridReadError, read_grid_file

# line style per reference velocity, in order: (color, linestyle, marker)
_STYLES = [
    ("gold", ":", "o"),
    ("white", "-", "s"),
    ("deepskyblue", "--", "D"),
    ("violet", "-.", "^"),
]


def render(input_paths, velocities=(2.0, 1.0, 0.9), cmap="inferno"):
    """Build the figure; returns (figure, axes list)."""
    grids = [read_grid_file(p) for p in input_paths]
    for g in grids:
        if g.axis_names != ("x3", "x1"):
            raise GridReadError(
                f"density panels need (x3, x1) slices, got axes {g.axis_names}"
            )
    grids.sort(key=lambda g: g.time)
    vmax = max(float(g.density.max()) for g in grids)

    fig, axes = plt.subplots(
        len(grids), 1, figsize=(8.0, 2.2 * len(grids)),
        sharex=True, constrained_layout=True, squeeze=False,
    )
    axes = axes[:, 0]
    for ax, grid in zip(axes, grids):
        x3 = grid.axis("x3")
        x1 = grid.axis("x1")
        im = ax.imshow(
            grid.density.T,
            origin="lower",
            aspect="auto",
            extent=(x3[0], x3[-1], x1[0], x1[-1]),
            vmin=0.0,
            vmax=vmax,
            cmap=cmap,
        )
        for v, (color, style, marker) in zip(velocities, _STYLES):
            x_line = v * grid.time
            if x3[0] <= x_line <= x3[-1]:
                ax.axvline(x_line, color=color, linestyle=style, linewidth=1.4)
                ax.plot([x_line], [x1[-1]], marker=marker, color=color,
                        markersize=5, clip_on=False)
        ax.set_ylabel(r"$x_1$  [1/m]")
        ax.text(0.02, 0.92, rf"$x_0 = {grid.time:g}$ /m", color="white",
                transform=ax.transAxes, va="top")
    axes[-1].set_xlabel(r"$x_3$  [1/m]")
    cbar = fig.colorbar(im, ax=axes, shrink=0.9)
    cbar.set_label(r"$\psi^\dagger \psi$")
    return fig, list(axes)


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", nargs="+", required=True, help="grid files (.dwg)")
    parser.add_argument("--output", required=True, help="output image path")
    parser.add_argument("--velocities", default="2,1,0.9",
                        help="comma-separated reference velocities")
    parser.add_argument("--cmap", default="inferno")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        velocities = tuple(float(v) for v in args.velocities.split(",") if v.strip())
        fig, _ = render(args.input, velocities=velocities, cmap=args.cmap)
        fig.savefig(args.output, dpi=args.dpi)
        plt.close(fig)
    except (GridReadError, OSError, ValueError) as exc:
        print(f"fig-density: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
