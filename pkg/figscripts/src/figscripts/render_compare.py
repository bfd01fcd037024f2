"""Signed relative-error heatmap between two grids on identical axes.

Plots (density_a - density_b) / max(density_b) with a diverging colormap
centered on zero; used to compare evaluator outputs.

Usage:
    fig-compare --input a.dwg b.dwg --output fig.png
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

from .reader import GridReadError, read_grid_file


def render(path_a, path_b, cmap="RdBu_r"):
    a = read_grid_file(path_a)
    b = read_grid_file(path_b)
    if not a.same_axes(b):
        raise GridReadError(f"{path_a} and {path_b} have mismatched axes")
    if a.axis_names != ("x3", "x1"):
        raise GridReadError(f"compare maps need (x3, x1) slices, got {a.axis_names}")
    error = (a.density - b.density) / float(b.density.max())
    span = float(np.max(np.abs(error)))
    x3 = a.axis("x3")
    x1 = a.axis("x1")
    fig, ax = plt.subplots(figsize=(7.0, 3.2), constrained_layout=True)
    im = ax.imshow(
        error.T, origin="lower", aspect="auto",
        extent=(x3[0], x3[-1], x1[0], x1[-1]),
        vmin=-span, vmax=span, cmap=cmap,
    )
    ax.set_xlabel(r"$x_3$  [1/m]")
    ax.set_ylabel(r"$x_1$  [1/m]")
    cbar = fig.colorbar(im, ax=ax)
    cbar.set_label("signed relative error")
    return fig, ax


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", nargs=2, required=True,
                        metavar=("A", "B"), help="two grid files on the same axes")
    parser.add_argument("--output", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        fig, _ = render(args.input[0], args.input[1])
        fig.savefig(args.output, dpi=args.dpi)
        plt.close(fig)
    except (GridReadError, OSError) as exc:
        print(f"fig-compare: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
