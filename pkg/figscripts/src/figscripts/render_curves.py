"""Momentum correlation curves: the p3(p1) family from a fig2 table.

Each curve is one vertex momentum P; its apex sits on the p1 = 0 axis at
p3 = P.

Usage:
    fig-curves --input momentum_curves.tsv --output fig.png
"""

from __future__ import annotations

import argparse
import sys

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

from .reader import GridReadError, read_curve_table


def render(input_path, cmap="viridis"):
    curves = read_curve_table(input_path)
    if not curves:
        raise GridReadError(f"{input_path}: no curve rows")
    fig, ax = plt.subplots(figsize=(5.5, 4.2), constrained_layout=True)
    colors = plt.get_cmap(cmap)
    n = max(len(curves) - 1, 1)
    for i, (P, points) in enumerate(sorted(curves.items())):
        order = points[:, 0].argsort()
        ax.plot(points[order, 0], points[order, 1],
                color=colors(i / n), label=rf"$\mathcal{{P}} = {P:g}$")
        ax.plot([0.0], [P], marker="o", color=colors(i / n), markersize=4)
    ax.set_xlabel(r"$p_1$  [m]")
    ax.set_ylabel(r"$p_3$  [m]")
    ax.legend(fontsize=8)
    return fig, ax


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--input", required=True, help="curve table (.tsv)")
    parser.add_argument("--output", required=True, help="output image path")
    parser.add_argument("--dpi", type=int, default=150)
    args = parser.parse_args(argv)
    try:
        fig, _ = render(args.input)
        fig.savefig(args.output, dpi=args.dpi)
        plt.close(fig)
    except (GridReadError, OSError) as exc:
        print(f"fig-curves: {exc}", file=sys.stderr)
        return 1
    print(f"wrote {args.output}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
