"""Config-driven command line: build spectra, evaluate fields, diagnose.

Subcommands: build, evaluate, diagnose, fig2, compare. Exit codes: 0 on
success, 2 for configuration errors, 3 for numerical/support errors, 4 for
I/O errors. All outputs are deterministic for a fixed config and seed.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

import numpy as np

from . import correlation as cor
from . import diagnostics as diag
from .config import RunConfig, config_echo, load_config
from .errors import (
    ConfigError,
    DiracwaveError,
    GridFormatError,
)
from .evaluators import ParaxialEvaluator, QuadratureEvaluator
from .grids import evaluate_grid
from .gridio import read_grid, write_grid
from .propagation import default_box_axes, initial_box_grid, propagate_spectral
from .spectrum import build_node_set

__all__ = ["main"]


def _write_report(path: Path, entries: dict) -> None:
    lines = [f"{key} = {value!r}" if isinstance(value, str) else f"{key} = {value}"
             for key, value in entries.items()]
    path.write_text("\n".join(lines) + "\n")


def _set_threads(n: int) -> None:
    if n > 0:
        for var in ("OMP_NUM_THREADS", "OPENBLAS_NUM_THREADS", "MKL_NUM_THREADS"):
            os.environ[var] = str(n)


def _build_nodes(config: RunConfig):
    spec = config.wavepacket
    return build_node_set(
        spec,
        n_perp=config["quad.n_perp"],
        n_P=config["quad.n_pvals"],
        deltaP_halfwidth=config.values.get("quad.deltaP_halfwidth"),
        envelope_samples=config["quad.envelope_samples"],
        transverse_rule=config["quad.transverse_rule"],
    )


def _slice_axes(config: RunConfig):
    axes = [("x3", config.axis("grid.x3")), ("x1", config.axis("grid.x1"))]
    x2 = config.axis("grid.x2")
    fixed = {"x2": 0.0}
    if x2 is not None:
        axes.append(("x2", x2))
        fixed = {}
    return axes, fixed


def cmd_build(config: RunConfig) -> int:
    spec = config.wavepacket
    nodes = _build_nodes(config)
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    nodes.save(out / "nodes.npz")
    report = dict(config_echo(config))
    report.update(
        n_nodes=nodes.n_nodes,
        discarded_weight=nodes.metadata["discarded_weight"],
        envelope_truncation=nodes.metadata["envelope_truncation"],
        deltaP_cut=nodes.metadata["deltaP_cut"],
        support_radius=cor.support_radius(spec.curve),
        total_weight=nodes.total_weight(),
    )
    report.update({f"expectation_{k}": v for k, v in diag.expectation_report(nodes).items()})
    _write_report(out / "build_summary.txt", report)
    print(f"built {nodes.n_nodes} nodes -> {out / 'nodes.npz'}")
    print(f"summary -> {out / 'build_summary.txt'}")
    return 0


def _evaluator_for(config: RunConfig, method: str):
    if method == "paraxial":
        return ParaxialEvaluator(config.wavepacket)
    if method == "quadrature":
        return QuadratureEvaluator(_build_nodes(config))
    raise ConfigError(f"no point evaluator for method {method!r}")


def cmd_evaluate(config: RunConfig) -> int:
    spec = config.wavepacket
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    method = config["eval.method"]
    echo = config_echo(config)
    echo["method"] = method
    written = []

    if method == "propagation":
        evaluator = ParaxialEvaluator(spec)
        axes = default_box_axes(
            spec,
            n_perp=config["prop.n_perp"],
            n_long=config["prop.n_long"],
            transverse_lengths=config["prop.transverse_lengths"],
            longitudinal_lengths=config["prop.longitudinal_lengths"],
            center=config["prop.center"],
        )
        t0 = config["grid.times"][0]
        grid = initial_box_grid(evaluator, spec, axes=axes, x0=t0, params=echo)
        path = out / "field_propagation_000.dwg"
        write_grid(grid, path)
        written.append(path)
        evolved = propagate_spectral(grid, config["prop.time"])
        path = out / "field_propagation_001.dwg"
        write_grid(evolved, path)
        written.append(path)
    else:
        evaluator = _evaluator_for(config, method)
        axes, fixed = _slice_axes(config)
        for index, t in enumerate(config["grid.times"]):
            grid = evaluate_grid(evaluator, axes, fixed={**fixed, "x0": float(t)},
                                 params=echo)
            path = out / f"field_{method}_{index:03d}.dwg"
            write_grid(grid, path)
            written.append(path)

    for path in written:
        print(f"wrote {path}")
    return 0


def cmd_compare(config: RunConfig) -> int:
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    axes, fixed = _slice_axes(config)
    t = float(config["grid.times"][0])
    echo = config_echo(config)
    grids = {}
    for method in ("paraxial", "quadrature"):
        evaluator = _evaluator_for(config, method)
        grids[method] = evaluate_grid(
            evaluator, axes, fixed={**fixed, "x0": t},
            params={**echo, "method": method},
        )
        path = out / f"field_{method}_compare.dwg"
        write_grid(grids[method], path)
        print(f"wrote {path}")
    diff = np.linalg.norm(grids["paraxial"].values - grids["quadrature"].values)
    ref = np.linalg.norm(grids["quadrature"].values)
    report = dict(echo)
    report.update(time=t, relative_l2_difference=diff / ref)
    _write_report(out / "compare_report.txt", report)
    print(f"relative L2 difference: {diff / ref:.6e}")
    print(f"report -> {out / 'compare_report.txt'}")
    return 0


def cmd_diagnose(config: RunConfig, grid_paths: list[str]) -> int:
    if not grid_paths:
        raise ConfigError("diagnose needs at least one grid file")
    grids = [read_grid(p) for p in grid_paths]
    first = grids[0]
    for g in grids[1:]:
        if not first.same_axes(g):
            raise DiracwaveError("grids have mismatched axes") from None
    grids.sort(key=lambda g: g.time)

    spec = config.wavepacket
    report = dict(config_echo(config))
    for i, g in enumerate(grids):
        report[f"norm_{i}"] = diag.density_norm(g)
        report[f"time_{i}"] = g.time

    if len(grids) >= 5:
        trajectory = diag.fit_peak_velocity(grids)
        report["peak_velocity"] = trajectory.fitted_velocity
        report["peak_fit_residual"] = trajectory.fit_residual
        for i, pos in enumerate(trajectory.positions):
            report[f"peak_position_{i}"] = float(pos)
    else:
        report["peak_velocity"] = "unavailable (need >= 5 time samples)"

    for i in range(len(grids)):
        for j in range(i + 1, len(grids)):
            sim = diag.profile_similarity(grids[i], grids[j], spec.v_a)
            report[f"correlation_{i}_{j}"] = sim.correlation

    nodes = _build_nodes(config)
    report.update({f"expectation_{k}": v for k, v in diag.expectation_report(nodes).items()})

    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    _write_report(out / "diagnostics_report.txt", report)
    print(f"report -> {out / 'diagnostics_report.txt'}")
    return 0


def cmd_fig2(config: RunConfig) -> int:
    spec = config.wavepacket
    out = config.out_dir
    out.mkdir(parents=True, exist_ok=True)
    samples = np.linspace(-config["fig2.pperp_max"], config["fig2.pperp_max"],
                          config["fig2.samples"])

    curves = []
    p_values = config["fig2.P_values"]
    kappas = config.values.get("fig2.kappa_values")
    if kappas is not None:
        branch = config.values.get("fig2.branch")
        if branch is None:
            raise ConfigError("fig2.kappa_values needs an explicit fig2.branch (+1 or -1)")
        vel = cor.GroupVelocitySpec(spec.v_a)
        for kappa in kappas:
            P = cor.P_from_kappa(kappa, spec.v_a, spec.m, branch=branch)
            curves.append((P, cor.CorrelationCurve.from_P(P, spec.v_a, spec.m)))
    else:
        for P in p_values:
            if P == 0.0:
                raise ConfigError(
                    "P = 0 has no carrier parameterization; use fig2.kappa_values "
                    "with an explicit fig2.branch"
                )
            curves.append((P, cor.CorrelationCurve.from_P(P, spec.v_a, spec.m)))

    dropped_total = 0
    rows = []
    import warnings as _warnings
    for P, curve in curves:
        with _warnings.catch_warnings():
            _warnings.simplefilter("ignore")
            points, dropped = cor.projection_curve(curve, samples)
        dropped_total += dropped
        for p1, p3 in points:
            rows.append((P, p1, p3))

    path = out / "momentum_curves.tsv"
    with open(path, "w") as fh:
        fh.write("# columns: P\tp1\tp3  (momenta in units of m)\n")
        fh.write(f"# group_velocity = {spec.v_a}\n# mass = {spec.m}\n")
        fh.write(f"# dropped_out_of_support = {dropped_total}\n")
        for P, p1, p3 in rows:
            fh.write(f"{float(P)!r}\t{float(p1)!r}\t{float(p3)!r}\n")
    print(f"wrote {len(rows)} rows ({dropped_total} dropped) -> {path}")
    return 0


def _parse_overrides(items: list[str]) -> dict[str, str]:
    overrides = {}
    for item in items:
        if "=" not in item:
            raise ConfigError(f"--override needs key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="diracwave",
        description="Dirac wavepackets with tunable peak velocity: build "
                    "spectra, evaluate fields, run diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)
    for name, needs_grids in [("build", False), ("evaluate", False),
                              ("diagnose", True), ("fig2", False), ("compare", False)]:
        p = sub.add_parser(name)
        p.add_argument("--config", required=True, help="path to the config file")
        p.add_argument("--out", default=None, help="output directory (overrides out.dir)")
        p.add_argument("--override", action="append", default=[],
                       metavar="KEY=VALUE", help="config override, repeatable")
        p.add_argument("--threads", type=int, default=None, help="BLAS/FFT thread cap")
        p.add_argument("--seed", type=int, default=None, help="seed echoed into outputs")
        if needs_grids:
            p.add_argument("grids", nargs="*", help="grid files to diagnose")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        overrides = _parse_overrides(list(args.override))
        if args.out is not None:
            overrides["out.dir"] = args.out
        if args.threads is not None:
            overrides["threads"] = str(args.threads)
        if args.seed is not None:
            overrides["seed"] = str(args.seed)
        config = load_config(args.config, overrides)
        _set_threads(config["threads"])
        if args.command == "build":
            return cmd_build(config)
        if args.command == "evaluate":
            return cmd_evaluate(config)
        if args.command == "diagnose":
            return cmd_diagnose(config, args.grids)
        if args.command == "fig2":
            return cmd_fig2(config)
        if args.command == "compare":
            return cmd_compare(config)
        raise ConfigError(f"unknown command {args.command!r}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 2
    except GridFormatError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4
    except DiracwaveError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    raise SystemExit(main())
