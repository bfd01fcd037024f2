"""Flat, typed configuration schema for the command-line runner.

Config files are plain text, one ``key = value`` per line, ``#`` comments.
Keys are flat dotted paths; there is no nesting. Momenta are in units of
the mass m, lengths and times in 1/m, with m itself configurable. The full
schema with types, units and defaults is in SCHEMA below (and rendered in
the README). Unknown keys and ill-typed values are rejected with
field-level messages. ``--override key=value`` entries go through the same
validation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import ConfigError, DiracwaveError
from .spectrum import ModeSpec, WavepacketSpec

__all__ = ["RunConfig", "SCHEMA", "load_config", "parse_entries", "config_echo"]


def _parse_float(text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise ConfigError(f"expected a number, got {text!r}") from None


def _parse_int(text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise ConfigError(f"expected an integer, got {text!r}") from None


def _parse_axis(text: str) -> tuple[float, float, int]:
    parts = text.split(":")
    if len(parts) != 3:
        raise ConfigError(f"expected min:max:count, got {text!r}")
    lo, hi = _parse_float(parts[0]), _parse_float(parts[1])
    count = _parse_int(parts[2])
    if count < 2:
        raise ConfigError(f"axis needs at least 2 points, got {count}")
    if hi <= lo:
        raise ConfigError(f"axis bounds must increase, got {text!r}")
    return lo, hi, count


def _parse_float_list(text: str) -> tuple[float, ...]:
    items = [p for p in text.split(",") if p.strip()]
    return tuple(_parse_float(p.strip()) for p in items)


def _parse_modes(text: str) -> tuple[ModeSpec, ...]:
    modes = []
    for chunk in text.split(";"):
        chunk = chunk.strip()
        if not chunk:
            continue
        parts = [p.strip() for p in chunk.split(",")]
        if len(parts) not in (3, 4):
            raise ConfigError(
                f"mode must be n,ell,Re[,Im], got {chunk!r}"
            )
        n = _parse_int(parts[0])
        ell = _parse_int(parts[1])
        re = _parse_float(parts[2])
        im = _parse_float(parts[3]) if len(parts) == 4 else 0.0
        modes.append(ModeSpec(n=n, ell=ell, amplitude_weight=complex(re, im)))
    if not modes:
        raise ConfigError("at least one mode is required")
    return tuple(modes)


def _parse_str(text: str) -> str:
    return text.strip()


def _parse_branch(text: str) -> int:
    value = _parse_int(text)
    if value not in (+1, -1):
        raise ConfigError(f"branch must be +1 or -1, got {value}")
    return value


# key -> (parser, default, "description [unit]"); default None marks
# optional keys that stay absent unless set
SCHEMA = {
    "mass": (_parse_float, 1.0, "particle mass m; sets the unit system"),
    "group_velocity": (_parse_float, 2.0, "envelope velocity v_a (|v_a| != 1) [c]"),
    "central_momentum": (_parse_float, 2.0, "longitudinal momentum P_bar [m]"),
    "momentum_width": (_parse_float, 0.1, "transverse momentum spread w [m]"),
    "envelope_length": (_parse_float, 1400.0, "longitudinal envelope length delta_zeta [1/m]"),
    "envelope_exponent": (_parse_int, 8, "super-Gaussian exponent k (even, >= 2)"),
    "modes": (_parse_modes, (ModeSpec(0, 0),), "transverse modes, 'n,ell,Re[,Im];...'"),
    "quad.n_perp": (_parse_int, 48, "transverse quadrature nodes per axis"),
    "quad.n_pvals": (_parse_int, 128, "longitudinal offset nodes"),
    "quad.deltaP_halfwidth": (_parse_float, None, "offset coverage [m]; default 80/delta_zeta"),
    "quad.envelope_samples": (_parse_int, 1024, "envelope FFT length (power of two >= 256)"),
    "quad.transverse_rule": (_parse_str, "gauss-hermite", "'gauss-hermite' or 'trapezoid'"),
    "eval.method": (_parse_str, "paraxial", "'paraxial', 'quadrature', or 'propagation'"),
    "grid.x1": (_parse_axis, (-40.0, 40.0, 129), "x1 axis min:max:count [1/m]"),
    "grid.x2": (_parse_axis, None, "optional x2 axis min:max:count [1/m]"),
    "grid.x3": (_parse_axis, (-800.0, 1400.0, 1024), "x3 axis min:max:count [1/m]"),
    "grid.times": (_parse_float_list, (0.0,), "x0 sample times [1/m]"),
    "prop.time": (_parse_float, 100.0, "propagation time [1/m]"),
    "prop.n_perp": (_parse_int, 64, "box samples per transverse axis"),
    "prop.n_long": (_parse_int, 2048, "box samples along x3"),
    "prop.transverse_lengths": (_parse_float, 40.0, "box width [1/w]"),
    "prop.longitudinal_lengths": (_parse_float, 6.0, "box length [delta_zeta]"),
    "prop.center": (_parse_float, 0.0, "box center along x3 [1/m]"),
    "fig2.P_values": (_parse_float_list, (1.5, 2.0, 2.5), "vertex momenta [m]"),
    "fig2.kappa_values": (_parse_float_list, None, "phase constants kappa [m]; needs fig2.branch"),
    "fig2.branch": (_parse_branch, None, "+1 or -1 root for kappa-parameterized curves"),
    "fig2.pperp_max": (_parse_float, 0.5, "largest |p1| sampled [m]"),
    "fig2.samples": (_parse_int, 101, "number of p1 samples per curve"),
    "out.dir": (_parse_str, "out", "output directory"),
    "seed": (_parse_int, 0, "seed echoed into outputs (no randomness in the pipeline)"),
    "threads": (_parse_int, 0, "BLAS/FFT thread cap; 0 leaves the environment alone"),
}


@dataclass
class RunConfig:
    """Validated configuration with the wavepacket spec materialized."""

    values: dict
    wavepacket: WavepacketSpec = field(init=False)

    def __post_init__(self) -> None:
        try:
            self.wavepacket = WavepacketSpec(
                m=self.values["mass"],
                v_a=self.values["group_velocity"],
                P_bar=self.values["central_momentum"],
                w=self.values["momentum_width"],
                delta_zeta=self.values["envelope_length"],
                envelope_exponent=self.values["envelope_exponent"],
                modes=self.values["modes"],
            )
        except DiracwaveError as exc:
            raise ConfigError(f"invalid wavepacket parameters: {exc}") from exc
        method = self.values["eval.method"]
        if method not in ("paraxial", "quadrature", "propagation"):
            raise ConfigError(
                f"eval.method must be paraxial, quadrature or propagation, got {method!r}"
            )
        rule = self.values["quad.transverse_rule"]
        if rule not in ("gauss-hermite", "trapezoid"):
            raise ConfigError(
                f"quad.transverse_rule must be gauss-hermite or trapezoid, got {rule!r}"
            )
        if not self.values["grid.times"]:
            raise ConfigError("grid.times must list at least one time")

    def __getitem__(self, key: str):
        return self.values[key]

    def axis(self, key: str) -> np.ndarray | None:
        spec = self.values.get(key)
        if spec is None:
            return None
        lo, hi, count = spec
        return np.linspace(lo, hi, count)

    @property
    def out_dir(self) -> Path:
        return Path(self.values["out.dir"])


def parse_entries(entries: dict[str, str], base: dict | None = None) -> RunConfig:
    """Validate raw string entries against the schema."""
    values = dict(base) if base else {
        key: default for key, (_, default, _) in SCHEMA.items() if default is not None
    }
    for key, text in entries.items():
        if key not in SCHEMA:
            raise ConfigError(f"unknown config key {key!r}")
        parser, default, _ = SCHEMA[key]
        if text.strip() == "" and default is None:
            values.pop(key, None)  # empty value leaves an optional key unset
            continue
        try:
            values[key] = parser(text)
        except ConfigError as exc:
            raise ConfigError(f"key {key!r}: {exc}") from None
    return RunConfig(values=values)


def load_config(path, overrides: dict[str, str] | None = None) -> RunConfig:
    """Read a config file and apply command-line overrides on top."""
    entries: dict[str, str] = {}
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.split("#", 1)[0].strip()
        if not stripped:
            continue
        if "=" not in stripped:
            raise ConfigError(f"{path}:{lineno}: expected key = value, got {line!r}")
        key, value = stripped.split("=", 1)
        entries[key.strip()] = value.strip()
    if overrides:
        entries.update(overrides)
    return parse_entries(entries)


def config_echo(config: RunConfig) -> dict:
    """Flat parameter echo for output headers: inputs plus derived quantities."""
    spec = config.wavepacket
    carrier = spec.carrier
    echo = {
        "mass": spec.m,
        "group_velocity": spec.v_a,
        "central_momentum": spec.P_bar,
        "momentum_width": spec.w,
        "delta_zeta": spec.delta_zeta,
        "envelope_exponent": spec.envelope_exponent,
        "modes": ";".join(
            f"{m.n},{m.ell},{m.amplitude_weight.real},{m.amplitude_weight.imag}"
            for m in spec.modes
        ),
        "kappa": carrier.kappa,
        "beta_p": carrier.beta_p,
        "carrier_energy": carrier.E,
        "xi0": spec.xi0,
        "v_n": spec.v_n,
        "carrier_p3": spec.P_bar,
        "seed": config["seed"],
    }
    return echo
