"""Spectral description of a wavepacket.

A wavepacket is specified by its mass, envelope velocity v_a, central
longitudinal momentum P_bar, transverse momentum spread w, longitudinal
envelope length delta_zeta, and a list of Laguerre-Gaussian transverse
modes. This module turns that description into a discrete, normalized set
of on-shell plane-wave nodes:

  * transverse (p1, p2) nodes from Gauss-Hermite quadrature matched to the
    exp(-rho^2/2) mode envelope (plain trapezoid tensor grid available as a
    validation fallback),
  * uniform longitudinal offset nodes weighted by the Fourier transform of
    the target super-Gaussian profile exp[-(zeta/delta_zeta)^k],
  * per node: the correlated longitudinal momentum p_c, the on-shell energy
    via the hyperplane closure E = v_a (p_c - P) + E_P, and the complex
    amplitude (mode x envelope x the sqrt((E+m)/2E) spinor prefactor).

Node sets are immutable and safe to share across threads.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import eval_genlaguerre

from . import correlation as cor
from .errors import (
    AliasingError,
    DegenerateSpectrumError,
    InvalidParameterError,
)

__all__ = [
    "ModeSpec",
    "WavepacketSpec",
    "EnvelopeSpectrum",
    "SpectralNodeSet",
    "lg_mode_amplitude",
    "build_envelope_spectrum",
    "build_node_set",
    "normalize",
]

# Longitudinal amplitude truncation threshold relative to the envelope peak.
_ENVELOPE_CUT = 1e-8


@dataclass(frozen=True)
class ModeSpec:
    """One Laguerre-Gaussian transverse mode: radial index n, azimuthal index ell."""

    n: int
    ell: int
    amplitude_weight: complex = 1.0 + 0.0j

    def __post_init__(self) -> None:
        if self.n < 0:
            raise InvalidParameterError(f"radial index must be >= 0, got {self.n}")


@dataclass(frozen=True)
class WavepacketSpec:
    """All physical parameters defining one wavepacket solution.

    Units: momenta in m, lengths in 1/m; ``m`` itself is configurable.
    """

    m: float = 1.0
    v_a: float = 2.0
    P_bar: float = 2.0
    w: float = 0.1
    delta_zeta: float = 1400.0
    envelope_exponent: int = 8
    modes: tuple[ModeSpec, ...] = (ModeSpec(0, 0),)

    def __post_init__(self) -> None:
        if self.m <= 0:
            raise InvalidParameterError(f"mass must be positive, got {self.m}")
        if self.w <= 0:
            raise InvalidParameterError(f"momentum spread w must be positive, got {self.w}")
        if self.delta_zeta <= 0:
            raise InvalidParameterError(
                f"envelope length delta_zeta must be positive, got {self.delta_zeta}"
            )
        if self.P_bar == 0.0:
            raise InvalidParameterError("P_bar = 0 has no carrier parameterization")
        k = self.envelope_exponent
        if k < 2 or k % 2 != 0:
            raise InvalidParameterError(f"envelope exponent must be even and >= 2, got {k}")
        if not self.modes:
            raise InvalidParameterError("at least one transverse mode is required")
        object.__setattr__(self, "modes", tuple(self.modes))
        # validates |v_a| != 1
        cor.GroupVelocitySpec(self.v_a)

    @property
    def velocity_spec(self) -> cor.GroupVelocitySpec:
        return cor.GroupVelocitySpec(self.v_a)

    @property
    def carrier(self) -> cor.CarrierParameters:
        return cor.CarrierParameters.from_P(self.P_bar, self.v_a, self.m)

    @property
    def curve(self) -> cor.CorrelationCurve:
        return cor.CorrelationCurve(spec=self.velocity_spec, carrier=self.carrier, m=self.m)

    @property
    def xi0(self) -> float:
        return cor.xi0(self.carrier, self.velocity_spec, self.w)

    @property
    def v_n(self) -> float:
        """Velocity of the carrier-frame coordinate zeta: P_bar / E(P_bar)."""
        return self.P_bar / self.carrier.E

    @property
    def paraxial_ratio(self) -> float:
        """|v_a beta_p - 1| P^2 / w^2; the closed form assumes this is large."""
        c = self.carrier
        return abs(self.v_a * c.beta_p - 1.0) * self.P_bar**2 / self.w**2

    def envelope(self, zeta) -> np.ndarray:
        """Target longitudinal profile exp[-(zeta/delta_zeta)^k]."""
        u = np.asarray(zeta, dtype=np.float64) / self.delta_zeta
        return np.exp(-(u**self.envelope_exponent))


def lg_mode_amplitude(p1, p2, w: float, mode: ModeSpec):
    """Laguerre-Gaussian amplitude of one transverse mode at (p1, p2).

    rho^|ell| L_n^|ell|(rho^2) exp(-rho^2/2) exp(i ell theta_p) times the
    mode's relative weight, with rho = |p_perp| / w and
    theta_p = atan2(p2, p1).
    """
    if w <= 0:
        raise InvalidParameterError(f"momentum spread w must be positive, got {w}")
    p1 = np.asarray(p1, dtype=np.float64)
    p2 = np.asarray(p2, dtype=np.float64)
    rho_sq = (p1 * p1 + p2 * p2) / (w * w)
    ell = abs(mode.ell)
    radial = eval_genlaguerre(mode.n, ell, rho_sq) * np.exp(-0.5 * rho_sq)
    if ell:
        radial = radial * rho_sq ** (ell / 2.0)
    out = radial.astype(np.complex128)
    if mode.ell:
        out = out * np.exp(1j * mode.ell * np.arctan2(p2, p1))
    return out * complex(mode.amplitude_weight)


@dataclass(frozen=True)
class EnvelopeSpectrum:
    """Discrete Fourier amplitudes of the longitudinal envelope.

    ``amplitudes[j]`` approximates (1/2pi) Int S(zeta) exp(+i zeta q_j) dzeta
    for the target profile S, so that
    Int A(q) exp(-i zeta q) dq reproduces S(zeta). The amplitudes of the
    real, even super-Gaussian are real and even.
    """

    deltaP_samples: np.ndarray
    amplitudes: np.ndarray
    zeta_halfwidth: float
    zeta_step: float
    delta_zeta: float
    exponent: int

    def inverse(self, zeta) -> np.ndarray:
        """Reconstruct the zeta-profile from the stored amplitudes."""
        zeta = np.atleast_1d(np.asarray(zeta, dtype=np.float64))
        dq = self.deltaP_samples[1] - self.deltaP_samples[0]
        phases = np.exp(-1j * np.outer(zeta, self.deltaP_samples))
        return (phases @ self.amplitudes) * dq

    def amplitude_at(self, q) -> np.ndarray:
        """Evaluate the transform at arbitrary offsets (same convention)."""
        q = np.atleast_1d(np.asarray(q, dtype=np.float64))
        n = self.deltaP_samples.size
        zeta = (np.arange(n) - n // 2) * self.zeta_step
        profile = np.exp(-((zeta / self.delta_zeta) ** self.exponent))
        kernel = np.exp(1j * np.outer(q, zeta))
        return (kernel @ profile.astype(np.complex128)) * (self.zeta_step / (2.0 * math.pi))


def build_envelope_spectrum(spec: WavepacketSpec, n_samples: int = 1024,
                            deltaP_halfwidth: float | None = None) -> EnvelopeSpectrum:
    """Fourier amplitudes realizing the super-Gaussian longitudinal profile.

    ``n_samples`` must be a power of two >= 256. ``deltaP_halfwidth`` is the
    momentum-offset coverage; it must be at least 40 / delta_zeta. The
    default is 80 / delta_zeta, where the truncated transform tail of the
    k = 8 profile is below 1e-10 of peak (at the bare minimum it is ~2e-5).
    The zeta sampling window follows from the FFT relation; if it ends up
    narrower than 3 delta_zeta the profile would spill over and an
    AliasingError reports the spillover.
    """
    n = int(n_samples)
    if n < 256 or (n & (n - 1)) != 0:
        raise InvalidParameterError(f"n_samples must be a power of two >= 256, got {n}")
    min_halfwidth = 40.0 / spec.delta_zeta
    if deltaP_halfwidth is None:
        deltaP_halfwidth = 80.0 / spec.delta_zeta
    if deltaP_halfwidth < min_halfwidth * (1.0 - 1e-12):
        raise InvalidParameterError(
            f"deltaP_halfwidth must cover at least 40/delta_zeta = {min_halfwidth:.6g}, "
            f"got {deltaP_halfwidth:.6g}"
        )
    dzeta = math.pi / deltaP_halfwidth
    halfwidth_zeta = 0.5 * n * dzeta
    if halfwidth_zeta < 3.0 * spec.delta_zeta:
        spill = math.exp(-((halfwidth_zeta / spec.delta_zeta) ** spec.envelope_exponent))
        raise AliasingError(
            spill,
            f"zeta window half-width {halfwidth_zeta:.6g} < 3*delta_zeta "
            f"= {3.0 * spec.delta_zeta:.6g}; spillover {spill:.3e}",
        )
    zeta = (np.arange(n) - n // 2) * dzeta
    profile = np.exp(-((zeta / spec.delta_zeta) ** spec.envelope_exponent))
    amps = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(profile))) * n * dzeta / (2.0 * math.pi)
    q = np.fft.fftshift(np.fft.fftfreq(n, d=dzeta)) * 2.0 * math.pi
    return EnvelopeSpectrum(
        deltaP_samples=q,
        amplitudes=amps,
        zeta_halfwidth=halfwidth_zeta,
        zeta_step=dzeta,
        delta_zeta=spec.delta_zeta,
        exponent=spec.envelope_exponent,
    )


@dataclass(frozen=True)
class SpectralNodeSet:
    """Flat arrays describing the discrete plane-wave superposition.

    All arrays share one length N. ``weight`` is the d^3p quadrature measure
    (positive); ``amplitude`` samples the spectral density f(p) times the
    spinor prefactor sqrt((E+m)/(2E)). After :func:`normalize`,
    sum(weight * |amplitude|^2) = 1.
    """

    spec: WavepacketSpec
    p1: np.ndarray
    p2: np.ndarray
    P: np.ndarray
    weight: np.ndarray
    pc: np.ndarray
    energy: np.ndarray
    amplitude: np.ndarray
    metadata: dict = field(default_factory=dict)

    @property
    def n_nodes(self) -> int:
        return int(self.p1.size)

    @property
    def momenta(self) -> np.ndarray:
        """(N, 3) momentum array with p3 = p_c."""
        return np.column_stack([self.p1, self.p2, self.pc])

    @property
    def probabilities(self) -> np.ndarray:
        """weight * |amplitude|^2, the discrete momentum-space measure."""
        return self.weight * np.abs(self.amplitude) ** 2

    def total_weight(self) -> float:
        return float(self.probabilities.sum())

    def save(self, path) -> None:
        np.savez_compressed(
            path,
            p1=self.p1, p2=self.p2, P=self.P, weight=self.weight,
            pc=self.pc, energy=self.energy, amplitude=self.amplitude,
        )


def _transverse_rule(n_perp: int, w: float, rule: str):
    """Nodes and plain-measure weights for one transverse momentum axis."""
    if n_perp < 1:
        raise InvalidParameterError(f"n_perp must be >= 1, got {n_perp}")
    if rule == "gauss-hermite":
        t, wt = np.polynomial.hermite.hermgauss(n_perp)
        scale = math.sqrt(2.0) * w
        # fold the Gauss-Hermite exp(-t^2) back out so the stored amplitude
        # keeps its own Gaussian factor and the weight is a d p measure
        return scale * t, scale * wt * np.exp(t * t)
    if rule == "trapezoid":
        if n_perp == 1:
            return np.zeros(1), np.ones(1)
        p = np.linspace(-6.0 * w, 6.0 * w, n_perp)
        wts = np.full(n_perp, p[1] - p[0])
        wts[0] *= 0.5
        wts[-1] *= 0.5
        return p, wts
    raise InvalidParameterError(f"unknown transverse rule {rule!r}")


def build_node_set(spec: WavepacketSpec, n_perp: int = 48, n_P: int = 128,
                   deltaP_halfwidth: float | None = None,
                   envelope_samples: int = 1024,
                   transverse_rule: str = "gauss-hermite") -> SpectralNodeSet:
    """Discretize the wavepacket spectrum into a normalized node set.

    Tensor product of n_perp x n_perp transverse nodes and n_P uniform
    longitudinal offset nodes (truncated where the envelope transform falls
    below 1e-8 of its peak). Nodes outside the real-support domain of their
    curve are excluded; the discarded fraction is recorded in the metadata.
    """
    if n_P < 1:
        raise InvalidParameterError(f"n_P must be >= 1, got {n_P}")
    env = build_envelope_spectrum(spec, envelope_samples, deltaP_halfwidth)

    # truncate the longitudinal domain where the transform is negligible
    mag = np.abs(env.amplitudes)
    keep = mag >= _ENVELOPE_CUT * mag.max()
    q_cut = float(np.max(np.abs(env.deltaP_samples[keep])))
    total_env = float(np.sum(mag**2))
    kept_env = float(np.sum(mag[keep] ** 2))
    envelope_truncation = 1.0 - kept_env / total_env

    if n_P == 1:
        q_nodes = np.zeros(1)
        q_weights = np.ones(1)
        zeta_period = math.inf
    else:
        q_nodes = np.linspace(-q_cut, q_cut, n_P)
        spacing = q_nodes[1] - q_nodes[0]
        q_weights = np.full(n_P, spacing)
        q_weights[0] *= 0.5
        q_weights[-1] *= 0.5
        # the discrete offset grid makes the field zeta-periodic; images
        # must stay clear of the envelope support
        zeta_period = 2.0 * math.pi / spacing
        if zeta_period < 6.0 * spec.delta_zeta:
            warnings.warn(
                f"longitudinal node spacing gives a zeta period {zeta_period:.4g} "
                f"< 6*delta_zeta = {6.0 * spec.delta_zeta:.4g}; periodic images "
                "will overlap the packet, increase n_P",
                stacklevel=2,
            )
    env_amps = env.amplitude_at(q_nodes)

    pt, pw = _transverse_rule(n_perp, spec.w, transverse_rule)

    # tensor nodes, p1-major then p2 then P (deterministic ordering)
    p1 = np.repeat(pt, n_perp * n_P)
    p2 = np.tile(np.repeat(pt, n_P), n_perp)
    P = np.tile(spec.P_bar + q_nodes, n_perp * n_perp)
    weight = (
        np.repeat(pw, n_perp * n_P)
        * np.tile(np.repeat(pw, n_P), n_perp)
        * np.tile(q_weights, n_perp * n_perp)
    )
    env_per_node = np.tile(env_amps, n_perp * n_perp)

    mode_amp = np.zeros(p1.shape, dtype=np.complex128)
    for mode in spec.modes:
        mode_amp += lg_mode_amplitude(p1, p2, spec.w, mode)

    pperp_sq = p1 * p1 + p2 * p2

    # per longitudinal slice: support mask and p_c from the exact curve
    pc = np.full(p1.shape, np.nan)
    in_support = np.zeros(p1.shape, dtype=bool)
    for k, P_k in enumerate(spec.P_bar + q_nodes):
        curve = cor.CorrelationCurve.from_P(P_k, spec.v_a, spec.m)
        idx = np.arange(k, p1.size, n_P)
        mask = np.sqrt(pperp_sq[idx]) <= curve.pperp_max
        in_support[idx] = mask
        if np.any(mask):
            pc[idx[mask]] = cor.pc_exact(pperp_sq[idx[mask]], curve)

    raw_measure = weight * np.abs(mode_amp * env_per_node) ** 2
    total_measure = float(raw_measure.sum())
    if total_measure <= 0.0:
        raise DegenerateSpectrumError("spectrum carries no weight")
    discarded = float(raw_measure[~in_support].sum()) / total_measure

    p1 = p1[in_support]
    p2 = p2[in_support]
    P = P[in_support]
    weight = weight[in_support]
    pc = pc[in_support]
    mode_amp = mode_amp[in_support]
    env_per_node = env_per_node[in_support]

    E_P = np.sqrt(spec.m**2 + P * P)
    energy = spec.v_a * (pc - P) + E_P
    if np.any(energy <= 0.0):
        raise DegenerateSpectrumError("constructed node with non-positive energy")
    prefactor = np.sqrt((energy + spec.m) / (2.0 * energy))
    amplitude = mode_amp * env_per_node * prefactor

    nodes = SpectralNodeSet(
        spec=spec,
        p1=p1, p2=p2, P=P, weight=weight, pc=pc, energy=energy, amplitude=amplitude,
        metadata={
            "n_perp": int(n_perp),
            "n_P": int(n_P),
            "transverse_rule": transverse_rule,
            "deltaP_cut": q_cut,
            "envelope_truncation": envelope_truncation,
            "discarded_weight": discarded,
            "zeta_period": zeta_period,
        },
    )
    return normalize(nodes)


def normalize(nodes: SpectralNodeSet) -> SpectralNodeSet:
    """Scale amplitudes so that sum(weight * |amplitude|^2) = 1.

    Idempotent and projective (overall amplitude scales are irrelevant).
    """
    total = nodes.total_weight()
    if total <= 0.0:
        raise DegenerateSpectrumError("cannot normalize a zero-weight spectrum")
    return replace(nodes, amplitude=nodes.amplitude / math.sqrt(total))
