"""Correlated-momentum constraint that pins the envelope velocity.

A wavepacket whose plane-wave constituents satisfy E_p = v_a p3 + kappa has
group velocity v_a along e3 regardless of its velocity expectation value.
Intersecting that hyperplane with the mass shell E^2 = m^2 + |p|^2 fixes the
longitudinal momentum p3 = p_c as a function of the transverse momentum.
This module implements that curve: the kappa <-> P reparameterization, the
exact and paraxial forms of p_c, the real-support domain, and the envelope
length xi0.

Only gamma_a^2 = 1/(1 - v_a^2) ever appears (signed; negative when
|v_a| > 1), so every quantity here is real for superluminal v_a as well.
Functions accept scalars or ndarrays for the transverse argument.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    InvalidParameterError,
    LuminalVelocityError,
    NoRealSolutionError,
    ParaxialDegeneracyError,
    SupportError,
)

__all__ = [
    "GroupVelocitySpec",
    "CarrierParameters",
    "CorrelationCurve",
    "kappa_from_P",
    "P_from_kappa",
    "pc_exact",
    "pc_general",
    "pc_paraxial",
    "xi0",
    "support_radius",
    "projection_curve",
]

# Relative tolerance under which a slightly negative discriminant at the edge
# of support is clamped to zero (edge quadrature nodes must not fail).
_DISC_TOL = 1e-12

# Relative tolerance for detecting the degenerate paraxial case v_a*beta_p = 1.
_PARAXIAL_DEGENERACY_TOL = 1e-10


@dataclass(frozen=True)
class GroupVelocitySpec:
    """Requested envelope velocity v_a and the signed gamma_a^2 = 1/(1 - v_a^2)."""

    v_a: float
    gamma_a_sq: float = field(init=False)

    def __post_init__(self) -> None:
        v = float(self.v_a)
        if not math.isfinite(v):
            raise InvalidParameterError(f"v_a must be finite, got {v}")
        if abs(abs(v) - 1.0) < 1e-15:
            raise LuminalVelocityError(
                "|v_a| = 1 is excluded: gamma_a^2 diverges and the construction degenerates"
            )
        object.__setattr__(self, "v_a", v)
        object.__setattr__(self, "gamma_a_sq", 1.0 / (1.0 - v * v))


@dataclass(frozen=True)
class CarrierParameters:
    """Carrier quantities at a longitudinal momentum offset P.

    E = sqrt(m^2 + P^2), beta_p = E / P (carrier phase velocity, always
    superluminal), kappa = E - v_a P (temporal phase-advance constant).
    """

    P: float
    E: float
    beta_p: float
    kappa: float

    @classmethod
    def from_P(cls, P: float, v_a: float, m: float = 1.0) -> "CarrierParameters":
        if m <= 0:
            raise InvalidParameterError(f"mass must be positive, got {m}")
        P = float(P)
        if P == 0.0:
            raise InvalidParameterError(
                "P = 0 has no carrier parameterization (beta_p = E/P diverges); "
                "use the kappa-parameterized curve instead"
            )
        E = math.sqrt(m * m + P * P)
        return cls(P=P, E=E, beta_p=E / P, kappa=E - v_a * P)


def kappa_from_P(P: float, v_a: float, m: float = 1.0) -> float:
    """Phase-advance constant kappa = sqrt(m^2 + P^2) - v_a P."""
    if m <= 0:
        raise InvalidParameterError(f"mass must be positive, got {m}")
    return math.sqrt(m * m + P * P) - v_a * P


def P_from_kappa(kappa: float, v_a: float, m: float = 1.0, branch: int = +1) -> float:
    """Invert kappa = sqrt(m^2 + P^2) - v_a P for the offset P.

    The inversion is quadratic; ``branch`` (+1 or -1) selects the root

        P = gamma_a^2 v_a kappa + branch * sqrt(gamma_a^4 kappa^2 - gamma_a^2 m^2).

    Round-trips with :func:`kappa_from_P` on the branch that matches the
    original P. For |v_a| > 1 one root may be spurious (it solves the
    squared equation with E < 0); callers that need a physical carrier
    should verify kappa + v_a P > 0.
    """
    spec = GroupVelocitySpec(v_a)
    g2 = spec.gamma_a_sq
    if branch not in (+1, -1):
        raise InvalidParameterError(f"branch must be +1 or -1, got {branch}")
    disc = g2 * g2 * kappa * kappa - g2 * m * m
    if disc < 0.0:
        raise NoRealSolutionError(
            f"no real momentum offset for kappa={kappa:.6g}, v_a={v_a:.6g} "
            f"(discriminant {disc:.3e})"
        )
    return g2 * v_a * kappa + branch * math.sqrt(disc)


@dataclass(frozen=True)
class CorrelationCurve:
    """One constraint curve p3 = p_c(|p_perp|^2) at fixed (v_a, P).

    ``varpi`` is the sign of gamma_a^2 (v_a E - P); it selects the root for
    which p_c(0) = P exactly, so the envelope varies slowly against the
    carrier. ``pperp_max`` bounds the real-support domain (math.inf when
    gamma_a^2 < 0, where the discriminant is positive for every p_perp).
    """

    spec: GroupVelocitySpec
    carrier: CarrierParameters
    m: float
    varpi: int = field(init=False)
    pperp_max: float = field(init=False)

    def __post_init__(self) -> None:
        if self.m <= 0:
            raise InvalidParameterError(f"mass must be positive, got {self.m}")
        g2 = self.spec.gamma_a_sq
        drift = g2 * (self.spec.v_a * self.carrier.E - self.carrier.P)
        object.__setattr__(self, "varpi", +1 if drift >= 0.0 else -1)
        if g2 < 0.0:
            pperp_max = math.inf
        else:
            pperp_max = math.sqrt(g2) * abs(self.spec.v_a * self.carrier.E - self.carrier.P)
        object.__setattr__(self, "pperp_max", pperp_max)

    @classmethod
    def from_P(cls, P: float, v_a: float, m: float = 1.0) -> "CorrelationCurve":
        spec = GroupVelocitySpec(v_a)
        return cls(spec=spec, carrier=CarrierParameters.from_P(P, v_a, m), m=m)


def _clamped_sqrt(disc, scale: float):
    """sqrt with the spec'd edge tolerance: values in (-tol*scale, 0) count as 0."""
    disc = np.asarray(disc, dtype=np.float64)
    tol = _DISC_TOL * abs(scale)
    bad = disc < -tol
    if np.any(bad):
        raise _NegativeDiscriminant(float(np.min(disc)))
    return np.sqrt(np.where(disc < 0.0, 0.0, disc))


class _NegativeDiscriminant(Exception):
    def __init__(self, worst: float):
        self.worst = worst


def pc_exact(pperp_sq, curve: CorrelationCurve):
    """Longitudinal momentum on the constraint curve, carrier form.

    p_c = P + gamma_a^2 (v_a E - P)
            - varpi * sqrt(gamma_a^4 (v_a E - P)^2 - gamma_a^2 |p_perp|^2)

    Exactly P at p_perp = 0; real on the whole support, including
    superluminal v_a where gamma_a^2 < 0. Scalar in, scalar out; arrays
    broadcast elementwise.
    """
    scalar = np.isscalar(pperp_sq) or getattr(pperp_sq, "ndim", 1) == 0
    pperp_sq = np.asarray(pperp_sq, dtype=np.float64)
    if np.any(pperp_sq < 0.0):
        raise InvalidParameterError("pperp_sq must be non-negative")
    g2 = curve.spec.gamma_a_sq
    drift = g2 * (curve.spec.v_a * curve.carrier.E - curve.carrier.P)
    try:
        root = _clamped_sqrt(drift * drift - g2 * pperp_sq, scale=drift * drift)
    except _NegativeDiscriminant:
        raise SupportError(curve.pperp_max) from None
    out = curve.carrier.P + drift - curve.varpi * root
    return float(out) if scalar else out


def pc_general(pperp_sq, kappa: float, spec: GroupVelocitySpec, m: float = 1.0,
               branch: int = +1):
    """Longitudinal momentum on the constraint curve, kappa form.

    p_c = kappa gamma_a^2 v_a + branch * sqrt((kappa gamma_a^2)^2
                                              - gamma_a^2 (m^2 + |p_perp|^2))

    Agrees with :func:`pc_exact` when kappa = kappa_from_P(P) and
    branch = -varpi of the corresponding curve.
    """
    if branch not in (+1, -1):
        raise InvalidParameterError(f"branch must be +1 or -1, got {branch}")
    scalar = np.isscalar(pperp_sq) or getattr(pperp_sq, "ndim", 1) == 0
    pperp_sq = np.asarray(pperp_sq, dtype=np.float64)
    if np.any(pperp_sq < 0.0):
        raise InvalidParameterError("pperp_sq must be non-negative")
    g2 = spec.gamma_a_sq
    vertex = kappa * g2 * spec.v_a
    lead = (kappa * g2) ** 2
    try:
        root = _clamped_sqrt(lead - g2 * (m * m + pperp_sq), scale=lead)
    except _NegativeDiscriminant as exc:
        raise SupportError(
            pperp_max=math.nan,
            message=f"kappa-form discriminant negative ({exc.worst:.3e})",
        ) from None
    out = vertex + branch * root
    return float(out) if scalar else out


def pc_paraxial(pperp_sq, carrier: CarrierParameters, spec: GroupVelocitySpec):
    """Quadratic (paraxial) approximation p_c = P + |p_perp|^2 / (2 P (v_a beta_p - 1))."""
    denom_factor = spec.v_a * carrier.beta_p - 1.0
    if abs(denom_factor) < _PARAXIAL_DEGENERACY_TOL:
        raise ParaxialDegeneracyError(
            f"v_a*beta_p = 1 within tolerance (v_a={spec.v_a:.6g}, beta_p={carrier.beta_p:.6g}); "
            "the paraxial form divides by zero, use pc_exact"
        )
    scalar = np.isscalar(pperp_sq) or getattr(pperp_sq, "ndim", 1) == 0
    pperp_sq = np.asarray(pperp_sq, dtype=np.float64)
    out = carrier.P + pperp_sq / (2.0 * carrier.P * denom_factor)
    return float(out) if scalar else out


def xi0(carrier: CarrierParameters, spec: GroupVelocitySpec, w: float) -> float:
    """Envelope length xi0 = P (v_a beta_p - 1) / w^2, in 1/m.

    Zero signals the degenerate case v_a beta_p = 1, where the closed-form
    envelope is invalid (the paraxial path rejects it separately).
    """
    if w <= 0:
        raise InvalidParameterError(f"transverse momentum spread w must be positive, got {w}")
    return carrier.P * (spec.v_a * carrier.beta_p - 1.0) / (w * w)


def support_radius(curve: CorrelationCurve) -> float:
    """Largest |p_perp| with a real p_c on this curve.

    For gamma_a^2 < 0 the discriminant is a sum of non-negative terms, so
    the support is unbounded (returns math.inf). For gamma_a^2 > 0 the
    boundary is |p_perp|^2 = gamma_a^2 (v_a E - P)^2. p_perp = 0 is always
    in support (the vertex p_c = P exists by construction).
    """
    return curve.pperp_max


def projection_curve(curve: CorrelationCurve, pperp_samples) -> tuple[np.ndarray, int]:
    """(p1, p3) pairs of the constraint curve in the p2 = 0 plane.

    Samples outside the support are dropped; the number dropped is returned
    alongside the (N, 2) array and reported as a warning.
    """
    p1 = np.asarray(pperp_samples, dtype=np.float64)
    keep = np.abs(p1) <= curve.pperp_max
    dropped = int(np.size(p1) - np.count_nonzero(keep))
    if dropped:
        warnings.warn(
            f"dropped {dropped} samples outside support (pperp_max = {curve.pperp_max:.6g})",
            stacklevel=2,
        )
    p1 = p1[keep]
    p3 = pc_exact(p1 * p1, curve)
    return np.column_stack([p1, p3]), dropped
