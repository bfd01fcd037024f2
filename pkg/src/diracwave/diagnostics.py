"""Measurements on evaluated grids: norms, peak tracking, profile similarity.

The headline check lives here: the on-axis density peak of a constructed
packet advects at the requested envelope velocity v_a (which may exceed 1),
while the momentum-space velocity expectation value stays strictly below 1.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .errors import GridCompatibilityError, InvalidParameterError, PeakTrackingError
from .grids import FieldGrid
from .kinematics import velocity_expectation
from .spectrum import SpectralNodeSet

__all__ = [
    "PeakTrajectory",
    "ProfileSimilarity",
    "density_norm",
    "fit_peak_velocity",
    "profile_similarity",
    "expectation_report",
]

# Correlation window half-width in units of delta_zeta (excludes the
# numerically negligible tails from dominating the statistic).
_WINDOW_ZETAS = 2.0


@dataclass(frozen=True)
class PeakTrajectory:
    """On-axis density peak positions over time and their linear fit."""

    times: np.ndarray
    positions: np.ndarray
    fitted_velocity: float
    fit_residual: float


@dataclass(frozen=True)
class ProfileSimilarity:
    """Normalized correlation of two on-axis profiles after a velocity shift."""

    reference_time: float
    compare_time: float
    correlation: float
    shift_used: float


def density_norm(grid: FieldGrid) -> float:
    """Sum of the density times the cell volume.

    Warns when the packet leaks out of the grid (edge density above 1e-6 of
    the peak), because the result then undercounts the norm.
    """
    dens = grid.density
    peak = float(dens.max())
    if peak > 0.0:
        edges = []
        for ax in range(dens.ndim):
            edges.append(float(np.take(dens, 0, axis=ax).max()))
            edges.append(float(np.take(dens, -1, axis=ax).max()))
        if max(edges) > 1e-6 * peak:
            warnings.warn(
                f"edge density {max(edges) / peak:.3e} of peak; norm undercounts the packet",
                stacklevel=2,
            )
    return float(dens.sum()) * grid.cell_volume()


def _interpolated_peak(coords: np.ndarray, profile: np.ndarray) -> float:
    """Sub-cell peak position by quadratic interpolation around the maximum."""
    i = int(np.argmax(profile))
    if i == 0 or i == len(profile) - 1:
        raise PeakTrackingError("density peak sits on the grid boundary")
    denom = profile[i - 1] - 2.0 * profile[i] + profile[i + 1]
    if denom >= 0.0:
        raise PeakTrackingError("no curvature at the density maximum (flat profile)")
    shift = 0.5 * (profile[i - 1] - profile[i + 1]) / denom
    return float(coords[i] + shift * (coords[1] - coords[0]))


def fit_peak_velocity(grids: list[FieldGrid]) -> PeakTrajectory:
    """Least-squares velocity of the on-axis density peak across time slices."""
    if len(grids) < 5:
        raise InvalidParameterError(f"need at least 5 time samples, got {len(grids)}")
    times = []
    positions = []
    for grid in grids:
        coords, profile = grid.on_axis_line("x3")
        if profile.max() <= 0.0:
            raise PeakTrackingError("empty density profile")
        times.append(grid.time)
        positions.append(_interpolated_peak(coords, profile))
    times = np.asarray(times)
    positions = np.asarray(positions)
    if len(np.unique(times)) < len(times):
        raise InvalidParameterError("time samples must be distinct")
    coeffs, residuals, *_ = np.polyfit(times, positions, 1, full=True)
    residual = float(np.sqrt(residuals[0] / len(times))) if len(residuals) else 0.0
    return PeakTrajectory(
        times=times, positions=positions,
        fitted_velocity=float(coeffs[0]), fit_residual=residual,
    )


def profile_similarity(grid_a: FieldGrid, grid_b: FieldGrid, v_a: float) -> ProfileSimilarity:
    """Pearson correlation of on-axis densities after undoing the advection.

    ``grid_b``'s profile is shifted back by v_a times the time difference
    (sub-cell, by linear interpolation) and correlated with ``grid_a``'s
    over the window |zeta| <= 2 delta_zeta around ``grid_a``'s packet.
    """
    if grid_a.axis_names != grid_b.axis_names:
        raise GridCompatibilityError(
            f"profiles need matching axes, got {grid_a.axis_names} vs {grid_b.axis_names}"
        )
    t_a, t_b = grid_a.time, grid_b.time
    shift = v_a * (t_b - t_a)
    x3_a, prof_a = grid_a.on_axis_line("x3")
    x3_b, prof_b = grid_b.on_axis_line("x3")

    # window around grid_a's packet center, clipped to where the shifted
    # compare profile exists
    params = grid_a.params
    v_n = float(params.get("v_n", v_a))
    delta_zeta = float(params.get("delta_zeta", 0.25 * (x3_a[-1] - x3_a[0])))
    center = v_n * t_a
    half = _WINDOW_ZETAS * delta_zeta
    window = (
        (x3_a >= center - half)
        & (x3_a <= center + half)
        & (x3_a + shift >= x3_b[0])
        & (x3_a + shift <= x3_b[-1])
    )
    if np.count_nonzero(window) < 8:
        raise InvalidParameterError(
            f"shift {shift:.6g} leaves no usable overlap with the compare grid"
        )
    peak_x3 = x3_a[int(np.argmax(prof_a))]
    if not (x3_a[window][0] <= peak_x3 <= x3_a[window][-1]):
        raise InvalidParameterError(
            f"shift {shift:.6g} moves the correlation window off the packet peak"
        )

    shifted_b = np.interp(x3_a[window] + shift, x3_b, prof_b)
    a = prof_a[window]
    corr = float(np.corrcoef(a, shifted_b)[0, 1])
    return ProfileSimilarity(
        reference_time=t_a, compare_time=t_b, correlation=corr, shift_used=shift,
    )


def expectation_report(nodes: SpectralNodeSet) -> dict:
    """Momentum-space expectation values of a normalized node set."""
    probs = nodes.probabilities
    momenta = nodes.momenta
    v = velocity_expectation(momenta, probs, nodes.spec.m)
    p_mean = (probs[:, None] * momenta).sum(axis=0)
    e_mean = float((probs * nodes.energy).sum())
    return {
        "v1": float(v[0]),
        "v2": float(v[1]),
        "v3": float(v[2]),
        "v_magnitude": float(np.linalg.norm(v)),
        "p1": float(p_mean[0]),
        "p2": float(p_mean[1]),
        "p3": float(p_mean[2]),
        "energy": e_mean,
    }
