"""Free-particle Dirac wavepackets with tunable peak velocity.

Superpositions of positive-energy plane waves whose momenta are correlated
along the curve E = v_a p3 + kappa have an envelope that advects at the
chosen v_a, including |v_a| > 1, while the velocity expectation value stays
subluminal. This package builds such superpositions, evaluates them three
independent ways (closed-form paraxial, direct momentum quadrature, exact
spectral propagation), and measures the resulting fields.
"""

from .correlation import (
    CarrierParameters,
    CorrelationCurve,
    GroupVelocitySpec,
    P_from_kappa,
    kappa_from_P,
    pc_exact,
    pc_general,
    pc_paraxial,
    projection_curve,
    support_radius,
    xi0,
)
from .diagnostics import (
    PeakTrajectory,
    ProfileSimilarity,
    density_norm,
    expectation_report,
    fit_peak_velocity,
    profile_similarity,
)
from .evaluators import (
    ParaxialEvaluator,
    QuadratureEvaluator,
    SpacetimePoint,
    boosted_phase,
    boosted_phase_subluminal,
    boosted_phase_superluminal,
    carrier_split_phase,
)
from .grids import FieldGrid, evaluate_grid
from .gridio import read_grid, write_grid
from .kinematics import (
    ALPHA,
    BETA,
    apply_hamiltonian,
    bispinor_u,
    on_shell_energy,
    phase_velocity,
    velocity_expectation,
)
from .propagation import default_box_axes, initial_box_grid, propagate_spectral
from .spectrum import (
    EnvelopeSpectrum,
    ModeSpec,
    SpectralNodeSet,
    WavepacketSpec,
    build_envelope_spectrum,
    build_node_set,
    lg_mode_amplitude,
    normalize,
)

__version__ = "0.1.0"

__all__ = [
    "ALPHA",
    "BETA",
    "CarrierParameters",
    "CorrelationCurve",
    "EnvelopeSpectrum",
    "FieldGrid",
    "GroupVelocitySpec",
    "ModeSpec",
    "ParaxialEvaluator",
    "PeakTrajectory",
    "ProfileSimilarity",
    "P_from_kappa",
    "QuadratureEvaluator",
    "SpacetimePoint",
    "SpectralNodeSet",
    "WavepacketSpec",
    "apply_hamiltonian",
    "bispinor_u",
    "boosted_phase",
    "boosted_phase_subluminal",
    "boosted_phase_superluminal",
    "build_envelope_spectrum",
    "build_node_set",
    "carrier_split_phase",
    "default_box_axes",
    "density_norm",
    "evaluate_grid",
    "expectation_report",
    "fit_peak_velocity",
    "initial_box_grid",
    "kappa_from_P",
    "lg_mode_amplitude",
    "normalize",
    "on_shell_energy",
    "pc_exact",
    "pc_general",
    "pc_paraxial",
    "phase_velocity",
    "profile_similarity",
    "projection_curve",
    "propagate_spectral",
    "read_grid",
    "support_radius",
    "velocity_expectation",
    "write_grid",
    "xi0",
]
