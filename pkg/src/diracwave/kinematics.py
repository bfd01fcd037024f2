"""Free-particle Dirac algebra in natural units (hbar = c = 1).

Momenta are in units of the mass m, lengths and times in 1/m. Spinors are
plain complex ndarrays with the 4 components on the leading axis, so every
function here broadcasts over trailing axes: ``bispinor_u(p, m)`` returns
shape ``(4,)`` for scalar momentum components and ``(4, N)`` for length-N
component arrays.

Conventions (Dirac representation):

    alpha_j = [[0, sigma_j], [sigma_j, 0]],   beta = diag(1, 1, -1, -1)

    u(p) = sqrt(E + m) * (chi_plus, (sigma . p) / (E + m) chi_plus)

with chi_plus = (1, 0), normalized so that u+ beta u = 2m and u+ u = 2E.

All functions are pure; there is no shared mutable state.
"""

from __future__ import annotations

import numpy as np

from .errors import InvalidParameterError, NormalizationError, UndefinedPhaseVelocityError

__all__ = [
    "PAULI",
    "ALPHA",
    "BETA",
    "DiracMatrices",
    "DIRAC_MATRICES",
    "on_shell_energy",
    "bispinor_u",
    "apply_hamiltonian",
    "phase_velocity",
    "velocity_expectation",
]

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=np.complex128,
)

_ZERO2 = np.zeros((2, 2), dtype=np.complex128)
_EYE2 = np.eye(2, dtype=np.complex128)

#: alpha_j in the Dirac representation, shape (3, 4, 4)
ALPHA = np.stack([np.block([[_ZERO2, s], [s, _ZERO2]]) for s in PAULI])

#: beta in the Dirac representation
BETA = np.block([[_EYE2, _ZERO2], [_ZERO2, -_EYE2]])


class DiracMatrices:
    """Constant alpha and beta matrices bundled for convenience.

    The entries are small integers (times i), so the anticommutator
    identities alpha_j alpha_k + alpha_k alpha_j = 2 delta_jk, the
    anticommutation of each alpha_j with beta, and beta^2 = 1 hold exactly
    in floating point.
    """

    def __init__(self) -> None:
        self.alpha1 = ALPHA[0]
        self.alpha2 = ALPHA[1]
        self.alpha3 = ALPHA[2]
        self.beta = BETA

    @property
    def alphas(self) -> np.ndarray:
        return ALPHA


DIRAC_MATRICES = DiracMatrices()


def _check_mass(m: float) -> float:
    m = float(m)
    if not np.isfinite(m) or m <= 0.0:
        raise InvalidParameterError(f"mass must be positive and finite, got {m}")
    return m


def on_shell_energy(p, m: float = 1.0):
    """Positive on-shell energy sqrt(m^2 + |p|^2).

    ``p`` is a length-3 sequence of momentum components; each component may
    itself be an array (broadcast together).
    """
    m = _check_mass(m)
    p1, p2, p3 = (np.asarray(c, dtype=np.float64) for c in p)
    return np.sqrt(m * m + p1 * p1 + p2 * p2 + p3 * p3)


def bispinor_u(p, m: float = 1.0) -> np.ndarray:
    """Positive-energy spin-up bispinor for momentum ``p``.

    Returns the 4 complex components on the leading axis. Normalized so
    that u+ beta u = 2m and u+ u = 2E.
    """
    m = _check_mass(m)
    p1, p2, p3 = (np.asarray(c, dtype=np.float64) for c in p)
    energy = np.sqrt(m * m + p1 * p1 + p2 * p2 + p3 * p3)
    root = np.sqrt(energy + m)
    # sigma . p acting on chi_plus = (1, 0): upper entry p3, lower p1 + i p2
    c0 = root + 0j
    c1 = np.zeros_like(c0)
    c2 = p3 / root + 0j
    c3 = (p1 + 1j * p2) / root
    return np.stack(np.broadcast_arrays(c0, c1, c2, c3))


def apply_hamiltonian(spinor: np.ndarray, p, m: float = 1.0) -> np.ndarray:
    """Apply the momentum-space free Hamiltonian (alpha . p + beta m).

    ``spinor`` has the 4 components on its leading axis; momentum components
    broadcast against the trailing axes.
    """
    p1, p2, p3 = (np.asarray(c, dtype=np.float64) for c in p)
    spinor = np.asarray(spinor, dtype=np.complex128)
    a, b, c, d = spinor[0], spinor[1], spinor[2], spinor[3]
    pm = p1 - 1j * p2
    pp = p1 + 1j * p2
    out0 = p3 * c + pm * d + m * a
    out1 = pp * c - p3 * d + m * b
    out2 = p3 * a + pm * b - m * c
    out3 = pp * a - p3 * b - m * d
    return np.stack(np.broadcast_arrays(out0, out1, out2, out3))


def phase_velocity(p, m: float = 1.0) -> np.ndarray:
    """Phase velocity E_p p / |p|^2 of the plane wave with momentum ``p``.

    Always superluminal for massive particles. Raises for p = 0, where the
    phase velocity is undefined.
    """
    m = _check_mass(m)
    p = np.asarray(p, dtype=np.float64)
    psq = p[0] ** 2 + p[1] ** 2 + p[2] ** 2
    if np.any(psq == 0.0):
        raise UndefinedPhaseVelocityError("phase velocity undefined at p = 0")
    energy = np.sqrt(m * m + psq)
    return energy * p / psq


def velocity_expectation(momenta: np.ndarray, probabilities: np.ndarray, m: float = 1.0,
                         tol: float = 1e-6) -> np.ndarray:
    """Velocity expectation value of a discrete momentum spectrum.

    ``momenta`` has shape (N, 3); ``probabilities`` are the quadrature
    weights times |f|^2 and must sum to 1 within ``tol``. Returns
    sum_i prob_i * p_i / E_i, whose magnitude is strictly below 1.
    """
    m = _check_mass(m)
    momenta = np.asarray(momenta, dtype=np.float64)
    probabilities = np.asarray(probabilities, dtype=np.float64)
    total = float(probabilities.sum())
    if abs(total - 1.0) > tol:
        raise NormalizationError(1.0 - total)
    energy = np.sqrt(m * m + np.sum(momenta * momenta, axis=-1))
    return (probabilities[:, None] * momenta / energy[:, None]).sum(axis=0)
