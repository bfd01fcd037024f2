"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit with 2,
numerical/support failures with 3, and I/O failures with 4.
"""


class DiracwaveError(Exception):
    """Base class for all package errors."""


class ConfigError(DiracwaveError):
    """Invalid configuration input (bad key, bad value, bad file)."""


class InvalidParameterError(DiracwaveError):
    """A physical parameter violates its precondition (e.g. m <= 0)."""


class LuminalVelocityError(InvalidParameterError):
    """|v_a| = 1 requested; the constant-velocity construction degenerates there."""


class UndefinedPhaseVelocityError(DiracwaveError):
    """Phase velocity requested for zero momentum."""


class NormalizationError(DiracwaveError):
    """A spectrum that should be normalized is not.

    Carries the measured deficit (1 - sum of weights).
    """

    def __init__(self, deficit: float, message: str | None = None):
        self.deficit = float(deficit)
        super().__init__(message or f"spectrum not normalized: deficit {self.deficit:.3e}")


class NoRealSolutionError(DiracwaveError):
    """The momentum-offset inversion has a negative discriminant."""


class SupportError(DiracwaveError):
    """Transverse momentum outside the real-support domain of the correlation curve.

    Carries the support boundary pperp_max.
    """

    def __init__(self, pperp_max: float, message: str | None = None):
        self.pperp_max = float(pperp_max)
        super().__init__(
            message or f"transverse momentum outside real support (pperp_max = {self.pperp_max:.6g})"
        )


class ParaxialDegeneracyError(DiracwaveError):
    """v_a * beta_p = 1: the quadratic-in-pperp closed form divides by zero."""


class DegenerateSpectrumError(DiracwaveError):
    """Spectrum construction produced no usable weight (empty support or zero norm)."""


class AliasingError(DiracwaveError):
    """A periodic/windowed representation cannot hold the field.

    Carries the measured spillover (edge amplitude relative to peak).
    """

    def __init__(self, spillover: float, message: str | None = None):
        self.spillover = float(spillover)
        super().__init__(message or f"window too small: relative spillover {self.spillover:.3e}")


class PeakTrackingError(DiracwaveError):
    """Density peak could not be located in the grid interior."""


class BoostError(DiracwaveError):
    """Invalid Lorentz boost velocity (|v_L| >= 1)."""


class GridCompatibilityError(DiracwaveError):
    """Two grids expected to share axes do not."""


class GridFormatError(DiracwaveError):
    """A grid file does not follow the documented format."""
