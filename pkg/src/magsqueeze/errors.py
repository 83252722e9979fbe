"""Exception types shared across the package."""


class MagsqueezeError(Exception):
    """Base class for all package-specific errors."""


class ConfigError(MagsqueezeError):
    """Invalid or incomplete configuration (bad units, missing keys, ...)."""


class DimensionError(MagsqueezeError):
    """Operator or state dimensions are inconsistent."""


class TruncationError(MagsqueezeError):
    """Requested state/operator does not fit in the Fock truncation."""


class NumericalError(MagsqueezeError):
    """A numerical sanity check failed (positivity, trace, convergence)."""


class StiffnessError(NumericalError):
    """The ODE integrator gave up; carries solver diagnostics in args."""


class FrameError(MagsqueezeError):
    """Unknown reference frame or unsupported frame conversion."""
