"""Exception types shared across the package."""


class WavetimeError(Exception):
    """Base class for all errors raised by this package."""


class ValidationError(WavetimeError):
    """An input value or configuration violates a documented invariant."""


class NoOpenChannelError(WavetimeError):
    """Requested energy is below an asymptotic potential; no propagating lead."""


class ResummationDivergenceError(WavetimeError):
    """The geometric partial-wave series does not converge (|r21 r23 e^{2ik'L}| >= 1)."""


class DerivativeError(WavetimeError):
    """A finite-difference limit failed to converge or probe data is unusable."""


class StepSizeError(DerivativeError):
    """Phase jump between derivative probes too large for reliable unwrapping."""


class LogSingularityError(WavetimeError):
    """Logarithmic derivative requested where the amplitude vanishes."""


class RegimeAmbiguityError(WavetimeError):
    """Energy sits exactly at a barrier top; propagating/evanescent branch undefined."""


class DivergentIntegrandError(WavetimeError):
    """Integrand diverges (e.g. 1/kappa at E equal to a segment potential)."""


class ZeroFluxError(WavetimeError):
    """No net flux through the plane; a flux-normalised quantity is undefined."""


class GridError(WavetimeError):
    """Sampling grid is inadequate (aliasing or spectral leakage detected)."""
