"""Exception types shared across the package."""


class GalerkinTimeError(Exception):
    """Base class for all errors raised by galerkin_time."""


class ConfigError(GalerkinTimeError, ValueError):
    """Invalid configuration or arguments (CLI exit code 2)."""


class ProblemError(GalerkinTimeError):
    """Bad problem definition, unknown registry key, or blow-up in f."""


class SolverError(GalerkinTimeError):
    """A solve failed (singular system, non-finite state)."""


class NewtonError(SolverError):
    """Newton did not converge on an element."""

    def __init__(self, element, residual, max_iter):
        self.element = element
        self.residual = residual
        super().__init__(
            f"Newton failed to converge on element {element}: "
            f"residual {residual:.3e} after {max_iter} iterations"
        )


class RootFindingError(GalerkinTimeError):
    """Polynomial root finding missed its internal tolerance."""
