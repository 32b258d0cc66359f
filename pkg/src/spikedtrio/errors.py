"""Exception types shared across the package.

``SolverError`` subclasses signal numerical failure modes (no bracketed
minimum, singular configurations, unconverged iterations, ...) and map to
exit code 3 in the CLI.  ``ConfigError`` covers bad user input (flags or
config files) and maps to exit code 2.
"""


class SolverError(Exception):
    """Base class for numerical failures."""


class SingularConfigurationError(SolverError):
    """A pair separation fell below the singularity threshold."""


class NoMinimumError(SolverError):
    """No radial minimum was bracketed on the search interval."""


class NotAMinimumError(SolverError):
    """A supposed minimum has a non-positive curvature."""


class NonConvexError(SolverError):
    """Harmonic quantization requested where the quadratic Taylor
    coefficient is not positive."""


class CriticalRadiusNotFound(SolverError):
    """The angular minima count never changes on the probed radial range."""


class GridTooCoarseError(SolverError):
    """Successive-grid (Richardson) disagreement exceeds the requested
    tolerance."""


class ConvergenceError(SolverError):
    """An iterative eigensolver did not reach its residual tolerance."""


class ConfigError(Exception):
    """Invalid command-line or config-file input."""
