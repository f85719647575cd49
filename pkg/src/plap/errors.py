"""Exception types shared across the package."""


class DomainError(ValueError):
    """Input outside the domain of an operation."""


class MeshMismatchError(DomainError):
    """Operands live on different meshes or component dimensions."""


class UnsupportedPotentialError(ValueError):
    """A kink node has no exact subdifferential descriptor."""


class GeometryError(RuntimeError):
    """Mountain-pass or saddle geometry does not hold for the problem."""


class NoDescentDirectionError(GeometryError):
    """Energy never became negative along a ray."""


class NonConvergenceError(RuntimeError):
    """Iteration budget exhausted.

    Attributes
    ----------
    best : object
        Best iterate reached (a ``GridFn`` or a partial run).
    diagnostics : dict
        Solver-specific history.
    """

    def __init__(self, message, best=None, diagnostics=None):
        super().__init__(message)
        self.best = best
        self.diagnostics = diagnostics or {}


class ConfigError(ValueError):
    """Invalid command-line configuration."""
