class PsplanError(Exception):
    """Base class for all package errors."""


class ValidationError(PsplanError, ValueError):
    """Input data or arguments violate a documented invariant."""


class SolverError(PsplanError, RuntimeError):
    """The optimiser failed to reach an optimal solution."""
