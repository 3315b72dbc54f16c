class TomographyError(Exception):
    """Base class for errors raised by spintomo."""


class LabelError(TomographyError, ValueError):
    """Invalid angular-momentum label (j, m, L, M)."""


class DimensionError(TomographyError, ValueError):
    """Operands of incompatible dimension."""


class NotHermitianError(TomographyError, ValueError):
    pass


class ConvergenceError(TomographyError, RuntimeError):
    """An iterative series failed to converge within its cap."""

    def __init__(self, message, residual=None, iterations=None):
        super().__init__(message)
        self.residual = residual
        self.iterations = iterations


class ReconstructionError(TomographyError, ValueError):
    """Reconstructed operator violates density-matrix invariants."""

    def __init__(self, message, diagnostics=None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}


class GridMismatchError(TomographyError, ValueError):
    pass


class SingularityError(TomographyError, ValueError):
    pass
