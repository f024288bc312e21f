"""Exception hierarchy shared by the library and the command line."""


class FairDampError(Exception):
    """Base class for all errors raised by fairdamp."""


class GraphFormatError(FairDampError):
    """The edge-list stream is malformed.

    ``lineno`` is the 1-based line number of the offending line, or ``None``
    when the problem is not tied to one line (e.g. a missing header).
    """

    def __init__(self, message, lineno=None):
        if lineno is not None:
            message = f"line {lineno}: {message}"
        super().__init__(message)
        self.lineno = lineno


class NodeRangeError(GraphFormatError):
    """An edge endpoint lies outside ``[0, n)``."""


class DimensionError(FairDampError, ValueError):
    """A vector does not match the graph size."""


class ConvergenceError(FairDampError):
    """An iterative method stopped before reaching its tolerance."""

    def __init__(self, message, residual, iterations):
        super().__init__(f"{message} (residual={residual:.3e} after {iterations} iterations)")
        self.residual = residual
        self.iterations = iterations


class DegenerateStructureError(FairDampError):
    """The graph lacks the ergodic structure an analysis needs (e.g. no Pure-OUT class)."""
