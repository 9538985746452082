"""Exception types shared across the package.

Every failure mode raised by the library derives from QuantumWalkError, so
callers (notably the CLI) can map library failures onto exit codes without
enumerating modules.
"""


class QuantumWalkError(Exception):
    """Base class for all errors raised by this package."""


# --- backend ---------------------------------------------------------------

class UnsupportedEngineKind(QuantumWalkError):
    """Requested compute engine names a bridge that is not built in."""


class AlreadyStopped(QuantumWalkError):
    """stop_engine was called on an engine that is already stopped."""


class EngineStopped(QuantumWalkError):
    """An operation was invoked on a stopped engine."""


class DimensionMismatch(QuantumWalkError):
    """Operand shapes are incompatible."""


class NotOnDevice(QuantumWalkError):
    """A compute operation received an operand that was never moved to the
    engine, or one moved to a different engine."""


class NonFiniteEntry(QuantumWalkError):
    """A NaN or infinity was about to enter a stored numeric structure."""


# --- graphs ----------------------------------------------------------------

class NonSquare(QuantumWalkError):
    """Adjacency matrix is not square."""


class NotSymmetric(QuantumWalkError):
    """Adjacency pattern is not symmetric."""


class SelfLoopPresent(QuantumWalkError):
    """Adjacency matrix has a nonzero diagonal entry."""


class WeightedAdjacency(QuantumWalkError):
    """Adjacency matrix carries weights other than exactly 1."""


class SizeTooSmall(QuantumWalkError):
    """A named graph family was requested below its minimum size."""


class VertexOutOfRange(QuantumWalkError):
    """Vertex id is not in 0..n-1."""


class NotAnArc(QuantumWalkError):
    """The (tail, head) pair is not an arc of the graph."""


class IndexOutOfRange(QuantumWalkError):
    """Arc index is outside the basis."""


# --- walks -----------------------------------------------------------------

class MarkedVertexOutOfRange(QuantumWalkError):
    """A marked vertex id is not a vertex of the graph."""


class SeriesNotConverged(QuantumWalkError):
    """The evolution series exhausted its term budget before reaching the
    requested tolerance."""


class UnnormalizedInitialState(QuantumWalkError):
    """simulate received an initial state whose norm is not 1."""


class BasisMismatch(QuantumWalkError):
    """A state was expressed in the wrong basis for the operation."""


class UnsupportedGraphForPersistentShift(QuantumWalkError):
    """Persistent shift requested on a graph family that does not define it."""


# --- cli -------------------------------------------------------------------

class ConfigError(QuantumWalkError):
    """Invalid run configuration; the message names the offending key."""

    def __init__(self, key: str, message: str):
        super().__init__(f"{key}: {message}")
        self.key = key
