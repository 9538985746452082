"""Walk states and snapshot ranges.

A WalkState pairs a complex amplitude vector with the basis it is expressed
in: the vertex basis (dimension n) for continuous-time walks or an arc basis
(dimension 2|E|) for coined walks.  States support the small amount of
arithmetic needed to build superpositions (add, subtract, scalar multiply);
simulation entry points validate normalization rather than silently fixing it.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BasisMismatch, VertexOutOfRange

__all__ = ["VertexBasis", "WalkState", "SimRange"]


@dataclass(frozen=True)
class VertexBasis:
    """Computational basis labelled by the n vertices of a graph."""

    n: int

    @property
    def size(self) -> int:
        return self.n


class WalkState:
    """Amplitudes tagged with their basis.  Immutable."""

    __slots__ = ("basis", "amplitudes")

    def __init__(self, basis, amplitudes):
        amp = np.array(amplitudes, dtype=np.complex128)
        if amp.ndim != 1 or amp.shape[0] != basis.size:
            raise BasisMismatch(
                f"amplitude vector of dim {amp.shape[0] if amp.ndim == 1 else amp.shape}"
                f" does not match basis size {basis.size}"
            )
        amp.setflags(write=False)
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "amplitudes", amp)

    def __setattr__(self, name, value):
        raise AttributeError("WalkState is immutable")

    @property
    def dim(self) -> int:
        return self.amplitudes.shape[0]

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def _require_same_basis(self, other: "WalkState") -> None:
        if self.basis != other.basis:
            raise BasisMismatch("states are expressed in different bases")

    def __add__(self, other: "WalkState") -> "WalkState":
        self._require_same_basis(other)
        return WalkState(self.basis, self.amplitudes + other.amplitudes)

    def __sub__(self, other: "WalkState") -> "WalkState":
        self._require_same_basis(other)
        return WalkState(self.basis, self.amplitudes - other.amplitudes)

    def __mul__(self, scalar) -> "WalkState":
        return WalkState(self.basis, self.amplitudes * complex(scalar))

    __rmul__ = __mul__

    def __truediv__(self, scalar) -> "WalkState":
        return WalkState(self.basis, self.amplitudes / complex(scalar))

    def __repr__(self):
        return f"WalkState(dim={self.dim}, norm={self.norm():.6g})"


def vertex_state(n: int, v: int) -> WalkState:
    """Indicator state on vertex v in the vertex basis of size n."""
    if not (0 <= v < n):
        raise VertexOutOfRange(f"vertex {v} not in 0..{n - 1}")
    amp = np.zeros(n, dtype=np.complex128)
    amp[v] = 1.0
    return WalkState(VertexBasis(n), amp)


@dataclass(frozen=True)
class SimRange:
    """Snapshot selector: indices k = start, start+step, ... strictly below stop.

    A bare integer m is shorthand for (0, m, 1): the first m snapshots.
    """

    start: int
    stop: int
    step: int = 1

    def __post_init__(self):
        if self.start < 0 or self.stop < 0:
            raise ValueError("range: start and stop must be non-negative")
        if self.step < 1:
            raise ValueError("range: step must be >= 1")
        if self.start > self.stop:
            raise ValueError("range: start must not exceed stop")

    @classmethod
    def coerce(cls, value) -> "SimRange":
        if isinstance(value, SimRange):
            return value
        if isinstance(value, (int, np.integer)):
            return cls(0, int(value), 1)
        if isinstance(value, (tuple, list)) and len(value) == 3:
            return cls(int(value[0]), int(value[1]), int(value[2]))
        raise ValueError("range: expected an integer or a (start, stop, step) triple")

    def indices(self) -> range:
        return range(self.start, self.stop, self.step)
