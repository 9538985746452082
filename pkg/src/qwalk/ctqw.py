"""Continuous-time quantum walk.

The walk on a graph with adjacency matrix A and hopping rate gamma evolves
under the Hamiltonian

    H = -gamma * A - sum over marked v of |v><v|

through the unitary U(t) = exp(-i H t).  The exponential is never
materialized: its action on a state is computed by a sub-stepped truncated
Taylor series that uses only sparse matrix-vector products and axpy updates
on the compute engine, so the same code path scales from toy graphs to large
sparse instances.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import (
    ComplexVector,
    CsrMatrix,
    Engine,
    csr_from_triplets,
    matvec_mul,
    move_to_device,
    vector_axpy,
    vector_norm,
    vector_scale,
)
from .errors import (
    BasisMismatch,
    DimensionMismatch,
    MarkedVertexOutOfRange,
    SeriesNotConverged,
    UnnormalizedInitialState,
)
from .graphs import Graph
from .state import SimRange, VertexBasis, WalkState, vertex_state

__all__ = [
    "CtqwSpec",
    "build_hamiltonian",
    "get_hamiltonian",
    "ket",
    "evolve_state",
    "simulate",
    "probability_distribution",
    "DEFAULT_TOLERANCE",
]

DEFAULT_TOLERANCE = 1e-12

# Taylor terms allowed per sub-step before giving up.
_MAX_SERIES_TERMS = 1000


@dataclass(frozen=True)
class CtqwSpec:
    """Parameters of a continuous-time walk.

    delta_t is the snapshot spacing used by :func:`simulate`; marked vertices
    acquire a -1 diagonal term in the Hamiltonian.
    """

    graph: Graph
    gamma: float
    delta_t: float
    marked: frozenset[int] = frozenset()

    def __post_init__(self):
        if not (self.gamma > 0):
            raise ValueError("gamma must be positive")
        if not (self.delta_t > 0):
            raise ValueError("delta_t (time) must be positive")
        object.__setattr__(self, "marked", frozenset(int(v) for v in self.marked))
        for v in self.marked:
            if not (0 <= v < self.graph.n):
                raise MarkedVertexOutOfRange(f"marked vertex {v} not in 0..{self.graph.n - 1}")


def build_hamiltonian(spec: CtqwSpec) -> CsrMatrix:
    """Sparse Hermitian Hamiltonian of the walk.

    Off-diagonal entry (v, w) is -gamma for every edge; the diagonal holds -1
    at each marked vertex and is absent elsewhere.
    """
    a = spec.graph.adjacency
    rows = list(np.repeat(np.arange(spec.graph.n), np.diff(a.row_offsets)))
    cols = list(a.col_indices)
    vals = [-spec.gamma] * a.nnz
    for v in sorted(spec.marked):
        rows.append(v)
        cols.append(v)
        vals.append(-1.0)
    return csr_from_triplets(spec.graph.n, spec.graph.n, rows, cols, vals)


def get_hamiltonian(spec: CtqwSpec) -> CsrMatrix:
    """Accessor form of :func:`build_hamiltonian`."""
    return build_hamiltonian(spec)


def ket(spec: CtqwSpec | Graph, v: int) -> WalkState:
    """Vertex-basis computational state |v>."""
    n = spec.n if isinstance(spec, Graph) else spec.graph.n
    return vertex_state(n, v)


def _inf_norm(m: CsrMatrix) -> float:
    if m.nnz == 0:
        return 0.0
    mags = np.abs(m.values)
    lens = np.diff(m.row_offsets)
    sums = np.zeros(m.n_rows)
    nzrows = lens > 0
    sums[nzrows] = np.add.reduceat(mags, m.row_offsets[:-1][nzrows])
    return float(sums.max())


def evolve_state(
    engine: Engine,
    hamiltonian: CsrMatrix,
    psi: WalkState,
    t: float,
    tol: float = DEFAULT_TOLERANCE,
) -> WalkState:
    """Apply exp(-i * hamiltonian * t) to a vertex-basis state.

    The action is computed over s = ceil(||H||_inf * |t|) sub-steps; within
    each sub-step the Taylor series is truncated once the running term norm
    falls below tol * ||psi||.  Raises SeriesNotConverged if a sub-step
    exhausts its term budget first.
    """
    if not isinstance(psi.basis, VertexBasis):
        raise BasisMismatch("evolve_state expects a vertex-basis state")
    if psi.dim != hamiltonian.n_rows or hamiltonian.n_rows != hamiltonian.n_cols:
        raise DimensionMismatch(
            f"state dim {psi.dim} does not match Hamiltonian ({hamiltonian.n_rows}x{hamiltonian.n_cols})"
        )
    if not (tol > 0):
        raise ValueError("tol must be positive")
    if t == 0:
        return WalkState(psi.basis, psi.amplitudes)

    h_dev = move_to_device(engine, hamiltonian)
    substeps = max(1, math.ceil(_inf_norm(hamiltonian) * abs(t)))
    tau = t / substeps
    psi_norm = psi.norm()
    floor = tol * psi_norm

    current = psi.amplitudes
    for _ in range(substeps):
        acc = ComplexVector(current.copy())
        term = ComplexVector(current.copy())
        for k in range(1, _MAX_SERIES_TERMS + 1):
            hterm = matvec_mul(engine, move_to_device(engine, term), h_dev)
            term = vector_scale(engine, -1j * tau / k, move_to_device(engine, hterm))
            acc = vector_axpy(
                engine, 1.0, move_to_device(engine, term), move_to_device(engine, acc)
            )
            if vector_norm(engine, move_to_device(engine, term)) <= floor:
                break
        else:
            raise SeriesNotConverged(
                f"series did not reach tol={tol} within {_MAX_SERIES_TERMS} terms per sub-step"
            )
        current = acc.entries
    return WalkState(psi.basis, current)


def simulate(
    engine: Engine,
    spec: CtqwSpec,
    sim_range,
    psi0: WalkState,
    tol: float = DEFAULT_TOLERANCE,
) -> list[WalkState]:
    """States |psi(k * delta_t)> for each snapshot index k in the range.

    Each snapshot is evolved from the nearest prior snapshot (one evolve call
    of duration delta_t * step), never recomputed from t = 0.  psi0 must be
    normalized to within 1e-8.
    """
    rng = SimRange.coerce(sim_range)
    if not isinstance(psi0.basis, VertexBasis) or psi0.dim != spec.graph.n:
        raise BasisMismatch("initial state must be in the vertex basis of the graph")
    if abs(psi0.norm() - 1.0) > 1e-8:
        raise UnnormalizedInitialState(f"initial state norm {psi0.norm()} is not 1")

    h = build_hamiltonian(spec)
    states: list[WalkState] = []
    current = psi0
    current_k = 0
    for k in rng.indices():
        if k != current_k:
            current = evolve_state(engine, h, current, (k - current_k) * spec.delta_t, tol)
            current_k = k
        states.append(current)
    return states


def probability_distribution(states) -> list[np.ndarray]:
    """Per-vertex probabilities |<v|psi>|^2 for each vertex-basis state."""
    out = []
    for st in states:
        if not isinstance(st.basis, VertexBasis):
            raise BasisMismatch("expected vertex-basis states")
        out.append(np.abs(st.amplitudes) ** 2)
    return out
