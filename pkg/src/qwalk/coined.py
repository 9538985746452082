"""Discrete-time coined quantum walk on the arc basis.

One step applies the evolution operator U = S C: the coin C first (block
diagonal in the canonical arc ordering, one block per vertex acting on its
outgoing arcs), then the shift S (a permutation of arcs).  Two shifts are
provided: the flip-flop shift S|v,w> = |w,v>, valid on any graph, and the
persistent (direction-preserving) shift defined on cycles, lines and periodic
grids.  Marked vertices can replace their coin block by -identity, the
standard search oracle construction.

Since S is a permutation, U is assembled by permuting the rows of C; the
product is therefore exactly the composition S @ C.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import (
    ComplexVector,
    CsrMatrix,
    Engine,
    csr_from_triplets,
    matvec_mul,
    move_to_device,
)
from .errors import (
    BasisMismatch,
    MarkedVertexOutOfRange,
    UnnormalizedInitialState,
    UnsupportedGraphForPersistentShift,
)
from .graphs import ArcBasis, Graph, arc_basis, arc_index
from .state import SimRange, WalkState

__all__ = [
    "CoinedSpec",
    "SHIFTS",
    "COINS",
    "MARKED_POLICIES",
    "flip_flop_shift",
    "persistent_shift",
    "grover_coin",
    "apply_marked_policy",
    "evolution_operator",
    "ket",
    "simulate",
    "probability_distribution",
]

SHIFTS = ("flipflop", "persistent")
COINS = ("grover",)
MARKED_POLICIES = ("minus_identity", "none")


@dataclass(frozen=True)
class CoinedSpec:
    """Parameters of a coined walk."""

    graph: Graph
    shift: str = "flipflop"
    coin: str = "grover"
    marked: frozenset[int] = frozenset()
    marked_policy: str = "none"

    def __post_init__(self):
        if self.shift not in SHIFTS:
            raise ValueError(f"shift: unknown shift {self.shift!r} (expected one of {SHIFTS})")
        if self.coin not in COINS:
            raise ValueError(f"coin: unknown coin {self.coin!r} (expected one of {COINS})")
        if self.marked_policy not in MARKED_POLICIES:
            raise ValueError(
                f"marked_policy: unknown policy {self.marked_policy!r}"
                f" (expected one of {MARKED_POLICIES})"
            )
        object.__setattr__(self, "marked", frozenset(int(v) for v in self.marked))
        for v in self.marked:
            if not (0 <= v < self.graph.n):
                raise MarkedVertexOutOfRange(f"marked vertex {v} not in 0..{self.graph.n - 1}")
        if self.marked and self.marked_policy == "none":
            raise ValueError("marked_policy: must be 'minus_identity' when vertices are marked")
        if self.shift == "persistent" and self.graph.kind not in ("cycle", "line", "grid"):
            raise UnsupportedGraphForPersistentShift(
                f"persistent shift is undefined on {self.graph.kind!r} graphs"
            )


def _permutation_csr(targets: np.ndarray) -> CsrMatrix:
    """Permutation matrix sending basis vector j to basis vector targets[j]."""
    dim = targets.shape[0]
    return csr_from_triplets(dim, dim, targets, np.arange(dim), np.ones(dim, dtype=complex))


def flip_flop_shift(basis: ArcBasis) -> CsrMatrix:
    """Arc-reversal permutation: (v, w) -> (w, v).  An involution."""
    targets = np.array(
        [arc_index(basis, int(w), int(v)) for v, w in basis.arcs], dtype=np.int64
    )
    return _permutation_csr(targets)


def _persistent_targets(basis: ArcBasis) -> np.ndarray:
    g = basis.graph
    kind = g.kind
    targets = np.empty(basis.size, dtype=np.int64)

    if kind == "cycle":
        n = g.params[0]
        for i, (v, w) in enumerate(basis.arcs):
            d = (int(w) - int(v)) % n  # 1 forward, n-1 backward
            targets[i] = arc_index(basis, int(w), (int(w) + d) % n)
        return targets

    if kind == "line":
        for i, (v, w) in enumerate(basis.arcs):
            d = int(w) - int(v)  # +1 or -1
            nxt = int(w) + d
            if 0 <= nxt < g.n:
                targets[i] = arc_index(basis, int(w), nxt)
            else:
                targets[i] = arc_index(basis, int(w), int(v))  # reflect at the end
        return targets

    # periodic grid; direction is unambiguous only when both sides are >= 3
    nx, ny, periodic = g.params
    if not periodic:
        raise UnsupportedGraphForPersistentShift("persistent shift requires a periodic grid")
    if nx < 3 or ny < 3:
        raise UnsupportedGraphForPersistentShift(
            "persistent shift on a periodic grid requires nx, ny >= 3"
        )
    for i, (v, w) in enumerate(basis.arcs):
        vx, vy = int(v) % nx, int(v) // nx
        wx, wy = int(w) % nx, int(w) // nx
        dx = (wx - vx) % nx
        dy = (wy - vy) % ny
        if dy == 0:
            step_x = 1 if dx == 1 else -1
            tx, ty = (wx + step_x) % nx, wy
        else:
            step_y = 1 if dy == 1 else -1
            tx, ty = wx, (wy + step_y) % ny
        targets[i] = arc_index(basis, int(w), tx + nx * ty)
    return targets


def persistent_shift(basis: ArcBasis) -> CsrMatrix:
    """Direction-preserving shift.

    On a cycle, (v, v+1) -> (v+1, v+2) and (v, v-1) -> (v-1, v-2) mod n; on a
    periodic grid the arc pointing in lattice direction d from a cell maps to
    the arc pointing in d from the neighbour in direction d; on a line the
    endpoints reflect the travel direction.  Defined only for those families.
    """
    if basis.graph.kind not in ("cycle", "line", "grid"):
        raise UnsupportedGraphForPersistentShift(
            f"persistent shift is undefined on {basis.graph.kind!r} graphs"
        )
    return _permutation_csr(_persistent_targets(basis))


def grover_coin(basis: ArcBasis) -> CsrMatrix:
    """Block-diagonal Grover coin.

    The block of a degree-d vertex is (2/d) J - I on its contiguous arc span;
    degree-1 vertices get the scalar block +1 and isolated vertices contribute
    no arcs.  The result is unitary and symmetric.
    """
    offs = basis.tail_offsets
    rows, cols, vals = [], [], []
    for v in range(basis.graph.n):
        start, stop = int(offs[v]), int(offs[v + 1])
        d = stop - start
        if d == 0:
            continue
        for i in range(start, stop):
            for j in range(start, stop):
                val = 2.0 / d - (1.0 if i == j else 0.0)
                if val != 0.0:  # the degree-2 block has an exactly zero diagonal
                    vals.append(val)
                    rows.append(i)
                    cols.append(j)
    return csr_from_triplets(basis.size, basis.size, rows, cols, vals)


def apply_marked_policy(
    coin: CsrMatrix, basis: ArcBasis, marked, policy: str = "minus_identity"
) -> CsrMatrix:
    """Replace the coin block of each marked vertex according to the policy.

    'minus_identity' substitutes -I on the marked vertex's arc span; 'none'
    returns the coin unchanged.
    """
    if policy == "none" or not marked:
        return coin
    if policy != "minus_identity":
        raise ValueError(f"marked_policy: unknown policy {policy!r}")
    marked = frozenset(int(v) for v in marked)
    for v in marked:
        if not (0 <= v < basis.graph.n):
            raise MarkedVertexOutOfRange(f"marked vertex {v} not in 0..{basis.graph.n - 1}")
    offs = basis.tail_offsets
    in_marked_span = np.zeros(basis.size, dtype=bool)
    for v in marked:
        in_marked_span[offs[v] : offs[v + 1]] = True

    rows = np.repeat(np.arange(coin.n_rows), np.diff(coin.row_offsets))
    keep = ~in_marked_span[rows]
    new_rows = list(rows[keep])
    new_cols = list(coin.col_indices[keep])
    new_vals = list(coin.values[keep])
    for v in sorted(marked):
        for i in range(int(offs[v]), int(offs[v + 1])):
            new_rows.append(i)
            new_cols.append(i)
            new_vals.append(-1.0)
    return csr_from_triplets(coin.n_rows, coin.n_cols, new_rows, new_cols, new_vals)


def _shift_targets(spec: CoinedSpec, basis: ArcBasis) -> np.ndarray:
    if spec.shift == "flipflop":
        return np.array(
            [arc_index(basis, int(w), int(v)) for v, w in basis.arcs], dtype=np.int64
        )
    return _persistent_targets(basis)


def evolution_operator(engine: Engine, spec: CoinedSpec) -> CsrMatrix:
    """Sparse one-step operator U = S C (coin first, then shift)."""
    basis = arc_basis(spec.graph)
    coin = grover_coin(basis)
    coin = apply_marked_policy(coin, basis, spec.marked, spec.marked_policy)
    targets = _shift_targets(spec, basis)
    # row k of C becomes row targets[k] of U
    rows = np.repeat(targets, np.diff(coin.row_offsets))
    return csr_from_triplets(basis.size, basis.size, rows, coin.col_indices, coin.values)


def ket(spec: CoinedSpec | Graph, v: int, w: int) -> WalkState:
    """Arc-basis computational state |v, w>."""
    g = spec if isinstance(spec, Graph) else spec.graph
    basis = arc_basis(g)
    amp = np.zeros(basis.size, dtype=np.complex128)
    amp[arc_index(basis, v, w)] = 1.0
    return WalkState(basis, amp)


def simulate(engine: Engine, spec: CoinedSpec, sim_range, psi0: WalkState) -> list[WalkState]:
    """States U**k psi0 for each step count k in the range.

    Snapshots are advanced from the nearest prior snapshot by repeated sparse
    matrix-vector products; powers of U are never materialized.
    """
    rng = SimRange.coerce(sim_range)
    basis = arc_basis(spec.graph)
    if not isinstance(psi0.basis, ArcBasis) or psi0.basis != basis:
        raise BasisMismatch("initial state must be in the arc basis of the graph")
    if abs(psi0.norm() - 1.0) > 1e-8:
        raise UnnormalizedInitialState(f"initial state norm {psi0.norm()} is not 1")

    u_dev = move_to_device(engine, evolution_operator(engine, spec))
    states: list[WalkState] = []
    current = psi0.amplitudes
    current_k = 0
    for k in rng.indices():
        for _ in range(k - current_k):
            current = matvec_mul(engine, move_to_device(engine, ComplexVector(current)), u_dev).entries
        current_k = k
        states.append(WalkState(basis, current))
    return states


def probability_distribution(spec: CoinedSpec | Graph, states) -> list[np.ndarray]:
    """Vertex marginals: p[v] = sum over arcs (v, w) of |amplitude|^2."""
    g = spec if isinstance(spec, Graph) else spec.graph
    offs = g.adjacency.row_offsets
    lens = np.diff(offs)
    nz = lens > 0
    out = []
    for st in states:
        if not isinstance(st.basis, ArcBasis):
            raise BasisMismatch("expected arc-basis states")
        if st.dim != g.num_arcs:
            raise BasisMismatch(
                f"state dim {st.dim} does not match the graph's {g.num_arcs} arcs"
            )
        mags = np.abs(st.amplitudes) ** 2
        p = np.zeros(g.n)
        if mags.size:
            p[nz] = np.add.reduceat(mags, offs[:-1][nz])
        out.append(p)
    return out
