"""Graph construction and the canonical arc enumeration.

Graphs are simple and undirected: the adjacency matrix is a symmetric 0/1
pattern with a zero diagonal, stored as CSR with all values exactly 1.  Arcs
are the directed instances of the edges, ordered tail-major then head-minor
(exactly lexicographic), which makes the arcs of each vertex a contiguous
index span — the property the coined-walk coin relies on.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .backend import CsrMatrix, csr_from_triplets
from .errors import (
    IndexOutOfRange,
    NonSquare,
    NotAnArc,
    NotSymmetric,
    SelfLoopPresent,
    SizeTooSmall,
    VertexOutOfRange,
    WeightedAdjacency,
)

__all__ = [
    "Graph",
    "ArcBasis",
    "graph_from_adjacency",
    "graph_from_edges",
    "cycle",
    "line",
    "grid",
    "hypercube",
    "neighbors",
    "degree",
    "arc_basis",
    "arc_index",
    "arc_at",
]


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph with a validated CSR adjacency pattern.

    kind records the construction family ("generic", "cycle", "line", "grid",
    "hypercube"); params carries the family parameters, e.g. (nx, ny, periodic)
    for a grid.  Instances are immutable and freely shareable across threads.
    """

    n: int
    adjacency: CsrMatrix
    kind: str = "generic"
    params: tuple = ()

    @property
    def num_edges(self) -> int:
        return self.adjacency.nnz // 2

    @property
    def num_arcs(self) -> int:
        return self.adjacency.nnz


def _validate_pattern(a: CsrMatrix) -> None:
    if a.n_rows != a.n_cols:
        raise NonSquare(f"adjacency is {a.n_rows}x{a.n_cols}")
    a.validate()
    if a.nnz == 0:
        return
    if not np.all(a.values == 1.0):
        raise WeightedAdjacency("adjacency entries must all be exactly 1")
    rows = np.repeat(np.arange(a.n_rows), np.diff(a.row_offsets))
    if np.any(rows == a.col_indices):
        raise SelfLoopPresent("adjacency diagonal must be zero")
    fwd = rows * a.n_cols + a.col_indices
    rev = a.col_indices * a.n_cols + rows
    if not np.array_equal(np.sort(fwd), np.sort(rev)):
        raise NotSymmetric("adjacency pattern must be symmetric")


def graph_from_adjacency(a, kind: str = "generic", params: tuple = ()) -> Graph:
    """Build a graph from an adjacency matrix (CSR or square array-like).

    Entries are interpreted as unweighted presence and must be exactly 1;
    the pattern must be symmetric with a zero diagonal.
    """
    if isinstance(a, CsrMatrix):
        m = a
    else:
        arr = np.asarray(a)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise NonSquare(f"adjacency has shape {arr.shape}")
        r, c = np.nonzero(arr)
        m = csr_from_triplets(arr.shape[0], arr.shape[1], r, c, arr[r, c].astype(complex))
    _validate_pattern(m)
    return Graph(m.n_rows, m, kind, params)


def graph_from_edges(n: int, edges, kind: str = "generic", params: tuple = ()) -> Graph:
    """Build a graph on n vertices from an iterable of (v, w) edges."""
    rows, cols = [], []
    for v, w in edges:
        rows += [v, w]
        cols += [w, v]
    a = csr_from_triplets(n, n, rows, cols, np.ones(len(rows), dtype=complex))
    # parallel (duplicate) edges would merge to a value of 2 and be rejected
    _validate_pattern(a)
    return Graph(n, a, kind, params)


def cycle(n: int) -> Graph:
    """Cycle graph: vertex v adjacent to (v ± 1) mod n.  Requires n >= 3."""
    if n < 3:
        raise SizeTooSmall("cycle requires n >= 3")
    return graph_from_edges(n, [(v, (v + 1) % n) for v in range(n)], "cycle", (n,))


def line(n: int) -> Graph:
    """Path graph on n vertices.  Requires n >= 2."""
    if n < 2:
        raise SizeTooSmall("line requires n >= 2")
    return graph_from_edges(n, [(v, v + 1) for v in range(n - 1)], "line", (n,))


def grid(nx: int, ny: int, periodic: bool = True) -> Graph:
    """Two-dimensional lattice with vertex id x + nx*y.

    Each vertex is adjacent to its four axis neighbours; with periodic=True
    (the default) the edges wrap, giving a regular degree-4 torus for
    nx, ny >= 3.  Requires nx, ny >= 2.
    """
    if nx < 2 or ny < 2:
        raise SizeTooSmall("grid requires nx, ny >= 2")
    edges = set()
    for y in range(ny):
        for x in range(nx):
            v = x + nx * y
            if x + 1 < nx:
                edges.add((v, v + 1))
            elif periodic:
                edges.add((min(v, nx * y), max(v, nx * y)))
            if y + 1 < ny:
                edges.add((v, v + nx))
            elif periodic:
                edges.add((min(v, x), max(v, x)))
    return graph_from_edges(nx * ny, sorted(edges), "grid", (nx, ny, periodic))


def hypercube(dim: int) -> Graph:
    """Hypercube graph: 2**dim vertices, adjacent iff Hamming distance 1."""
    if dim < 1:
        raise SizeTooSmall("hypercube requires dim >= 1")
    n = 1 << dim
    edges = [(v, v ^ (1 << b)) for v in range(n) for b in range(dim) if v < v ^ (1 << b)]
    return graph_from_edges(n, edges, "hypercube", (dim,))


def neighbors(g: Graph, v: int) -> np.ndarray:
    """Ascending neighbour ids of vertex v."""
    if not (0 <= v < g.n):
        raise VertexOutOfRange(f"vertex {v} not in 0..{g.n - 1}")
    a = g.adjacency
    return a.col_indices[a.row_offsets[v] : a.row_offsets[v + 1]].copy()


def degree(g: Graph, v: int) -> int:
    """Number of neighbours of vertex v."""
    if not (0 <= v < g.n):
        raise VertexOutOfRange(f"vertex {v} not in 0..{g.n - 1}")
    a = g.adjacency
    return int(a.row_offsets[v + 1] - a.row_offsets[v])


class ArcBasis:
    """Ordered enumeration of all arcs (tail, head) of a graph.

    Arcs are sorted by tail ascending, then head ascending; the basis size is
    twice the edge count.  Equality is structural (same arc list), so states
    built from independently constructed bases of the same graph compose.
    """

    def __init__(self, graph: Graph):
        self.graph = graph
        a = graph.adjacency
        tails = np.repeat(np.arange(graph.n, dtype=np.int64), np.diff(a.row_offsets))
        self.arcs = np.column_stack((tails, a.col_indices))
        self.arcs.setflags(write=False)
        self._index = {
            (int(v), int(w)): i for i, (v, w) in enumerate(self.arcs)
        }

    @property
    def size(self) -> int:
        return self.arcs.shape[0]

    @property
    def tail_offsets(self) -> np.ndarray:
        """Arc-index span of vertex v is [tail_offsets[v], tail_offsets[v+1])."""
        return self.graph.adjacency.row_offsets

    def __eq__(self, other):
        return isinstance(other, ArcBasis) and (
            self is other or np.array_equal(self.arcs, other.arcs)
        )

    def __hash__(self):
        return hash((self.graph.n, self.size))

    def __repr__(self):
        return f"ArcBasis(n={self.graph.n}, arcs={self.size})"


def arc_basis(g: Graph) -> ArcBasis:
    """The canonical arc basis of g."""
    return ArcBasis(g)


def arc_index(b: ArcBasis, v: int, w: int) -> int:
    """Position of arc (v, w) in the basis."""
    try:
        return b._index[(int(v), int(w))]
    except KeyError:
        raise NotAnArc(f"({v}, {w}) is not an arc of the graph") from None


def arc_at(b: ArcBasis, idx: int) -> tuple[int, int]:
    """The (tail, head) pair at basis position idx."""
    if not (0 <= idx < b.size):
        raise IndexOutOfRange(f"arc index {idx} not in 0..{b.size - 1}")
    v, w = b.arcs[idx]
    return int(v), int(w)
