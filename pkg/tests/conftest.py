"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the library's compute paths: evolution is
checked against a dense Hermitian eigendecomposition, coined steps against
dense operators assembled directly from their definitions, and arc ordering
against a plain sort.
"""

from __future__ import annotations

import numpy as np
import pytest

from qwalk import backend as B
from qwalk import graphs as G


@pytest.fixture
def serial_engine():
    eng = B.init_engine("serial")
    yield eng
    if eng.state == "initialized":
        B.stop_engine(eng)


@pytest.fixture
def parallel_engine():
    eng = B.init_engine("parallel", 4)
    yield eng
    if eng.state == "initialized":
        B.stop_engine(eng)


# --------------------------------------------------------------------------
# random instances
# --------------------------------------------------------------------------

def random_connected_graph(rng: np.random.Generator, max_n: int = 32) -> G.Graph:
    """Random spanning tree plus extra edges; always connected, no self loops."""
    n = int(rng.integers(2, max_n + 1))
    edges = set()
    order = rng.permutation(n)
    for i in range(1, n):
        a, b = int(order[i]), int(order[int(rng.integers(0, i))])
        edges.add((min(a, b), max(a, b)))
    extra = int(rng.integers(0, n))
    for _ in range(extra):
        a, b = int(rng.integers(0, n)), int(rng.integers(0, n))
        if a != b:
            edges.add((min(a, b), max(a, b)))
    return G.graph_from_edges(n, sorted(edges))


def random_graph_with_arc_bound(rng: np.random.Generator, max_arcs: int = 64) -> G.Graph:
    """Random simple graph with at least one edge and 2|E| <= max_arcs."""
    n = int(rng.integers(2, 13))
    max_edges = max_arcs // 2
    candidates = [(a, b) for a in range(n) for b in range(a + 1, n)]
    rng.shuffle(candidates)
    k = int(rng.integers(1, min(len(candidates), max_edges) + 1))
    return G.graph_from_edges(n, sorted(candidates[:k]))


def random_unit_vector(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


# --------------------------------------------------------------------------
# continuous-time oracle
# --------------------------------------------------------------------------

def dense_hamiltonian(g: G.Graph, gamma: float, marked=()) -> np.ndarray:
    h = -gamma * g.adjacency.to_dense()
    for v in marked:
        h[v, v] += -1.0
    return h


def eigh_evolve(h_dense: np.ndarray, psi: np.ndarray, t: float) -> np.ndarray:
    """exp(-i H t) psi via full Hermitian eigendecomposition."""
    w, v = np.linalg.eigh(h_dense)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi))


# --------------------------------------------------------------------------
# coined oracle
# --------------------------------------------------------------------------

def sorted_arcs(g: G.Graph) -> list[tuple[int, int]]:
    dense = g.adjacency.to_dense().real
    arcs = [(v, w) for v in range(g.n) for w in range(g.n) if dense[v, w] != 0]
    return sorted(arcs)


def dense_flip_flop(g: G.Graph) -> np.ndarray:
    arcs = sorted_arcs(g)
    pos = {a: i for i, a in enumerate(arcs)}
    s = np.zeros((len(arcs), len(arcs)), dtype=complex)
    for (v, w), j in pos.items():
        s[pos[(w, v)], j] = 1.0
    return s


def dense_grover_coin(g: G.Graph) -> np.ndarray:
    arcs = sorted_arcs(g)
    pos = {a: i for i, a in enumerate(arcs)}
    c = np.zeros((len(arcs), len(arcs)), dtype=complex)
    for v in range(g.n):
        nbrs = [w for (t_, w) in arcs if t_ == v]
        d = len(nbrs)
        for w in nbrs:
            for w2 in nbrs:
                c[pos[(v, w2)], pos[(v, w)]] = 2.0 / d - (1.0 if w == w2 else 0.0)
    return c


def dense_coined_step(g: G.Graph, marked=()) -> np.ndarray:
    """Dense flip-flop Grover step operator, with -I blocks at marked vertices."""
    s = dense_flip_flop(g)
    c = dense_grover_coin(g)
    if marked:
        arcs = sorted_arcs(g)
        for i, (v, _) in enumerate(arcs):
            if v in marked:
                c[i, :] = 0.0
                c[i, i] = -1.0
    return s @ c
