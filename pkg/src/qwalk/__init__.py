"""Quantum walks on graphs over a pluggable complex linear-algebra backend.

Continuous-time walks evolve a vertex-basis state under exp(-i H t) with
H = -gamma A - sum of marked-vertex projectors; coined discrete-time walks
evolve an arc-basis state one step at a time under U = S C.  All numerics run
through the engine layer in :mod:`qwalk.backend`, which provides dense and
CSR sparse complex containers behind serial and multi-threaded CPU engines.
"""

from . import backend, coined, ctqw, graphs, plotting
from .backend import (
    ComplexVector,
    CsrMatrix,
    DenseMatrix,
    Engine,
    EngineKind,
    csr_from_triplets,
    init_engine,
    matvec_mul,
    move_to_device,
    stop_engine,
)
from .coined import CoinedSpec
from .ctqw import CtqwSpec
from .errors import QuantumWalkError
from .graphs import (
    Graph,
    arc_basis,
    cycle,
    graph_from_adjacency,
    grid,
    hypercube,
    line,
)
from .state import SimRange, VertexBasis, WalkState

__version__ = "0.1.0"

__all__ = [
    "backend",
    "graphs",
    "ctqw",
    "coined",
    "plotting",
    "ComplexVector",
    "DenseMatrix",
    "CsrMatrix",
    "Engine",
    "EngineKind",
    "init_engine",
    "stop_engine",
    "move_to_device",
    "matvec_mul",
    "csr_from_triplets",
    "Graph",
    "graph_from_adjacency",
    "cycle",
    "line",
    "grid",
    "hypercube",
    "arc_basis",
    "CtqwSpec",
    "CoinedSpec",
    "SimRange",
    "VertexBasis",
    "WalkState",
    "QuantumWalkError",
    "__version__",
]
