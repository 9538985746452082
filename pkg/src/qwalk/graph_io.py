"""Adjacency ingestion from files.

Two formats are accepted: Matrix Market coordinate files (pattern or real,
general or symmetric) and JSON edge lists of the form
{"n": <vertex count>, "edges": [[v, w], ...]}.  Both are funnelled through
graph_from_adjacency, so every structural rule (symmetry, zero diagonal,
unit weights) applies regardless of source.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import scipy.io
import scipy.sparse

from .backend import csr_from_triplets
from .errors import ConfigError
from .graphs import Graph, graph_from_adjacency

__all__ = ["load_matrix_market", "load_edge_list_json", "load_graph_file"]


def load_matrix_market(path) -> Graph:
    """Read a Matrix Market coordinate file as a graph adjacency."""
    try:
        m = scipy.io.mmread(path)
    except Exception as exc:
        raise ConfigError("graph.file", f"cannot parse Matrix Market file {path}: {exc}") from exc
    coo = scipy.sparse.coo_matrix(m)
    if coo.shape[0] != coo.shape[1]:
        raise ConfigError("graph.file", f"matrix in {path} is not square")
    adj = csr_from_triplets(
        coo.shape[0], coo.shape[1], coo.row, coo.col, coo.data.astype(complex)
    )
    return graph_from_adjacency(adj)


def load_edge_list_json(path) -> Graph:
    """Read a {"n": int, "edges": [[v, w], ...]} JSON file as a graph."""
    with open(path, "r", encoding="utf-8") as f:
        try:
            data = json.load(f)
        except json.JSONDecodeError as exc:
            raise ConfigError("graph.file", f"cannot parse JSON in {path}: {exc}") from exc
    if not isinstance(data, dict) or set(data) != {"n", "edges"}:
        raise ConfigError("graph.file", 'edge list must be {"n": int, "edges": [[v, w], ...]}')
    n = data["n"]
    edges = data["edges"]
    if not isinstance(n, int) or n < 1:
        raise ConfigError("graph.file", '"n" must be a positive integer')
    rows, cols = [], []
    for e in edges:
        if not (isinstance(e, list) and len(e) == 2):
            raise ConfigError("graph.file", f"malformed edge {e!r}")
        v, w = e
        rows += [v, w]
        cols += [w, v]
    adj = csr_from_triplets(n, n, rows, cols, np.ones(len(rows), dtype=complex))
    return graph_from_adjacency(adj)


def load_graph_file(path, fmt: str | None = None) -> Graph:
    """Load a graph file, sniffing the format from the extension if needed."""
    if fmt is None:
        suffix = Path(path).suffix.lower()
        fmt = {"": "mtx", ".mtx": "mtx", ".json": "edges"}.get(suffix)
        if fmt is None:
            raise ConfigError("graph.format", f"cannot infer format of {path}; specify it")
    if fmt == "mtx":
        return load_matrix_market(path)
    if fmt == "edges":
        return load_edge_list_json(path)
    raise ConfigError("graph.format", f"unknown graph file format {fmt!r}")
