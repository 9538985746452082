"""Homogeneous dense + sparse complex linear algebra with selectable engines.

All numeric state is double-precision complex (complex128).  Compute goes
through an :class:`Engine` — either the serial reference engine or a
multi-threaded CPU engine — and operands must be staged with
:func:`move_to_device` before use.  On CPU engines staging is a
validation/registration step with no copy; the call is kept mandatory so that
calling code stays portable to bridges where the movement is a real transfer.

Determinism contract: every output element of a matrix-vector product is
reduced by exactly one worker, in a fixed order that does not depend on how
rows are partitioned.  Serial and parallel engines therefore produce
bit-identical results for identical inputs, run after run.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence, Union

import numpy as np

from .errors import (
    AlreadyStopped,
    DimensionMismatch,
    EngineStopped,
    NonFiniteEntry,
    NotOnDevice,
    UnsupportedEngineKind,
)

__all__ = [
    "ComplexVector",
    "DenseMatrix",
    "CsrMatrix",
    "Engine",
    "EngineKind",
    "DeviceVector",
    "DeviceMatrix",
    "init_engine",
    "stop_engine",
    "move_to_device",
    "matvec_mul",
    "vector_axpy",
    "vector_scale",
    "vector_dot",
    "vector_norm",
    "vector_new",
    "vector_set",
    "matrix_new",
    "matrix_set",
    "csr_from_triplets",
]


def _check_finite(arr: np.ndarray) -> None:
    if not np.isfinite(arr).all():
        raise NonFiniteEntry("structure contains NaN or infinite entries")


# --------------------------------------------------------------------------
# value types
# --------------------------------------------------------------------------

@dataclass
class ComplexVector:
    """Dense vector of complex128 amplitudes."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.ndim != 1 or self.entries.size == 0:
            raise DimensionMismatch("vector must be one-dimensional and non-empty")

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass
class DenseMatrix:
    """Dense row-major complex128 matrix."""

    entries: np.ndarray

    def __post_init__(self):
        self.entries = np.asarray(self.entries, dtype=np.complex128)
        if self.entries.ndim != 2 or 0 in self.entries.shape:
            raise DimensionMismatch("matrix must be two-dimensional and non-empty")

    @property
    def n_rows(self) -> int:
        return self.entries.shape[0]

    @property
    def n_cols(self) -> int:
        return self.entries.shape[1]


@dataclass
class CsrMatrix:
    """Compressed-sparse-row complex128 matrix.

    Structural invariants (enforced by :func:`csr_from_triplets` and checked
    by :meth:`validate`): row_offsets starts at 0, is non-decreasing and ends
    at nnz; within each row the column indices are strictly increasing and
    less than n_cols.
    """

    n_rows: int
    n_cols: int
    row_offsets: np.ndarray
    col_indices: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        self.row_offsets = np.asarray(self.row_offsets, dtype=np.int64)
        self.col_indices = np.asarray(self.col_indices, dtype=np.int64)
        self.values = np.asarray(self.values, dtype=np.complex128)

    @property
    def nnz(self) -> int:
        return self.values.shape[0]

    def validate(self) -> None:
        if self.n_rows < 1 or self.n_cols < 1:
            raise DimensionMismatch("matrix dimensions must be positive")
        off = self.row_offsets
        if off.shape != (self.n_rows + 1,) or off[0] != 0 or off[-1] != self.nnz:
            raise DimensionMismatch("row_offsets inconsistent with nnz")
        if (np.diff(off) < 0).any():
            raise DimensionMismatch("row_offsets must be non-decreasing")
        if self.col_indices.shape != self.values.shape:
            raise DimensionMismatch("col_indices and values lengths differ")
        if self.nnz:
            if self.col_indices.min() < 0 or self.col_indices.max() >= self.n_cols:
                raise DimensionMismatch("column index out of range")
            rows = np.repeat(np.arange(self.n_rows), np.diff(off))
            keys = rows * self.n_cols + self.col_indices
            if (np.diff(keys) <= 0).any():
                raise DimensionMismatch("columns must be strictly increasing within rows")
        _check_finite(self.values)

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.n_rows, self.n_cols), dtype=np.complex128)
        rows = np.repeat(np.arange(self.n_rows), np.diff(self.row_offsets))
        out[rows, self.col_indices] = self.values
        return out


Matrix = Union[DenseMatrix, CsrMatrix]


# --------------------------------------------------------------------------
# constructors and setters
# --------------------------------------------------------------------------

def vector_new(dim: int) -> ComplexVector:
    """Allocate a zero vector of the given dimension."""
    if dim < 1:
        raise DimensionMismatch("vector dimension must be positive")
    return ComplexVector(np.zeros(dim, dtype=np.complex128))


def vector_set(vec: ComplexVector, i: int, re: float, im: float) -> None:
    """Set entry i to re + im*j.  Both components must be finite."""
    if not (0 <= i < vec.dim):
        raise DimensionMismatch(f"index {i} out of range for dim {vec.dim}")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise NonFiniteEntry("vector entries must be finite")
    vec.entries[i] = complex(re, im)


def matrix_new(n_rows: int, n_cols: int) -> DenseMatrix:
    """Allocate a zero dense matrix."""
    if n_rows < 1 or n_cols < 1:
        raise DimensionMismatch("matrix dimensions must be positive")
    return DenseMatrix(np.zeros((n_rows, n_cols), dtype=np.complex128))


def matrix_set(mat: DenseMatrix, i: int, j: int, re: float, im: float) -> None:
    """Set entry (i, j) to re + im*j.  Both components must be finite."""
    if not (0 <= i < mat.n_rows and 0 <= j < mat.n_cols):
        raise DimensionMismatch(f"index ({i}, {j}) out of range")
    if not (math.isfinite(re) and math.isfinite(im)):
        raise NonFiniteEntry("matrix entries must be finite")
    mat.entries[i, j] = complex(re, im)


def csr_from_triplets(
    n_rows: int,
    n_cols: int,
    rows: Sequence[int],
    cols: Sequence[int],
    values: Sequence[complex],
) -> CsrMatrix:
    """Assemble a CSR matrix from coordinate triplets.

    Triplets may arrive unsorted; duplicates of the same coordinate are merged
    by summation.  The result satisfies all CsrMatrix structural invariants.
    """
    if n_rows < 1 or n_cols < 1:
        raise DimensionMismatch("matrix dimensions must be positive")
    r = np.asarray(rows, dtype=np.int64)
    c = np.asarray(cols, dtype=np.int64)
    v = np.asarray(values, dtype=np.complex128)
    if not (r.shape == c.shape == v.shape) or r.ndim != 1:
        raise DimensionMismatch("triplet arrays must be 1-D and of equal length")
    if r.size:
        if r.min() < 0 or r.max() >= n_rows or c.min() < 0 or c.max() >= n_cols:
            raise DimensionMismatch("triplet coordinate out of range")
    _check_finite(v)

    if r.size == 0:
        return CsrMatrix(
            n_rows,
            n_cols,
            np.zeros(n_rows + 1, dtype=np.int64),
            np.empty(0, dtype=np.int64),
            np.empty(0, dtype=np.complex128),
        )

    keys = r * n_cols + c
    order = np.argsort(keys, kind="stable")
    uniq, first = np.unique(keys[order], return_index=True)
    summed = np.add.reduceat(v[order], first)
    out_rows = uniq // n_cols
    out_cols = uniq % n_cols
    counts = np.bincount(out_rows, minlength=n_rows)
    offsets = np.concatenate(([0], np.cumsum(counts))).astype(np.int64)
    return CsrMatrix(n_rows, n_cols, offsets, out_cols, summed)


# --------------------------------------------------------------------------
# engines
# --------------------------------------------------------------------------

class EngineKind(Enum):
    SERIAL = "serial"
    PARALLEL_CPU = "parallel"


def _resolve_kind(kind) -> EngineKind:
    if isinstance(kind, EngineKind):
        return kind
    try:
        return EngineKind(str(kind).lower())
    except ValueError:
        raise UnsupportedEngineKind(
            f"engine kind {kind!r} is not built in (available: serial, parallel)"
        ) from None


class Engine:
    """A compute engine; construct with :func:`init_engine`.

    The serial engine is the single-threaded reference.  The parallel engine
    keeps a thread pool and fans matrix-vector work out over contiguous
    output-row blocks; every other operation is elementwise and identical
    between the two.  One operation call at a time per engine; the parallel
    engine joins its workers before returning.
    """

    def __init__(self, kind: EngineKind, thread_count: int):
        self.kind = kind
        self.thread_count = thread_count
        self._stopped = False
        self._pool = (
            ThreadPoolExecutor(max_workers=thread_count)
            if kind is EngineKind.PARALLEL_CPU
            else None
        )

    @property
    def state(self) -> str:
        return "stopped" if self._stopped else "initialized"

    def _require_running(self) -> None:
        if self._stopped:
            raise EngineStopped("engine has been stopped")

    def __repr__(self):
        return f"Engine({self.kind.value}, threads={self.thread_count}, {self.state})"


def init_engine(kind="serial", thread_count: int | None = None) -> Engine:
    """Create an initialized engine.

    thread_count of None means "auto": the available hardware parallelism.
    The serial engine always runs one thread.
    """
    k = _resolve_kind(kind)
    if k is EngineKind.SERIAL:
        return Engine(k, 1)
    if thread_count is None:
        thread_count = os.cpu_count() or 1
    if thread_count < 1:
        raise ValueError("thread_count must be positive")
    return Engine(k, int(thread_count))


def stop_engine(engine: Engine) -> None:
    """Stop the engine and release its resources.  Stopping twice is an error."""
    if engine._stopped:
        raise AlreadyStopped("engine already stopped")
    engine._stopped = True
    if engine._pool is not None:
        engine._pool.shutdown(wait=True)
        engine._pool = None


# --------------------------------------------------------------------------
# device staging
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class DeviceVector:
    engine: Engine = field(repr=False)
    vector: ComplexVector

    @property
    def dim(self) -> int:
        return self.vector.dim


@dataclass(frozen=True)
class DeviceMatrix:
    engine: Engine = field(repr=False)
    matrix: Matrix

    @property
    def n_rows(self) -> int:
        return self.matrix.n_rows

    @property
    def n_cols(self) -> int:
        return self.matrix.n_cols


def move_to_device(engine: Engine, obj):
    """Stage a vector or matrix for compute on this engine.

    CPU engines register the object without copying, after validating that all
    entries are finite.  The host object stays visible through the handle, so
    setter calls made after the move are observed, matching the behaviour of
    a no-copy staging step.
    """
    engine._require_running()
    if isinstance(obj, ComplexVector):
        _check_finite(obj.entries)
        return DeviceVector(engine, obj)
    if isinstance(obj, DenseMatrix):
        _check_finite(obj.entries)
        return DeviceMatrix(engine, obj)
    if isinstance(obj, CsrMatrix):
        obj.validate()
        return DeviceMatrix(engine, obj)
    raise NotOnDevice(f"cannot move object of type {type(obj).__name__}")


def _take_vector(engine: Engine, h) -> np.ndarray:
    if not isinstance(h, DeviceVector):
        raise NotOnDevice("operand must be moved to the device first")
    if h.engine is not engine:
        raise NotOnDevice("operand was moved to a different engine")
    return h.vector.entries


def _take_matrix(engine: Engine, h) -> Matrix:
    if not isinstance(h, DeviceMatrix):
        raise NotOnDevice("operand must be moved to the device first")
    if h.engine is not engine:
        raise NotOnDevice("operand was moved to a different engine")
    return h.matrix


# --------------------------------------------------------------------------
# compute kernels
# --------------------------------------------------------------------------
#
# Row kernels compute output rows [lo, hi).  Each output element is a single
# sequential reduction over its row, so the result does not depend on the
# block decomposition — the basis of the serial/parallel equivalence.

def _dense_rows(m: np.ndarray, v: np.ndarray, lo: int, hi: int) -> np.ndarray:
    return np.einsum("ij,j->i", m[lo:hi], v)


def _csr_rows(m: CsrMatrix, v: np.ndarray, lo: int, hi: int) -> np.ndarray:
    start = int(m.row_offsets[lo])
    stop = int(m.row_offsets[hi])
    out = np.zeros(hi - lo, dtype=np.complex128)
    if start == stop:
        return out
    prod = m.values[start:stop] * v[m.col_indices[start:stop]]
    lens = np.diff(m.row_offsets[lo : hi + 1])
    nz = lens > 0
    out[nz] = np.add.reduceat(prod, m.row_offsets[lo:hi][nz] - start)
    return out


def _row_blocks(n_rows: int, parts: int) -> list[tuple[int, int]]:
    bounds = np.linspace(0, n_rows, parts + 1).astype(int)
    return [(int(a), int(b)) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def matvec_mul(engine: Engine, v: DeviceVector, m: DeviceMatrix) -> ComplexVector:
    """Return w = M @ v for a dense or CSR matrix handle."""
    engine._require_running()
    vec = _take_vector(engine, v)
    mat = _take_matrix(engine, m)
    if mat.n_cols != vec.shape[0]:
        raise DimensionMismatch(
            f"matrix has {mat.n_cols} columns but vector has dim {vec.shape[0]}"
        )
    if isinstance(mat, DenseMatrix):
        kernel = lambda lo, hi: _dense_rows(mat.entries, vec, lo, hi)
    else:
        kernel = lambda lo, hi: _csr_rows(mat, vec, lo, hi)

    if engine.kind is EngineKind.SERIAL or engine.thread_count == 1:
        return ComplexVector(kernel(0, mat.n_rows))
    blocks = _row_blocks(mat.n_rows, engine.thread_count)
    pieces = list(engine._pool.map(lambda b: kernel(*b), blocks))
    return ComplexVector(np.concatenate(pieces))


def vector_axpy(
    engine: Engine, alpha: complex, x: DeviceVector, y: DeviceVector
) -> ComplexVector:
    """Return y + alpha * x."""
    engine._require_running()
    xe = _take_vector(engine, x)
    ye = _take_vector(engine, y)
    if xe.shape != ye.shape:
        raise DimensionMismatch("axpy operands must have equal dimension")
    return ComplexVector(ye + complex(alpha) * xe)


def vector_scale(engine: Engine, alpha: complex, x: DeviceVector) -> ComplexVector:
    """Return alpha * x."""
    engine._require_running()
    return ComplexVector(complex(alpha) * _take_vector(engine, x))


def vector_dot(engine: Engine, x: DeviceVector, y: DeviceVector) -> complex:
    """Return the inner product conj(x) . y."""
    engine._require_running()
    xe = _take_vector(engine, x)
    ye = _take_vector(engine, y)
    if xe.shape != ye.shape:
        raise DimensionMismatch("dot operands must have equal dimension")
    return complex(np.vdot(xe, ye))


def vector_norm(engine: Engine, x: DeviceVector) -> float:
    """Return the Euclidean norm of x."""
    engine._require_running()
    return float(np.linalg.norm(_take_vector(engine, x)))
