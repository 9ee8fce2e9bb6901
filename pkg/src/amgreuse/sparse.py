"""Compressed sparse row storage and the kernels built on it.

Every operator in the package (fine matrix, transfer operators, coarse
matrices) is a :class:`CsrMatrix`.  Matrix products are split into a
symbolic phase, which only computes the nonzero pattern, and a numeric
phase that fills values into a given pattern.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, SparseFormatError


def _frozen(a, dtype):
    # takes ownership: a contiguous array of the right dtype is frozen in place
    a = np.ascontiguousarray(a, dtype=dtype)
    if a.flags.writeable:
        a.flags.writeable = False
    return a


def _check_structure(nrows, ncols, row_ptr, col_idx):
    if nrows < 0 or ncols < 0:
        raise SparseFormatError(f"negative dimensions {nrows}x{ncols}")
    if row_ptr.shape != (nrows + 1,):
        raise SparseFormatError(f"row_ptr has length {row_ptr.shape[0]}, expected {nrows + 1}")
    if row_ptr[0] != 0:
        raise SparseFormatError("row_ptr[0] must be 0")
    if np.any(np.diff(row_ptr) < 0):
        raise SparseFormatError("row_ptr is not non-decreasing")
    if row_ptr[-1] != col_idx.shape[0]:
        raise SparseFormatError(f"row_ptr[-1] = {row_ptr[-1]} but {col_idx.shape[0]} column indices given")
    if col_idx.size:
        if col_idx.min() < 0 or col_idx.max() >= ncols:
            raise SparseFormatError("column index out of range")
        # strictly increasing inside each row; row starts are exempt
        step = np.diff(col_idx)
        row_start = np.zeros(col_idx.size, dtype=bool)
        row_start[row_ptr[:-1][row_ptr[:-1] < col_idx.size]] = True
        bad = (step <= 0) & ~row_start[1:]
        if np.any(bad):
            p = int(np.flatnonzero(bad)[0]) + 1
            row = int(np.searchsorted(row_ptr, p, side="right")) - 1
            raise SparseFormatError(f"column indices in row {row} are not strictly increasing")


@dataclass(frozen=True, eq=False)
class Pattern:
    """Nonzero structure of a sparse matrix without values."""

    nrows: int
    ncols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "row_ptr", _frozen(self.row_ptr, np.int64))
        object.__setattr__(self, "col_idx", _frozen(self.col_idx, np.int64))

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    def validate(self):
        _check_structure(self.nrows, self.ncols, self.row_ptr, self.col_idx)
        return self

    def entries(self):
        """Set of (row, col) positions."""
        rows = np.repeat(np.arange(self.nrows), np.diff(self.row_ptr))
        return set(zip(rows.tolist(), self.col_idx.tolist()))

    def __eq__(self, other):
        if not isinstance(other, Pattern):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.row_ptr, other.row_ptr)
                and np.array_equal(self.col_idx, other.col_idx))

    __hash__ = None


@dataclass(frozen=True, eq=False)
class CsrMatrix:
    """Immutable CSR matrix with float64 values.

    Column indices are sorted and unique within each row.  Explicit zeros
    are allowed.  The arrays are marked read-only on construction.
    """

    nrows: int
    ncols: int
    row_ptr: np.ndarray
    col_idx: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "nrows", int(self.nrows))
        object.__setattr__(self, "ncols", int(self.ncols))
        object.__setattr__(self, "row_ptr", _frozen(self.row_ptr, np.int64))
        object.__setattr__(self, "col_idx", _frozen(self.col_idx, np.int64))
        object.__setattr__(self, "values", _frozen(self.values, np.float64))
        if self.values.shape != self.col_idx.shape:
            raise SparseFormatError(
                f"{self.values.shape[0]} values for {self.col_idx.shape[0]} column indices")

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    @property
    def nnz(self):
        return int(self.row_ptr[-1])

    @property
    def pattern(self):
        return Pattern(self.nrows, self.ncols, self.row_ptr, self.col_idx)

    def validate(self):
        _check_structure(self.nrows, self.ncols, self.row_ptr, self.col_idx)
        return self

    def diagonal(self):
        d, _ = _kernels.diagonal(self.row_ptr, self.col_idx, self.values, min(self.shape))
        return d

    def row_indices(self):
        return np.repeat(np.arange(self.nrows, dtype=np.int64), np.diff(self.row_ptr))

    def to_dense(self):
        out = np.zeros(self.shape)
        out[self.row_indices(), self.col_idx] = self.values
        return out

    def scaled(self, alpha):
        return CsrMatrix(self.nrows, self.ncols, self.row_ptr, self.col_idx, alpha * self.values)

    def to_scipy(self):
        import scipy.sparse as sp
        return sp.csr_matrix((self.values, self.col_idx, self.row_ptr), shape=self.shape)

    @classmethod
    def from_scipy(cls, m):
        m = m.tocsr(copy=True)
        m.sum_duplicates()
        m.sort_indices()
        return cls(m.shape[0], m.shape[1], m.indptr, m.indices, m.data).validate()

    @classmethod
    def from_dense(cls, a, keep_zeros=False):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2:
            raise DimensionMismatch(f"expected a 2-d array, got shape {a.shape}")
        mask = np.ones(a.shape, dtype=bool) if keep_zeros else a != 0
        counts = mask.sum(axis=1)
        row_ptr = np.concatenate(([0], np.cumsum(counts)))
        cols = np.nonzero(mask)[1]
        return cls(a.shape[0], a.shape[1], row_ptr, cols, a[mask])

    def identical(self, other):
        """Bit-for-bit equality of structure and values."""
        return (self.shape == other.shape
                and np.array_equal(self.row_ptr, other.row_ptr)
                and np.array_equal(self.col_idx, other.col_idx)
                and self.values.tobytes() == other.values.tobytes())

    def __eq__(self, other):
        if not isinstance(other, CsrMatrix):
            return NotImplemented
        return (self.shape == other.shape
                and np.array_equal(self.row_ptr, other.row_ptr)
                and np.array_equal(self.col_idx, other.col_idx)
                and np.array_equal(self.values, other.values))

    __hash__ = None

    def __repr__(self):
        return f"CsrMatrix({self.nrows}x{self.ncols}, nnz={self.nnz})"


def identity(n):
    idx = np.arange(n, dtype=np.int64)
    return CsrMatrix(n, n, np.arange(n + 1, dtype=np.int64), idx, np.ones(n))


def csr_from_triplets(nrows, ncols, entries):
    """Assemble a CSR matrix from (row, col, value) triplets.

    Entries may come in any order; duplicates are summed.  ``entries`` can be
    an iterable of triples or a tuple ``(rows, cols, values)`` of arrays.
    """
    if isinstance(entries, tuple) and len(entries) == 3 and all(
            isinstance(e, np.ndarray) for e in entries):
        rows, cols, vals = entries
    else:
        entries = list(entries)
        if entries:
            rows, cols, vals = zip(*entries)
        else:
            rows, cols, vals = (), (), ()
    rows = np.asarray(rows, dtype=np.int64)
    cols = np.asarray(cols, dtype=np.int64)
    vals = np.asarray(vals, dtype=np.float64)
    if not (rows.shape == cols.shape == vals.shape):
        raise SparseFormatError("rows, cols and values must have equal length")

    bad = (rows < 0) | (rows >= nrows) | (cols < 0) | (cols >= ncols)
    if np.any(bad):
        k = int(np.flatnonzero(bad)[0])
        raise SparseFormatError(
            f"entry {k} at ({rows[k]}, {cols[k]}) is outside a {nrows}x{ncols} matrix")

    order = np.lexsort((cols, rows))
    rows, cols, vals = rows[order], cols[order], vals[order]
    if rows.size:
        first = np.ones(rows.size, dtype=bool)
        first[1:] = (rows[1:] != rows[:-1]) | (cols[1:] != cols[:-1])
        starts = np.flatnonzero(first)
        vals = np.add.reduceat(vals, starts)
        rows, cols = rows[starts], cols[starts]
    row_ptr = np.zeros(nrows + 1, dtype=np.int64)
    np.cumsum(np.bincount(rows, minlength=nrows), out=row_ptr[1:])
    return CsrMatrix(nrows, ncols, row_ptr, cols, vals)


def spmv(A, x):
    x = np.ascontiguousarray(x, dtype=np.float64)
    if x.shape != (A.ncols,):
        raise DimensionMismatch(f"matrix is {A.nrows}x{A.ncols}, vector has shape {x.shape}")
    y = np.empty(A.nrows)
    _kernels.spmv(A.row_ptr, A.col_idx, A.values, x, y)
    return y


def transpose(A):
    ptr, idx, val = _kernels.transpose(A.nrows, A.ncols, A.row_ptr, A.col_idx, A.values)
    return CsrMatrix(A.ncols, A.nrows, ptr, idx, val)


def spmm_symbolic(A, B):
    """Structural pattern of A @ B (no cancellation)."""
    if A.ncols != B.nrows:
        raise DimensionMismatch(f"cannot multiply {A.nrows}x{A.ncols} by {B.nrows}x{B.ncols}")
    ptr, idx = _kernels.spmm_symbolic(A.nrows, B.ncols, A.row_ptr, A.col_idx, B.row_ptr, B.col_idx)
    return Pattern(A.nrows, B.ncols, ptr, idx)


def spmm_numeric(A, B, pattern):
    """Fill the values of A @ B into ``pattern``.

    ``pattern`` may be a superset of the true product pattern; the extra
    positions come out as exact zeros.
    """
    if A.ncols != B.nrows:
        raise DimensionMismatch(f"cannot multiply {A.nrows}x{A.ncols} by {B.nrows}x{B.ncols}")
    if pattern.shape != (A.nrows, B.ncols):
        raise DimensionMismatch(f"pattern is {pattern.shape}, product is {(A.nrows, B.ncols)}")
    vals, bad_row = _kernels.spmm_numeric(
        A.nrows, B.ncols, A.row_ptr, A.col_idx, A.values,
        B.row_ptr, B.col_idx, B.values, pattern.row_ptr, pattern.col_idx)
    if bad_row >= 0:
        raise SparseFormatError(f"pattern is missing a product entry in row {bad_row}")
    return CsrMatrix(pattern.nrows, pattern.ncols, pattern.row_ptr, pattern.col_idx, vals)


def spmm(A, B):
    return spmm_numeric(A, B, spmm_symbolic(A, B))


def galerkin_product(R, A, P):
    """Coarse operator R @ A @ P via two symbolic/numeric products."""
    if R.ncols != A.nrows or A.ncols != P.nrows:
        raise DimensionMismatch(
            f"cannot form R·A·P with shapes {R.shape}, {A.shape}, {P.shape}")
    return spmm(R, spmm(A, P))
