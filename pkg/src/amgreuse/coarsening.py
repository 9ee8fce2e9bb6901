"""Plain (non-smoothed) aggregation coarsening."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .errors import DimensionMismatch, ZeroDiagonalError
from .sparse import CsrMatrix


@dataclass(frozen=True, eq=False)
class StrengthGraph:
    """Symmetric strong-coupling graph in CSR adjacency form (no self-edges)."""

    n: int
    row_ptr: np.ndarray
    col_idx: np.ndarray

    def neighbors(self, i):
        return self.col_idx[self.row_ptr[i]:self.row_ptr[i + 1]]

    @property
    def n_edges(self):
        return int(self.row_ptr[-1]) // 2

    @classmethod
    def from_edges(cls, n, edges):
        adj = [set() for _ in range(n)]
        for i, j in edges:
            if i != j:
                adj[i].add(j)
                adj[j].add(i)
        row_ptr = np.concatenate(([0], np.cumsum([len(a) for a in adj]))).astype(np.int64)
        cols = np.array([j for a in adj for j in sorted(a)], dtype=np.int64)
        return cls(n, row_ptr, cols)


@dataclass(frozen=True, eq=False)
class Aggregates:
    n_fine: int
    n_coarse: int
    assignment: np.ndarray

    def members(self):
        """List of index arrays, one per aggregate."""
        order = np.argsort(self.assignment, kind="stable")
        bounds = np.cumsum(np.bincount(self.assignment, minlength=self.n_coarse))[:-1]
        return np.split(order, bounds)


def strength_graph(A: CsrMatrix, eps: float = 0.08) -> StrengthGraph:
    """Strong couplings ``|a_ij|^2 > eps^2 |a_ii a_jj|``, symmetrized by union."""
    if A.nrows != A.ncols:
        raise DimensionMismatch(f"strength graph needs a square matrix, got {A.shape}")
    if not 0.0 <= eps < 1.0:
        raise ValueError(f"eps must lie in [0, 1), got {eps}")
    sptr, scol, bad = _kernels.strong_edges(A.row_ptr, A.col_idx, A.values, eps * eps)
    if bad >= 0:
        raise ZeroDiagonalError(bad)
    n = A.nrows
    tptr, tcol, _ = _kernels.transpose(n, n, sptr, scol, np.zeros(scol.shape[0]))
    gptr, gcol = _kernels.union_rows(n, sptr, scol, tptr, tcol)
    return StrengthGraph(n, gptr, gcol)


def aggregate(g: StrengthGraph) -> Aggregates:
    """Greedy two-pass aggregation in ascending index order.

    Pass 1 makes each free node that still has a free strong neighbour a
    root and absorbs those neighbours.  Pass 2 attaches every leftover node
    to the aggregate of its lowest-indexed neighbour; isolated nodes become
    singletons.
    """
    assignment, n_coarse = _kernels.greedy_aggregate(g.n, g.row_ptr, g.col_idx)
    return Aggregates(g.n, int(n_coarse), assignment)


def tentative_prolongation(agg: Aggregates) -> CsrMatrix:
    """Piecewise-constant P with P[i, assignment[i]] = 1."""
    n = agg.n_fine
    return CsrMatrix(n, agg.n_coarse, np.arange(n + 1, dtype=np.int64),
                     np.array(agg.assignment, dtype=np.int64), np.ones(n))
