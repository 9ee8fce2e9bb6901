"""AMG hierarchy: full setup, partial update and V-cycle application."""

from __future__ import annotations

import time
import warnings
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg

from . import _kernels
from .coarsening import aggregate, strength_graph, tentative_prolongation
from .errors import (CoarseningStalledError, DimensionMismatch, PartialUpdateError,
                     SingularMatrixError, ZeroDiagonalError)
from .sparse import CsrMatrix, galerkin_product, spmv, transpose


@dataclass(frozen=True)
class AmgParams:
    eps: float = 0.08
    omega: float = 0.72
    pre_sweeps: int = 1
    post_sweeps: int = 1
    coarse_enough: int = 100
    max_direct_size: int = 2000

    def __post_init__(self):
        if not 0.0 <= self.eps < 1.0:
            raise ValueError(f"eps must lie in [0, 1), got {self.eps}")
        if self.pre_sweeps < 0 or self.post_sweeps < 0:
            raise ValueError("sweep counts must be non-negative")
        if self.coarse_enough < 1:
            raise ValueError("coarse_enough must be at least 1")
        if self.max_direct_size < self.coarse_enough:
            raise ValueError("max_direct_size must be >= coarse_enough")


@dataclass(frozen=True)
class SetupPhaseTimings:
    """Wall time in seconds spent in each setup phase."""

    transfer_ops: float = 0.0
    galerkin: float = 0.0
    smoother: float = 0.0
    coarse_solver: float = 0.0

    @property
    def total(self):
        return self.transfer_ops + self.galerkin + self.smoother + self.coarse_solver

    def __add__(self, other):
        return SetupPhaseTimings(self.transfer_ops + other.transfer_ops,
                                 self.galerkin + other.galerkin,
                                 self.smoother + other.smoother,
                                 self.coarse_solver + other.coarse_solver)

    def shares(self):
        """Fraction of the phase total taken by each phase."""
        t = self.total
        names = ("transfer_ops", "galerkin", "smoother", "coarse_solver")
        if t <= 0:
            return {k: 0.0 for k in names}
        return {k: getattr(self, k) / t for k in names}


@dataclass(frozen=True, eq=False)
class JacobiSmoother:
    inv_diag: np.ndarray
    omega: float


@dataclass(frozen=True, eq=False)
class DenseFactorization:
    n: int
    lu: np.ndarray
    piv: np.ndarray


@dataclass(frozen=True, eq=False)
class Level:
    A: CsrMatrix
    P: Optional[CsrMatrix] = None
    R: Optional[CsrMatrix] = None
    smoother: Optional[JacobiSmoother] = None


@dataclass(frozen=True, eq=False)
class Hierarchy:
    levels: tuple
    coarse_solver: DenseFactorization
    setup_timings: SetupPhaseTimings
    params: AmgParams = field(default_factory=AmgParams)
    setup_time: float = 0.0

    @property
    def sizes(self):
        return [lv.A.nrows for lv in self.levels]

    @property
    def n(self):
        return self.levels[0].A.nrows

    def operator_complexity(self):
        return sum(lv.A.nnz for lv in self.levels) / self.levels[0].A.nnz

    def __call__(self, f):
        return vcycle(self, f)


def build_smoother(A: CsrMatrix, omega: float = 0.72) -> JacobiSmoother:
    d, found = _kernels.diagonal(A.row_ptr, A.col_idx, A.values, A.nrows)
    bad = np.flatnonzero(~found | (d == 0.0))
    if bad.size:
        raise ZeroDiagonalError(bad[0])
    return JacobiSmoother(1.0 / d, float(omega))


def smooth(s: JacobiSmoother, A: CsrMatrix, f, u, sweeps: int = 1):
    """Damped Jacobi: ``u <- u + omega D^-1 (f - A u)``, ``sweeps`` times."""
    f = np.ascontiguousarray(f, dtype=np.float64)
    u = np.array(u, dtype=np.float64)
    if f.shape != (A.nrows,) or u.shape != (A.ncols,) or s.inv_diag.shape != (A.nrows,):
        raise DimensionMismatch("smoother, matrix and vectors do not conform")
    work = np.empty(A.nrows)
    for _ in range(sweeps):
        _kernels.jacobi_sweep(A.row_ptr, A.col_idx, A.values, s.inv_diag, s.omega, f, u, work)
    return u


def coarse_factorize(A: CsrMatrix) -> DenseFactorization:
    if A.nrows != A.ncols:
        raise DimensionMismatch(f"direct solver needs a square matrix, got {A.shape}")
    dense = A.to_dense()
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", scipy.linalg.LinAlgWarning)
        lu, piv = scipy.linalg.lu_factor(dense, check_finite=True)
    pivots = np.abs(np.diag(lu))
    scale = np.abs(dense).max() if dense.size else 0.0
    tiny = A.nrows * np.finfo(float).eps * scale
    if A.nrows and (scale == 0.0 or np.any(pivots <= tiny)):
        k = int(np.argmin(pivots))
        raise SingularMatrixError(f"coarse matrix is singular to working precision (pivot {k})")
    return DenseFactorization(A.nrows, lu, piv)


def coarse_solve(fac: DenseFactorization, f):
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (fac.n,):
        raise DimensionMismatch(f"coarse system has size {fac.n}, rhs has shape {f.shape}")
    if fac.n == 0:
        return f.copy()
    return scipy.linalg.lu_solve((fac.lu, fac.piv), f, check_finite=False)


def _rebuild_operators(A, transfer, params):
    """Smoothers, Galerkin products and coarse solver over frozen transfer operators.

    Returns (levels, coarse_solver, galerkin_time, smoother_time, coarse_time).
    """
    levels = []
    t_smooth = t_galerkin = 0.0
    Ai = A
    for i, (P, R) in enumerate(transfer):
        t0 = time.perf_counter()
        try:
            S = build_smoother(Ai, params.omega)
        except ZeroDiagonalError as e:
            raise ZeroDiagonalError(e.row, level=i) from None
        t1 = time.perf_counter()
        Ac = galerkin_product(R, Ai, P)
        t2 = time.perf_counter()
        t_smooth += t1 - t0
        t_galerkin += t2 - t1
        levels.append(Level(Ai, P, R, S))
        Ai = Ac
    t0 = time.perf_counter()
    fac = coarse_factorize(Ai)
    t_coarse = time.perf_counter() - t0
    levels.append(Level(Ai))
    return levels, fac, t_galerkin, t_smooth, t_coarse


def setup(A: CsrMatrix, params: Optional[AmgParams] = None) -> Hierarchy:
    """Build a full AMG hierarchy for ``A``."""
    params = params or AmgParams()
    if A.nrows != A.ncols:
        raise DimensionMismatch(f"AMG needs a square matrix, got {A.shape}")
    start = time.perf_counter()
    levels = []
    t_transfer = t_smooth = t_galerkin = 0.0
    Ai = A
    while Ai.nrows > params.coarse_enough:
        lvl = len(levels)
        t0 = time.perf_counter()
        try:
            g = strength_graph(Ai, params.eps)
        except ZeroDiagonalError as e:
            raise ZeroDiagonalError(e.row, level=lvl) from None
        agg = aggregate(g)
        if agg.n_coarse >= Ai.nrows:
            t_transfer += time.perf_counter() - t0
            if Ai.nrows <= params.max_direct_size:
                break
            raise CoarseningStalledError(
                f"coarsening stalled on level {lvl} with {Ai.nrows} unknowns")
        P = tentative_prolongation(agg)
        R = transpose(P)
        t1 = time.perf_counter()
        try:
            S = build_smoother(Ai, params.omega)
        except ZeroDiagonalError as e:
            raise ZeroDiagonalError(e.row, level=lvl) from None
        t2 = time.perf_counter()
        Ac = galerkin_product(R, Ai, P)
        t3 = time.perf_counter()
        t_transfer += t1 - t0
        t_smooth += t2 - t1
        t_galerkin += t3 - t2
        levels.append(Level(Ai, P, R, S))
        Ai = Ac

    if Ai.nrows > params.max_direct_size:
        raise CoarseningStalledError(
            f"coarsest level has {Ai.nrows} unknowns, above max_direct_size={params.max_direct_size}")
    t0 = time.perf_counter()
    fac = coarse_factorize(Ai)
    t_coarse = time.perf_counter() - t0
    levels.append(Level(Ai))
    timings = SetupPhaseTimings(t_transfer, t_galerkin, t_smooth, t_coarse)
    return Hierarchy(tuple(levels), fac, timings, params, time.perf_counter() - start)


def partial_update(h: Hierarchy, A_new: CsrMatrix, params: Optional[AmgParams] = None) -> Hierarchy:
    """Rebuild level matrices, smoothers and the coarse solver for ``A_new``.

    The transfer operators of ``h`` are kept as they are (the same objects
    are shared with the returned hierarchy).
    """
    params = params or h.params
    if A_new.shape != h.levels[0].A.shape:
        raise PartialUpdateError(
            f"partial update impossible, full rebuild required: matrix is {A_new.shape}, "
            f"hierarchy was built for {h.levels[0].A.shape}")
    start = time.perf_counter()
    transfer = [(lv.P, lv.R) for lv in h.levels[:-1]]
    levels, fac, t_galerkin, t_smooth, t_coarse = _rebuild_operators(A_new, transfer, params)
    timings = SetupPhaseTimings(0.0, t_galerkin, t_smooth, t_coarse)
    return Hierarchy(tuple(levels), fac, timings, params, time.perf_counter() - start)


def vcycle(h: Hierarchy, f, params: Optional[AmgParams] = None):
    """One V-cycle from a zero initial guess; a fixed linear map of ``f``."""
    params = params or h.params
    f = np.ascontiguousarray(f, dtype=np.float64)
    if f.shape != (h.n,):
        raise DimensionMismatch(f"hierarchy has {h.n} unknowns, rhs has shape {f.shape}")
    return _cycle(h, 0, f, params)


def _cycle(h, i, f, params):
    levels = h.levels
    if i == len(levels) - 1:
        return coarse_solve(h.coarse_solver, f)
    lv = levels[i]
    A, S = lv.A, lv.smoother
    u = np.zeros(A.nrows)
    work = np.empty(A.nrows)
    for _ in range(params.pre_sweeps):
        _kernels.jacobi_sweep(A.row_ptr, A.col_idx, A.values, S.inv_diag, S.omega, f, u, work)
    _kernels.residual(A.row_ptr, A.col_idx, A.values, f, u, work)
    uc = _cycle(h, i + 1, spmv(lv.R, work), params)
    u += spmv(lv.P, uc)
    for _ in range(params.post_sweeps):
        _kernels.jacobi_sweep(A.row_ptr, A.col_idx, A.values, S.inv_diag, S.omega, f, u, work)
    return u
