"""AMG-preconditioned BiCGStab with setup reuse across time steps."""

from .coarsening import Aggregates, StrengthGraph, aggregate, strength_graph, tentative_prolongation
from .errors import (AmgError, CoarseningStalledError, DimensionMismatch, MatrixMarketError,
                     PartialUpdateError, SequenceError, SingularMatrixError, SparseFormatError,
                     ZeroDiagonalError)
from .hierarchy import (AmgParams, DenseFactorization, Hierarchy, JacobiSmoother, Level,
                        SetupPhaseTimings, build_smoother, coarse_factorize, coarse_solve,
                        partial_update, setup, smooth, vcycle)
from .krylov import SolveParams, SolveStats, bicgstab
from .mmio import mm_read, mm_read_vector, mm_write, mm_write_vector, read_sequence, write_sequence
from .problems import DiffusionSequenceSpec, gen_diffusion_sequence, poisson1d, poisson2d, preset
from .reuse import RunReport, StepMetrics, StrategyConfig, run_sequence, speedup
from .sparse import (CsrMatrix, Pattern, csr_from_triplets, galerkin_product, identity, spmm,
                     spmm_numeric, spmm_symbolic, spmv, transpose)

__version__ = "0.1.0"

__all__ = [
    "Aggregates",
    "AmgError",
    "AmgParams",
    "CoarseningStalledError",
    "CsrMatrix",
    "DenseFactorization",
    "DiffusionSequenceSpec",
    "DimensionMismatch",
    "Hierarchy",
    "JacobiSmoother",
    "Level",
    "MatrixMarketError",
    "PartialUpdateError",
    "Pattern",
    "RunReport",
    "SequenceError",
    "SetupPhaseTimings",
    "SingularMatrixError",
    "SolveParams",
    "SolveStats",
    "SparseFormatError",
    "StepMetrics",
    "StrategyConfig",
    "StrengthGraph",
    "ZeroDiagonalError",
    "aggregate",
    "bicgstab",
    "build_smoother",
    "coarse_factorize",
    "coarse_solve",
    "csr_from_triplets",
    "galerkin_product",
    "gen_diffusion_sequence",
    "identity",
    "mm_read",
    "mm_read_vector",
    "mm_write",
    "mm_write_vector",
    "partial_update",
    "poisson1d",
    "poisson2d",
    "preset",
    "read_sequence",
    "run_sequence",
    "setup",
    "smooth",
    "speedup",
    "spmm",
    "spmm_numeric",
    "spmm_symbolic",
    "spmv",
    "strength_graph",
    "tentative_prolongation",
    "transpose",
    "vcycle",
    "write_sequence",
]
