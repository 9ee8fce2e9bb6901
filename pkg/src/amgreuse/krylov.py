"""Right-preconditioned BiCGStab."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np

from .errors import DimensionMismatch
from .sparse import CsrMatrix, spmv

BREAKDOWN = 1e-30


@dataclass(frozen=True)
class SolveParams:
    tol: float = 1e-8
    max_iter: int = 100

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError(f"tol must be positive, got {self.tol}")
        if self.max_iter < 1:
            raise ValueError(f"max_iter must be >= 1, got {self.max_iter}")


@dataclass(frozen=True)
class SolveStats:
    iterations: int
    relative_residual: float
    converged: bool
    breakdown: bool = False


def _as_operator(A):
    if isinstance(A, CsrMatrix):
        return A.nrows, lambda x: spmv(A, x)
    if callable(A):
        return None, A
    raise TypeError(f"expected a CsrMatrix or a callable, got {type(A).__name__}")


def bicgstab(A: Union[CsrMatrix, Callable], M: Optional[Callable], f, u0=None,
             params: Optional[SolveParams] = None):
    """Solve ``A u = f`` with BiCGStab, preconditioned on the right by ``M``.

    ``M`` maps a vector to an approximation of ``A^-1`` applied to it and
    must stay the same linear operator for the whole solve; ``None`` means
    no preconditioning.  Convergence is judged on the true relative
    residual ``||f - A u|| / ||f||``.

    Returns ``(u, SolveStats)``.
    """
    params = params or SolveParams()
    n, matvec = _as_operator(A)
    precond = M if M is not None else (lambda x: x)
    f = np.asarray(f, dtype=np.float64)
    if n is not None and f.shape != (n,):
        raise DimensionMismatch(f"operator has {n} rows, rhs has shape {f.shape}")
    u = np.zeros_like(f) if u0 is None else np.array(u0, dtype=np.float64)
    if u.shape != f.shape:
        raise DimensionMismatch(f"initial guess has shape {u.shape}, rhs has {f.shape}")

    norm_f = np.linalg.norm(f)
    if norm_f == 0.0:
        return np.zeros_like(f), SolveStats(0, 0.0, True)

    tol = params.tol
    r = f - matvec(u)
    res = np.linalg.norm(r) / norm_f
    if res <= tol:
        return u, SolveStats(0, float(res), True)

    r_hat = r.copy()
    scale = np.linalg.norm(r) ** 2
    rho_old = alpha = omega = 1.0
    p = np.zeros_like(f)
    v = np.zeros_like(f)
    it = 0
    breakdown = False
    while it < params.max_iter:
        it += 1
        rho = r_hat @ r
        if abs(rho) < BREAKDOWN * scale:
            breakdown = True
            break
        if it == 1:
            p = r.copy()
        else:
            beta = (rho / rho_old) * (alpha / omega)
            p = r + beta * (p - omega * v)
        p_hat = precond(p)
        v = matvec(p_hat)
        denom = r_hat @ v
        if abs(denom) < BREAKDOWN * scale:
            breakdown = True
            break
        alpha = rho / denom
        s = r - alpha * v
        if np.linalg.norm(s) / norm_f <= tol:
            u_try = u + alpha * p_hat
            r_true = f - matvec(u_try)
            if np.linalg.norm(r_true) / norm_f <= tol:
                u = u_try
                r = r_true
                res = np.linalg.norm(r) / norm_f
                break
        s_hat = precond(s)
        t = matvec(s_hat)
        tt = t @ t
        if tt == 0.0:
            # s_hat already annihilates the residual
            u = u + alpha * p_hat + s_hat
            r = f - matvec(u)
            res = np.linalg.norm(r) / norm_f
            break
        omega = (t @ s) / tt
        u = u + alpha * p_hat + omega * s_hat
        r = s - omega * t
        rho_old = rho
        if np.linalg.norm(r) / norm_f <= tol:
            r = f - matvec(u)
            res = np.linalg.norm(r) / norm_f
            if res <= tol:
                break
        if abs(omega) < BREAKDOWN:
            breakdown = True
            break

    res = np.linalg.norm(f - matvec(u)) / norm_f
    return u, SolveStats(it, float(res), bool(res <= tol), breakdown)
