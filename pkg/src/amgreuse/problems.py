"""Synthetic sequences of slowly (or quickly) varying diffusion matrices.

Step ``k`` discretizes ``-div(kappa_k grad u) = f`` on the unit square with
the 5-point stencil and homogeneous Dirichlet boundary.  The coefficient is
a Gaussian blob of high conductivity that travels along the diagonal, so
matrix values drift from step to step while the sparsity pattern stays
fixed.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional, Tuple

import numpy as np

from .sparse import CsrMatrix, csr_from_triplets


@dataclass(frozen=True)
class DiffusionSequenceSpec:
    grid_n: int = 64
    steps: int = 10
    contrast: float = 10.0
    blob_sigma: Optional[float] = None  # grid units; None means grid_n / 8
    path_speed: float = 0.25            # grid units per step
    seed: int = 0

    def __post_init__(self):
        if self.grid_n < 4:
            raise ValueError(f"grid_n must be >= 4, got {self.grid_n}")
        if self.steps < 1:
            raise ValueError(f"steps must be >= 1, got {self.steps}")
        if self.contrast < 1:
            raise ValueError(f"contrast must be >= 1, got {self.contrast}")
        if self.blob_sigma is not None and self.blob_sigma <= 0:
            raise ValueError("blob_sigma must be positive")

    @property
    def sigma(self):
        return self.grid_n / 8.0 if self.blob_sigma is None else float(self.blob_sigma)

    @property
    def n(self):
        return self.grid_n * self.grid_n


PRESETS = {
    # reuse-friendly drift
    "slow": dict(contrast=10.0, path_speed=0.25),
    # reuse-hostile drift
    "fast": dict(contrast=1000.0, path_speed=2.0),
}


def preset(name: str, grid_n: int = 128, steps: int = 25, seed: int = 0,
           **overrides) -> DiffusionSequenceSpec:
    try:
        base = PRESETS[name]
    except KeyError:
        raise ValueError(f"unknown preset {name!r}; choose from {sorted(PRESETS)}") from None
    return DiffusionSequenceSpec(grid_n=grid_n, steps=steps, seed=seed, **{**base, **overrides})


def _reflect(x, lo, hi):
    span = hi - lo
    t = np.mod(x - lo, 2 * span)
    return lo + np.where(t <= span, t, 2 * span - t)


def blob_center(spec: DiffusionSequenceSpec, k: int) -> Tuple[float, float]:
    """Blob position at step ``k`` in grid units (boundary at 0 and grid_n + 1)."""
    lo, hi = 1.0, float(spec.grid_n)
    start = 0.25 * (spec.grid_n + 1)
    d = k * spec.path_speed / np.sqrt(2.0)
    c = float(_reflect(start + d, lo, hi))
    return c, c


def conductivity(spec: DiffusionSequenceSpec, k: int) -> np.ndarray:
    """Coefficient on the (grid_n + 2)^2 lattice including boundary points."""
    m = spec.grid_n + 2
    cx, cy = blob_center(spec, k)
    x = np.arange(m, dtype=np.float64)
    r2 = (x[None, :] - cx) ** 2 + (x[:, None] - cy) ** 2
    return 1.0 + (spec.contrast - 1.0) * np.exp(-r2 / spec.sigma ** 2)


def _harmonic(a, b):
    return 2.0 * a * b / (a + b)


def diffusion_matrix(spec: DiffusionSequenceSpec, k: int) -> CsrMatrix:
    N = spec.grid_n
    h2 = 1.0 / (N + 1) ** 2
    kap = conductivity(spec, k)
    # face coefficients; kap is indexed [y, x] on the padded lattice
    east = _harmonic(kap[1:-1, 1:-1], kap[1:-1, 2:]) / h2   # (N, N)
    west = _harmonic(kap[1:-1, 1:-1], kap[1:-1, :-2]) / h2
    north = _harmonic(kap[1:-1, 1:-1], kap[2:, 1:-1]) / h2
    south = _harmonic(kap[1:-1, 1:-1], kap[:-2, 1:-1]) / h2

    idx = np.arange(N * N, dtype=np.int64).reshape(N, N)
    diag = (east + west + north + south).ravel()
    rows = [idx.ravel()]
    cols = [idx.ravel()]
    vals = [diag]
    # couplings between interior neighbours share one face value
    ew = east[:, :-1]
    rows += [idx[:, :-1].ravel(), idx[:, 1:].ravel()]
    cols += [idx[:, 1:].ravel(), idx[:, :-1].ravel()]
    vals += [-ew.ravel(), -ew.ravel()]
    ns = north[:-1, :]
    rows += [idx[:-1, :].ravel(), idx[1:, :].ravel()]
    cols += [idx[1:, :].ravel(), idx[:-1, :].ravel()]
    vals += [-ns.ravel(), -ns.ravel()]
    return csr_from_triplets(N * N, N * N,
                             (np.concatenate(rows), np.concatenate(cols), np.concatenate(vals)))


def rhs(spec: DiffusionSequenceSpec) -> np.ndarray:
    rng = np.random.default_rng(spec.seed)
    return 0.5 + rng.random(spec.n)


def gen_diffusion_sequence(spec: DiffusionSequenceSpec) -> Iterator[Tuple[CsrMatrix, np.ndarray]]:
    """Yield ``(A_k, f)`` for ``k = 0 .. steps - 1``; ``f`` is shared by all steps."""
    f = rhs(spec)
    f.flags.writeable = False
    for k in range(spec.steps):
        yield diffusion_matrix(spec, k), f


def poisson1d(n: int) -> CsrMatrix:
    """tridiag(-1, 2, -1) of size n."""
    i = np.arange(n, dtype=np.int64)
    rows = np.concatenate([i, i[:-1], i[1:]])
    cols = np.concatenate([i, i[1:], i[:-1]])
    vals = np.concatenate([np.full(n, 2.0), np.full(n - 1, -1.0), np.full(n - 1, -1.0)])
    return csr_from_triplets(n, n, (rows, cols, vals))


def poisson2d(m: int) -> CsrMatrix:
    """Unscaled 5-point Laplacian on an m x m grid (diagonal 4)."""
    idx = np.arange(m * m, dtype=np.int64).reshape(m, m)
    h = (idx[:, :-1].ravel(), idx[:, 1:].ravel())
    v = (idx[:-1, :].ravel(), idx[1:, :].ravel())
    rows = np.concatenate([idx.ravel(), h[0], h[1], v[0], v[1]])
    cols = np.concatenate([idx.ravel(), h[1], h[0], v[1], v[0]])
    vals = np.concatenate([np.full(m * m, 4.0), -np.ones(rows.size - m * m)])
    return csr_from_triplets(m * m, m * m, (rows, cols, vals))
