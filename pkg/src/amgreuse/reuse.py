"""Time-stepping driver for the three setup amortization strategies.

``none``
    Build a fresh hierarchy on every step.
``full``
    Keep the hierarchy unchanged while the solver keeps converging within
    ``reuse_iter_limit`` iterations; rebuild at the start of the step after
    a solve that missed the limit.
``partial``
    Keep the transfer operators and refresh every level matrix, smoother
    and the coarse solver from the new matrix on each step.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from typing import Iterable, Optional, Tuple

import numpy as np

from .errors import PartialUpdateError
from .hierarchy import AmgParams, SetupPhaseTimings, partial_update, setup
from .krylov import SolveParams, bicgstab

STRATEGIES = ("none", "full", "partial")

FULL_BUILD = "full_build"
PARTIAL_UPDATE = "partial_update"
REUSED = "reused_unchanged"


@dataclass(frozen=True)
class StrategyConfig:
    kind: str = "none"
    reuse_iter_limit: Optional[int] = None   # None: the solver's max_iter
    rebuild_every: Optional[int] = None

    def __post_init__(self):
        if self.kind not in STRATEGIES:
            raise ValueError(f"unknown strategy {self.kind!r}; choose from {STRATEGIES}")
        if self.rebuild_every is not None and self.rebuild_every < 1:
            raise ValueError("rebuild_every must be >= 1")
        if self.reuse_iter_limit is not None and self.reuse_iter_limit < 1:
            raise ValueError("reuse_iter_limit must be >= 1")

    def iter_limit(self, solve: SolveParams) -> int:
        if self.reuse_iter_limit is None:
            return solve.max_iter
        if self.reuse_iter_limit > solve.max_iter:
            raise ValueError(
                f"reuse_iter_limit={self.reuse_iter_limit} exceeds max_iter={solve.max_iter}")
        return self.reuse_iter_limit


@dataclass(frozen=True)
class StepMetrics:
    step: int
    setup_time: float
    solve_time: float
    iterations: int
    converged: bool
    action: str
    phase_timings: SetupPhaseTimings = field(default_factory=SetupPhaseTimings)
    relative_residual: float = 0.0
    breakdown: bool = False


@dataclass(frozen=True)
class RunReport:
    strategy: StrategyConfig
    steps: Tuple[StepMetrics, ...]
    total_setup: float
    total_solve: float
    full_rebuilds: int
    avg_iterations: float

    @classmethod
    def from_steps(cls, strategy, steps):
        steps = tuple(steps)
        return cls(
            strategy=strategy,
            steps=steps,
            total_setup=math.fsum(s.setup_time for s in steps),
            total_solve=math.fsum(s.solve_time for s in steps),
            full_rebuilds=sum(s.action == FULL_BUILD for s in steps),
            avg_iterations=float(np.mean([s.iterations for s in steps])) if steps else 0.0,
        )

    @property
    def total(self):
        return self.total_setup + self.total_solve

    @property
    def iterations(self):
        return [s.iterations for s in self.steps]

    def phase_totals(self, action=None):
        """Summed phase timings, optionally restricted to one action kind."""
        out = SetupPhaseTimings()
        for s in self.steps:
            if action is None or s.action == action:
                out = out + s.phase_timings
        return out


def _dims_changed(h, A):
    return h.levels[0].A.shape != A.shape


def run_sequence(systems: Iterable, strategy: StrategyConfig,
                 amg: Optional[AmgParams] = None, solve: Optional[SolveParams] = None,
                 initial_guess: str = "previous"):
    """Solve a sequence of systems ``(A_k, f_k)`` under one reuse strategy.

    Each step is solved by BiCGStab preconditioned with one V-cycle of the
    current hierarchy.  ``initial_guess`` is ``"previous"`` (start from the
    last step's solution when sizes match) or ``"zero"``.

    Returns ``(solutions, RunReport)``.
    """
    amg = amg or AmgParams()
    solve = solve or SolveParams()
    if initial_guess not in ("previous", "zero"):
        raise ValueError(f"initial_guess must be 'previous' or 'zero', got {initial_guess!r}")
    limit = strategy.iter_limit(solve)
    kind = strategy.kind

    h = None
    rebuild = False
    u_prev = None
    solutions = []
    steps = []
    for k, (A, f) in enumerate(systems):
        t0 = time.perf_counter()
        if h is None or kind == "none" or _dims_changed(h, A):
            action = FULL_BUILD
        elif kind == "full":
            action = FULL_BUILD if rebuild else REUSED
        elif strategy.rebuild_every is not None and k % strategy.rebuild_every == 0:
            action = FULL_BUILD
        else:
            action = PARTIAL_UPDATE

        if action == PARTIAL_UPDATE:
            try:
                h = partial_update(h, A, amg)
            except PartialUpdateError:
                action = FULL_BUILD
        if action == FULL_BUILD:
            h = setup(A, amg)
        setup_time = time.perf_counter() - t0 if action != REUSED else 0.0
        phases = h.setup_timings if action != REUSED else SetupPhaseTimings()

        u0 = None
        if initial_guess == "previous" and u_prev is not None and u_prev.shape == f.shape:
            u0 = u_prev
        t0 = time.perf_counter()
        u, stats = bicgstab(A, h, f, u0, solve)
        solve_time = time.perf_counter() - t0

        rebuild = (not stats.converged) or stats.iterations >= limit
        steps.append(StepMetrics(k, setup_time, solve_time, stats.iterations, stats.converged,
                                 action, phases, stats.relative_residual, stats.breakdown))
        solutions.append(u)
        u_prev = u

    if not steps:
        raise ValueError("empty system sequence")
    return solutions, RunReport.from_steps(strategy, steps)


def speedup(base: RunReport, other: RunReport, which: str = "total") -> float:
    """Percentage speedup ``(t_base / t_other - 1) * 100``.

    ``which="total"`` compares setup plus solve time, ``which="setup"`` the
    setup time alone.  Returns ``inf`` when ``t_other`` is zero.
    """
    if base.steps and other.steps and len(base.steps) != len(other.steps):
        raise ValueError(f"step counts differ: {len(base.steps)} vs {len(other.steps)}")
    if which == "total":
        t_base, t_other = base.total, other.total
    elif which == "setup":
        t_base, t_other = base.total_setup, other.total_setup
    else:
        raise ValueError(f"which must be 'total' or 'setup', got {which!r}")
    if t_other == 0:
        return math.inf
    return (t_base / t_other - 1.0) * 100.0
