import math

import numpy as np
import pytest

from amgreuse.hierarchy import AmgParams
from amgreuse.krylov import SolveParams
from amgreuse.problems import gen_diffusion_sequence, poisson2d, preset
from amgreuse.reuse import (FULL_BUILD, PARTIAL_UPDATE, REUSED, RunReport, StrategyConfig,
                            run_sequence, speedup)
from amgreuse.sparse import spmv


@pytest.fixture(scope="module")
def constant_seq():
    A = poisson2d(32)
    f = np.random.default_rng(3).random(A.nrows)
    return [(A, f)] * 5


@pytest.fixture(scope="module")
def fast_seq():
    return list(gen_diffusion_sequence(preset("fast", grid_n=40, steps=8)))


def test_constant_sequence_partial(constant_seq):
    _, r = run_sequence(constant_seq, StrategyConfig("partial"), initial_guess="zero")
    assert r.full_rebuilds == 1
    assert len(set(r.iterations)) == 1
    assert [s.action for s in r.steps] == [FULL_BUILD] + [PARTIAL_UPDATE] * 4


def test_constant_sequence_partial_chained_guess(constant_seq):
    _, r = run_sequence(constant_seq, StrategyConfig("partial"))
    assert r.full_rebuilds == 1
    # after the first solve the previous solution already meets the tolerance
    assert r.iterations[1:] == [0] * 4


def test_constant_sequence_full(constant_seq):
    _, r = run_sequence(constant_seq, StrategyConfig("full", reuse_iter_limit=100),
                        initial_guess="zero")
    assert r.full_rebuilds == 1
    assert len(set(r.iterations)) == 1
    assert all(s.action == REUSED and s.setup_time == 0.0 for s in r.steps[1:])
    assert all(s.phase_timings.total == 0.0 for s in r.steps[1:])


def test_no_reuse_rebuilds_every_step(fast_seq):
    _, r = run_sequence(fast_seq, StrategyConfig("none"))
    assert r.full_rebuilds == len(fast_seq)


def test_partial_without_rebuilds_builds_once(fast_seq):
    _, r = run_sequence(fast_seq, StrategyConfig("partial"))
    assert r.full_rebuilds == 1


def test_partial_periodic_rebuild(fast_seq):
    _, r = run_sequence(fast_seq[:7], StrategyConfig("partial", rebuild_every=3))
    assert [s.step for s in r.steps if s.action == FULL_BUILD] == [0, 3, 6]


def test_partial_rebuilds_on_size_change():
    A1, A2 = poisson2d(20), poisson2d(24)
    seq = [(A1, np.ones(400)), (A1, np.ones(400)), (A2, np.ones(576)), (A2, np.ones(576))]
    sols, r = run_sequence(seq, StrategyConfig("partial"))
    assert [s.action for s in r.steps] == [FULL_BUILD, PARTIAL_UPDATE, FULL_BUILD, PARTIAL_UPDATE]
    assert sols[2].shape == (576,)


def test_full_reuse_rebuilds_after_slow_step(fast_seq):
    # with a limit of one iteration every solve trips the flag
    _, r = run_sequence(fast_seq[:4], StrategyConfig("full", reuse_iter_limit=1))
    assert [s.action for s in r.steps] == [FULL_BUILD] * 4


def test_full_reuse_flag_follows_previous_step(fast_seq):
    cfg = StrategyConfig("full", reuse_iter_limit=40)
    _, r = run_sequence(fast_seq, cfg)
    for prev, cur in zip(r.steps, r.steps[1:]):
        bad = (not prev.converged) or prev.iterations >= 40
        assert cur.action == (FULL_BUILD if bad else REUSED)


def test_reuse_never_degrades_solution(fast_seq):
    tol = 1e-8
    for kind in ("none", "full", "partial"):
        sols, r = run_sequence(fast_seq, StrategyConfig(kind), solve=SolveParams(tol=tol))
        for (A, f), u, s in zip(fast_seq, sols, r.steps):
            if s.converged:
                assert np.linalg.norm(f - spmv(A, u)) / np.linalg.norm(f) <= tol


@pytest.mark.parametrize("name", ["slow", "fast"])
def test_strategy_independence(name):
    seq = list(gen_diffusion_sequence(preset(name, grid_n=32, steps=6)))
    tol = 1e-8
    base, _ = run_sequence(seq, StrategyConfig("none"), solve=SolveParams(tol=tol))
    part, _ = run_sequence(seq, StrategyConfig("partial"), solve=SolveParams(tol=tol))
    for ub, up in zip(base, part):
        assert np.max(np.abs(ub - up)) <= 10 * tol * np.linalg.norm(ub)


def test_report_totals(fast_seq):
    _, r = run_sequence(fast_seq, StrategyConfig("full"))
    assert r.total_setup == pytest.approx(sum(s.setup_time for s in r.steps), rel=1e-12)
    assert r.total_solve == pytest.approx(sum(s.solve_time for s in r.steps), rel=1e-12)
    assert r.full_rebuilds == sum(s.action == FULL_BUILD for s in r.steps)
    assert r.avg_iterations == pytest.approx(np.mean(r.iterations))
    assert all(s.iterations <= 100 for s in r.steps)


def test_empty_sequence_rejected():
    with pytest.raises(ValueError):
        run_sequence([], StrategyConfig("none"))


def test_strategy_validation():
    with pytest.raises(ValueError):
        StrategyConfig("sometimes")
    with pytest.raises(ValueError):
        StrategyConfig("partial", rebuild_every=0)
    with pytest.raises(ValueError):
        StrategyConfig("full", reuse_iter_limit=200).iter_limit(SolveParams(max_iter=100))


def summary(setup, solve, steps=49):
    return RunReport(StrategyConfig(), (), setup, solve, steps, 0.0)


def test_speedup_large_setup_saving():
    base, full = summary(1.235, 2.893), summary(0.021, 3.132)
    assert speedup(base, full, "setup") == pytest.approx(5781, abs=1)
    assert speedup(base, full, "total") == pytest.approx(31, abs=1)


def test_speedup_self_is_zero():
    r = summary(1.0, 2.0)
    assert speedup(r, r) == 0.0 and speedup(r, r, "setup") == 0.0


def test_speedup_zero_time_is_infinite():
    assert math.isinf(speedup(summary(1.0, 1.0), summary(0.0, 1.0), "setup"))


def test_speedup_rejects_mismatched_steps(constant_seq):
    _, a = run_sequence(constant_seq, StrategyConfig("none"), AmgParams())
    _, b = run_sequence(constant_seq[:3], StrategyConfig("none"), AmgParams())
    with pytest.raises(ValueError):
        speedup(a, b)
    with pytest.raises(ValueError):
        speedup(a, a, "solve")
