import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amgreuse.errors import DimensionMismatch
from amgreuse.hierarchy import AmgParams, setup
from amgreuse.krylov import SolveParams, bicgstab
from amgreuse.problems import poisson2d
from amgreuse.sparse import CsrMatrix, identity, spmv


def test_identity_system_one_iteration(rng):
    f = rng.standard_normal(12)
    u, stats = bicgstab(identity(12), None, f)
    assert stats.iterations == 1 and stats.converged
    np.testing.assert_allclose(u, f, rtol=1e-15)


def test_exact_preconditioner_one_iteration(rng):
    d = np.arange(1.0, 11.0)
    A = CsrMatrix.from_dense(np.diag(d))
    u, stats = bicgstab(A, lambda x: x / d, rng.standard_normal(10))
    assert stats.iterations == 1 and stats.converged


def test_zero_rhs():
    u, stats = bicgstab(poisson2d(5), None, np.zeros(25), np.ones(25))
    assert stats == stats.__class__(0, 0.0, True)
    assert not np.any(u)


def test_converged_initial_guess_needs_no_iterations(rng):
    A = poisson2d(6)
    x = rng.standard_normal(36)
    _, stats = bicgstab(A, None, spmv(A, x), x)
    assert stats.iterations == 0 and stats.converged


def test_amg_preconditioned_poisson64():
    A = poisson2d(64)
    f = np.ones(A.nrows)
    u, stats = bicgstab(A, setup(A), f, params=SolveParams(tol=1e-8))
    assert stats.converged and stats.iterations <= 30
    true = np.linalg.norm(f - spmv(A, u)) / np.linalg.norm(f)
    assert true <= 1e-8
    assert stats.relative_residual == pytest.approx(true, rel=1e-12)


def test_amg_preconditioned_matches_dense_solve(rng):
    A = poisson2d(16)
    f = rng.standard_normal(A.nrows)
    u, stats = bicgstab(A, setup(A, AmgParams(coarse_enough=20)), f)
    ref = np.linalg.solve(A.to_dense(), f)
    assert stats.converged
    assert np.max(np.abs(u - ref)) <= 1e-6 * np.max(np.abs(ref))


def test_iteration_cap_reports_truthfully(rng):
    A = poisson2d(30)
    f = rng.standard_normal(A.nrows)
    u, stats = bicgstab(A, None, f, params=SolveParams(tol=1e-12, max_iter=3))
    assert stats.iterations == 3 and not stats.converged
    assert stats.relative_residual == pytest.approx(
        np.linalg.norm(f - spmv(A, u)) / np.linalg.norm(f), rel=1e-12)


def test_callable_operator(rng):
    D = np.diag(np.arange(1.0, 6.0)) + 0.1
    f = rng.standard_normal(5)
    u, stats = bicgstab(lambda x: D @ x, None, f)
    assert stats.converged
    np.testing.assert_allclose(D @ u, f, atol=1e-7)


def test_deterministic(rng):
    A = poisson2d(40)
    h = setup(A)
    f = rng.standard_normal(A.nrows)
    u1, s1 = bicgstab(A, h, f)
    u2, s2 = bicgstab(A, h, f)
    assert s1 == s2 and u1.tobytes() == u2.tobytes()


def test_dimension_checks():
    with pytest.raises(DimensionMismatch):
        bicgstab(identity(3), None, np.ones(4))
    with pytest.raises(DimensionMismatch):
        bicgstab(identity(3), None, np.ones(3), np.ones(2))


def test_params_validation():
    with pytest.raises(ValueError):
        SolveParams(tol=0)
    with pytest.raises(ValueError):
        SolveParams(max_iter=0)


@settings(max_examples=30, deadline=None)
@given(n=st.integers(2, 60), seed=st.integers(0, 2**32 - 1))
def test_solution_error_bounded_by_conditioning(n, seed):
    r = np.random.default_rng(seed)
    D = r.standard_normal((n, n)) * (r.random((n, n)) < 0.3) + (n + 2.0) * np.eye(n)
    A = CsrMatrix.from_dense(D)
    f = r.standard_normal(n)
    tol = 1e-8
    u, stats = bicgstab(A, None, f, params=SolveParams(tol=tol, max_iter=200))
    assert stats.converged
    assert stats.relative_residual <= tol
    ref = np.linalg.solve(D, f)
    err = np.linalg.norm(u - ref) / np.linalg.norm(ref)
    assert err <= 100 * tol * np.linalg.cond(D)
