import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from amgreuse.coarsening import StrengthGraph, aggregate, strength_graph, tentative_prolongation
from amgreuse.errors import ZeroDiagonalError
from amgreuse.problems import poisson1d, poisson2d
from amgreuse.sparse import CsrMatrix, csr_from_triplets, spmm, transpose

from oracles import is_partition, random_sparse_dense, replay_aggregation, replay_strength


def edges(g):
    return {(i, int(j)) for i in range(g.n) for j in g.neighbors(i) if i < j}


def test_diagonal_matrix_has_no_edges():
    A = CsrMatrix.from_dense(np.diag([3.0, -1.0, 7.0]))
    assert strength_graph(A, 0.5).n_edges == 0


def test_tridiag_path_graph():
    A = poisson1d(4)
    adj = replay_strength(A.to_dense(), 0.08)
    g = strength_graph(A, 0.08)
    assert edges(g) == {(0, 1), (1, 2), (2, 3)}
    assert [set(g.neighbors(i).tolist()) for i in range(4)] == adj


def test_tridiag_large_eps_drops_everything():
    # |-1|^2 = 1 is not above 0.81 * 4 = 3.24
    A = poisson1d(4)
    assert replay_strength(A.to_dense(), 0.9) == [set()] * 4
    assert strength_graph(A, 0.9).n_edges == 0


def test_strength_graph_symmetrized():
    # only a_01 is strong in one direction; union keeps the edge both ways
    A = CsrMatrix.from_dense(np.array([[1.0, 0.5], [0.0, 1.0]]))
    g = strength_graph(A, 0.1)
    assert g.neighbors(0).tolist() == [1]
    assert g.neighbors(1).tolist() == [0]


def test_zero_diagonal_names_row():
    A = csr_from_triplets(3, 3, [(0, 0, 1.0), (1, 0, 1.0), (2, 2, 1.0)])
    with pytest.raises(ZeroDiagonalError) as exc:
        strength_graph(A)
    assert exc.value.row == 1


def test_edgeless_graph_singletons():
    agg = aggregate(StrengthGraph.from_edges(3, []))
    assert agg.n_coarse == 3
    assert agg.assignment.tolist() == [0, 1, 2]


def test_path_graph_pairs():
    g = StrengthGraph.from_edges(6, [(i, i + 1) for i in range(5)])
    agg = aggregate(g)
    ref, count = replay_aggregation([set(g.neighbors(i).tolist()) for i in range(6)])
    assert agg.assignment.tolist() == ref
    assert [m.tolist() for m in agg.members()] == [[0, 1], [2, 3], [4, 5]]
    assert is_partition(agg.assignment, agg.n_coarse)


def test_star_graph_single_aggregate():
    g = StrengthGraph.from_edges(5, [(0, k) for k in range(1, 5)])
    agg = aggregate(g)
    assert agg.n_coarse == 1
    assert agg.assignment.tolist() == replay_aggregation(
        [set(g.neighbors(i).tolist()) for i in range(5)])[0]


def test_leftover_joins_lowest_neighbour():
    # path of five: node 4 has no free neighbour when reached
    g = StrengthGraph.from_edges(5, [(i, i + 1) for i in range(4)])
    assert aggregate(g).assignment.tolist() == [0, 0, 1, 1, 1]


def test_prolongation_singletons_is_identity():
    P = tentative_prolongation(aggregate(StrengthGraph.from_edges(3, [])))
    np.testing.assert_array_equal(P.to_dense(), np.eye(3))


def test_prolongation_pairs():
    g = StrengthGraph.from_edges(4, [(0, 1), (2, 3)])
    P = tentative_prolongation(aggregate(g))
    np.testing.assert_array_equal(P.to_dense(), [[1, 0], [1, 0], [0, 1], [0, 1]])


def test_prolongation_column_sums_and_ptp():
    A = poisson2d(9)
    agg = aggregate(strength_graph(A))
    P = tentative_prolongation(agg)
    sizes = np.bincount(agg.assignment, minlength=agg.n_coarse)
    np.testing.assert_array_equal(P.to_dense().sum(axis=0), sizes)
    PtP = spmm(transpose(P), P).to_dense()
    np.testing.assert_array_equal(PtP, np.diag(sizes))


def test_aggregation_deterministic():
    A = poisson2d(20)
    a1 = aggregate(strength_graph(A)).assignment
    a2 = aggregate(strength_graph(A)).assignment
    np.testing.assert_array_equal(a1, a2)


@settings(max_examples=60, deadline=None)
@given(n=st.integers(1, 40), seed=st.integers(0, 2**32 - 1), fill=st.floats(0.0, 0.4),
       eps=st.floats(0.0, 0.99))
def test_aggregation_matches_literal_rule(n, seed, fill, eps):
    r = np.random.default_rng(seed)
    D = random_sparse_dense(r, n, n, fill)
    np.fill_diagonal(D, 1.0 + r.random(n))
    A = CsrMatrix.from_dense(D)
    adj = replay_strength(D, eps)
    g = strength_graph(A, eps)
    assert [set(g.neighbors(i).tolist()) for i in range(n)] == adj
    agg = aggregate(g)
    ref, count = replay_aggregation(adj)
    assert agg.assignment.tolist() == ref
    assert agg.n_coarse == count
    assert is_partition(agg.assignment, agg.n_coarse)
    if g.n_edges:
        assert agg.n_coarse < n
