import numpy as np
import pytest

from drgsplit.dual import (
    build_dual,
    dual_idempotents,
    verify_tridiagonal_relations,
)
from drgsplit.errors import VertexOutOfRange
from drgsplit.graphs import build_family, certify_distance_regular, distances
from drgsplit.scheme import apply_ordering, build_scheme, find_qpoly_orderings


def _setup(family, params, tol, base=0, order_index=0):
    g = build_family(family, params)
    dd = distances(g)
    inum = certify_distance_regular(g, dd)
    scheme = build_scheme(dd, inum, tol)
    order = find_qpoly_orderings(scheme.krein, tol)[order_index]
    scheme = apply_ordering(scheme, order)
    dual = build_dual(g, dd, scheme, base, tol)
    return g, dd, scheme, dual


def test_dual_idempotents_partition_by_distance(tol):
    g = build_family("hypercube", [3])
    dd = distances(g)
    estar = dual_idempotents(g, dd, 0)
    assert estar.shape == (4, 8, 8)
    # diagonal 0/1 projectors that sum to the identity
    np.testing.assert_allclose(estar.sum(axis=0), np.eye(8), atol=0)
    for i in range(4):
        diag = np.diag(estar[i])
        assert set(np.unique(diag)) <= {0.0, 1.0}
        np.testing.assert_allclose(estar[i], np.diag(diag), atol=0)
    # subconstituent sizes of Q_3 around any vertex
    assert [int(np.trace(estar[i])) for i in range(4)] == [1, 3, 3, 1]


def test_dual_idempotents_reject_bad_base(tol):
    g = build_family("hypercube", [3])
    dd = distances(g)
    with pytest.raises(VertexOutOfRange):
        dual_idempotents(g, dd, 8)
    with pytest.raises(VertexOutOfRange):
        dual_idempotents(g, dd, -1)


def test_hypercube_dual_eigenvalues_equal_eigenvalues(tol):
    # the binary Hamming scheme is self-dual, so the dual sequence matches
    _, _, scheme, dual = _setup("hypercube", (3,), tol)
    np.testing.assert_allclose(dual.theta_star, scheme.theta, atol=1e-10)


def test_dual_matrix_diagonal_comes_from_idempotent_row(tol):
    g, dd, scheme, dual = _setup("johnson", (7, 3), tol, base=2)
    n = g.n
    for i in range(scheme.diameter + 1):
        expected = np.diag(n * scheme.E[i][2, :])
        np.testing.assert_allclose(dual.Astar[i], expected, atol=1e-12)
    # A*_0 is the identity
    np.testing.assert_allclose(dual.Astar[0], np.eye(n), atol=0)


def test_dual_eigenvalue_multiset_matches_subconstituents(tol):
    # the diagonal of A*_1 takes value theta*_i on the i-th subconstituent
    g, dd, scheme, dual = _setup("hamming", (3, 3), tol)
    diag = np.diag(dual.Astar[1])
    for i in range(scheme.diameter + 1):
        members = dd.dist[0] == i
        np.testing.assert_allclose(diag[members], dual.theta_star[i], atol=1e-9)


@pytest.mark.parametrize(
    "family,params",
    [("hypercube", (3,)), ("hamming", (3, 3)), ("johnson", (7, 3)), ("cycle", (8,))],
)
def test_tridiagonal_relations_hold(family, params, tol):
    """E*_j A E*_i = 0 and E_j A* E_i = 0 whenever |i - j| > 1."""
    g, dd, scheme, dual = _setup(family, params, tol)
    report = verify_tridiagonal_relations(scheme, dual, tol)
    assert report.ok
    assert report.max_a_offband <= 1e-8
    assert report.max_astar_offband <= 1e-8


@pytest.mark.parametrize(
    "family,params,order",
    [
        # on Q_3 most shuffles stay accidentally tridiagonal (antipodal
        # bipartite zeros); [0,1,3,2] is one that does not
        ("hypercube", (3,), [0, 1, 3, 2]),
        ("johnson", (7, 3), [0, 2, 1, 3]),
    ],
)
def test_shuffled_ordering_breaks_dual_tridiagonal(family, params, order, tol):
    """A shuffled idempotent ordering violates the second relation while
    leaving the first (ordering-independent) one intact."""
    g = build_family(family, params)
    dd = distances(g)
    inum = certify_distance_regular(g, dd)
    scheme = build_scheme(dd, inum, tol)
    shuffled = apply_ordering(scheme, order)
    dual = build_dual(g, dd, shuffled, 0, tol)
    report = verify_tridiagonal_relations(shuffled, dual, tol)
    assert report.a_ok
    assert not report.astar_ok
    assert report.max_astar_offband > 1e-3


def test_dual_product_structure_reported(q3):
    checks = {c["name"]: c for c in q3.report["checks"]}
    assert checks["dual.product_structure"]["ok"]
    assert checks["dual.product_structure"]["value"] <= 1e-8


def test_second_hypercube_ordering_stays_tridiagonal(tol):
    # Q_4 has a second valid ordering; the relations must hold there too
    g, dd, scheme, dual = _setup("hypercube", (4,), tol, order_index=1)
    report = verify_tridiagonal_relations(scheme, dual, tol)
    assert report.ok
