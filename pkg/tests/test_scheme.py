import numpy as np
import pytest

import oracles
from drgsplit.errors import NotQPolynomial
from drgsplit.graphs import build_family, certify_distance_regular, distances
from drgsplit.scheme import (
    apply_ordering,
    build_scheme,
    find_qpoly_orderings,
    idempotent_column_spaces,
    qpoly_margin,
)
from drgsplit.tolerances import ToleranceProfile


def _scheme_for(family, params, tol):
    g = build_family(family, params)
    dd = distances(g)
    inum = certify_distance_regular(g, dd)
    return g, build_scheme(dd, inum, tol)


CORPUS_SCHEMES = [
    ("hypercube", (3,)),
    ("hypercube", (4,)),
    ("hamming", (3, 3)),
    ("johnson", (7, 3)),
    ("cycle", (8,)),
]


@pytest.mark.parametrize("family,params", CORPUS_SCHEMES)
def test_eigenvalues_match_dense_eigensolve(family, params, tol):
    """Tridiagonal-quotient eigenvalues vs a dense symmetric eigensolve of
    the full adjacency matrix."""
    g, scheme = _scheme_for(family, params, tol)
    values, _, mults = oracles.eigh_eigendata(g.adjacency())
    np.testing.assert_allclose(scheme.theta, values, atol=1e-10)
    np.testing.assert_array_equal(scheme.mult, mults)


def test_q3_eigenvalues_frozen(tol):
    _, scheme = _scheme_for("hypercube", (3,), tol)
    np.testing.assert_allclose(scheme.theta, [3.0, 1.0, -1.0, -3.0], atol=1e-12)


def test_c8_eigenvalues_closed_form(tol):
    # distinct values of 2cos(2*pi*j/8), descending
    _, scheme = _scheme_for("cycle", (8,), tol)
    expected = [2.0, np.sqrt(2.0), 0.0, -np.sqrt(2.0), -2.0]
    np.testing.assert_allclose(scheme.theta, expected, atol=1e-12)
    np.testing.assert_array_equal(scheme.mult, [1, 2, 2, 2, 1])


def test_q4_multiplicities_are_binomials(tol):
    _, scheme = _scheme_for("hypercube", (4,), tol)
    np.testing.assert_array_equal(scheme.mult, [1, 4, 6, 4, 1])


@pytest.mark.parametrize("family,params", CORPUS_SCHEMES)
def test_idempotents_match_eigh_projectors(family, params, tol):
    g, scheme = _scheme_for(family, params, tol)
    _, projectors, _ = oracles.eigh_eigendata(g.adjacency())
    worst = max(
        np.linalg.norm(scheme.E[i] - projectors[i], "fro")
        for i in range(len(projectors))
    )
    assert worst <= 1e-10


def test_idempotent_rank_q3(tol):
    _, scheme = _scheme_for("hypercube", (3,), tol)
    assert np.linalg.matrix_rank(scheme.E[1], tol=1e-8) == 3
    spaces = idempotent_column_spaces(scheme, tol)
    assert [s.dim for s in spaces] == [1, 3, 3, 1]


def test_idempotents_resolve_identity(tol):
    _, scheme = _scheme_for("hamming", (3, 3), tol)
    n = scheme.n
    np.testing.assert_allclose(scheme.E.sum(axis=0), np.eye(n), atol=1e-12)
    np.testing.assert_allclose(scheme.E[0], np.full((n, n), 1.0 / n), atol=1e-12)
    for i in range(4):
        for j in range(4):
            product = scheme.E[i] @ scheme.E[j]
            target = scheme.E[i] if i == j else np.zeros((n, n))
            np.testing.assert_allclose(product, target, atol=1e-12)


def test_krein_trace_formula_brute_force_q3(tol):
    """The Krein table equals the explicit-loop trace formula, and the h=0
    layer is diagonal with the multiplicities on the diagonal."""
    g, scheme = _scheme_for("hypercube", (3,), tol)
    brute = oracles.krein_by_trace_formula(scheme.E, scheme.mult, g.n)
    np.testing.assert_allclose(scheme.krein, brute, atol=1e-10)
    np.testing.assert_allclose(scheme.krein[0], np.diag(scheme.mult), atol=1e-10)


@pytest.mark.parametrize("family,params", [("hamming", (3, 3)), ("johnson", (7, 3))])
def test_krein_reconstruction_identity(family, params, tol):
    """E_i o E_j == (1/n) sum_h q^h_{ij} E_h (o = entrywise product)."""
    g, scheme = _scheme_for(family, params, tol)
    n = scheme.n
    worst = 0.0
    for i in range(scheme.diameter + 1):
        for j in range(scheme.diameter + 1):
            had = scheme.E[i] * scheme.E[j]
            recon = np.einsum("h,hxy->xy", scheme.krein[:, i, j], scheme.E) / n
            worst = max(worst, np.abs(had - recon).max())
    assert worst <= 1e-12


@pytest.mark.parametrize("family,params", [("hypercube", (3,)), ("hypercube", (4,)), ("hamming", (3, 3))])
def test_hamming_krein_equals_intersection_numbers(family, params, tol):
    # Hamming schemes are formally self-dual: the Krein table reproduces the
    # intersection-number table in the natural orderings.
    g = build_family(family, params)
    dd = distances(g)
    inum = certify_distance_regular(g, dd)
    scheme = build_scheme(dd, inum, tol)
    np.testing.assert_allclose(scheme.krein, inum.p.astype(float), atol=1e-9)


@pytest.mark.parametrize("family,params", CORPUS_SCHEMES + [("hypercube", (6,))])
def test_ordering_search_matches_brute_force(family, params, tol):
    _, scheme = _scheme_for(family, params, tol)
    found = [list(o) for o in find_qpoly_orderings(scheme.krein, tol)]
    assert found == oracles.brute_force_orderings(scheme.krein, tol.eps_zero)
    assert found[0] == list(range(scheme.diameter + 1))


def test_frozen_orderings(tol):
    expected = {
        ("hypercube", (3,)): [[0, 1, 2, 3]],
        ("hypercube", (4,)): [[0, 1, 2, 3, 4], [0, 3, 2, 1, 4]],
        ("hamming", (3, 3)): [[0, 1, 2, 3]],
        ("johnson", (7, 3)): [[0, 1, 2, 3]],
        ("cycle", (8,)): [[0, 1, 2, 3, 4], [0, 3, 2, 1, 4]],
    }
    for (family, params), orders in expected.items():
        _, scheme = _scheme_for(family, params, tol)
        assert [list(o) for o in find_qpoly_orderings(scheme.krein, tol)] == orders


def test_qpoly_margin_separates_decisions(tol):
    _, scheme = _scheme_for("hypercube", (3,), tol)
    order = find_qpoly_orderings(scheme.krein, tol)[0]
    smallest_nonzero, largest_zero = qpoly_margin(scheme.krein, order, tol)
    cutoff = tol.eps_zero * max(1.0, np.abs(scheme.krein).max())
    assert largest_zero <= cutoff < smallest_nonzero


def test_apply_ordering_permutes_scheme_data(tol):
    _, scheme = _scheme_for("cycle", (8,), tol)
    second = find_qpoly_orderings(scheme.krein, tol)[1]
    reordered = apply_ordering(scheme, second)
    np.testing.assert_allclose(reordered.theta, scheme.theta[list(second)])
    np.testing.assert_array_equal(reordered.mult, scheme.mult[list(second)])
    np.testing.assert_allclose(reordered.E[1], scheme.E[second[1]])
    # the permuted Krein table passes the triangle condition as the identity
    assert oracles.triangle_condition_holds(
        reordered.krein, list(range(5)), tol.eps_zero
    )
    assert reordered.qpoly_order == tuple(second)


def test_apply_ordering_rejects_bad_permutations(tol):
    _, scheme = _scheme_for("hypercube", (3,), tol)
    with pytest.raises(NotQPolynomial):
        apply_ordering(scheme, [1, 0, 2, 3])
    with pytest.raises(NotQPolynomial):
        apply_ordering(scheme, [0, 1, 1, 2])


def test_krein_parameters_essentially_nonnegative(corpus_results):
    for (family, params), (result, _) in corpus_results.items():
        assert result.report["scheme"]["krein_min"] >= -1e-8
