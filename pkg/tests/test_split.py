"""Global split grids: cell construction, dimension tables, duality, and
reconstruction from module pieces."""

import math

import numpy as np
import pytest

from drgsplit.errors import IndexOutOfRange, PairMismatch
from drgsplit.pipeline import RunConfig, run_dims, run_verify
from drgsplit.split import (
    DUAL_PAIRS,
    build_split_caches,
    split_grid,
    tilde_v,
    v_munu,
    verify_duality,
    verify_module_reconstruction,
)
from drgsplit.subspace import subspace_distance
from drgsplit.tolerances import ToleranceProfile

PAIRS = (("down", "down"), ("down", "up"), ("up", "down"), ("up", "up"))


def _caches(result, tol):
    return build_split_caches(result.scheme, result.dual, tol)


def test_full_index_cell_is_the_whole_space(q3, tol):
    caches = _caches(q3, tol)
    d = caches.diameter
    for mu, nu in PAIRS:
        cell = v_munu(caches, mu, nu, d, d)
        assert cell.dim == caches.n


def test_minus_one_index_gives_zero_subspace(q3, tol):
    caches = _caches(q3, tol)
    for mu, nu in PAIRS:
        assert v_munu(caches, mu, nu, -1, 2).dim == 0
        assert v_munu(caches, mu, nu, 2, -1).dim == 0
        assert v_munu(caches, mu, nu, -1, -1).ambient == caches.n


def test_indices_outside_range_raise(q3, tol):
    caches = _caches(q3, tol)
    d = caches.diameter
    with pytest.raises(IndexOutOfRange):
        v_munu(caches, "down", "down", d + 1, 0)
    with pytest.raises(IndexOutOfRange):
        v_munu(caches, "down", "down", 0, -2)


def test_bad_direction_name_raises(q3, tol):
    caches = _caches(q3, tol)
    with pytest.raises(ValueError):
        v_munu(caches, "sideways", "down", 0, 0)
    with pytest.raises(ValueError):
        split_grid(caches, "down", "diagonal")


def test_corner_cell_is_the_base_vertex_line(q3, tol):
    # Radius-zero ball at the base vertex intersected with everything.
    caches = _caches(q3, tol)
    cell = v_munu(caches, "down", "down", 0, caches.diameter)
    assert cell.dim == 1
    assert abs(cell.basis[0, 0]) == pytest.approx(1.0, abs=1e-12)


def test_tilde_cells_match_grid(q3, tol):
    caches = _caches(q3, tol)
    grid = q3.grids["dd"]
    d = caches.diameter
    for i in range(d + 1):
        for j in range(d + 1):
            cell = tilde_v(caches, "down", "down", i, j)
            assert cell.dim == grid.dims[i, j]
            if cell.dim:
                assert subspace_distance(cell, grid.tilde[i][j]) <= 1e-10


def test_hypercube_dims_follow_binomial_antidiagonal(q3, q4, q6):
    # Every module of the d-cube has equal endpoints r and diameter d - 2r,
    # so piece h of such a module lands on the antidiagonal i + j = d in all
    # four grids, and summing the multiplicities C(d,r) - C(d,r-1) over
    # r <= min(i, j) telescopes to C(d, min(i, j)).
    for result, d in ((q3, 3), (q4, 4), (q6, 6)):
        expected = [
            [math.comb(d, min(i, j)) if i + j == d else 0 for j in range(d + 1)]
            for i in range(d + 1)
        ]
        for key in ("dd", "du", "ud", "uu"):
            assert result.grids[key].dims.tolist() == expected


def test_grid_dims_counted_from_module_shapes(corpus_results):
    """Dimension tables agree with a straight count of module pieces.

    Every corpus module is thin (dimension == diameter + 1), so each of its
    diameter + 1 split pieces is a line and the grid cell dimension is the
    number of (module, piece) pairs the index rule sends there.
    """
    for (family, params), (result, _) in corpus_results.items():
        d = result.scheme.diameter
        for mu, nu in PAIRS:
            expected = np.zeros((d + 1, d + 1), dtype=np.int64)
            for rec in result.records:
                assert rec.dim == rec.diameter + 1
                rho, tau, dm = rec.endpoint, rec.dual_endpoint, rec.diameter
                for h in range(dm + 1):
                    i = rho + h if mu == "down" else d - rho - dm + h
                    j = tau + dm - h if nu == "down" else d - tau - h
                    expected[i, j] += 1
            key = mu[0] + nu[0]
            assert (result.grids[key].dims == expected).all(), (family, params, key)


def test_grid_dims_sum_to_vertex_count(corpus_results):
    for (family, params), (result, _) in corpus_results.items():
        n = result.graph.n
        for key in ("dd", "du", "ud", "uu"):
            assert int(result.grids[key].dims.sum()) == n


def test_duality_orthogonality_on_corpus(corpus_results):
    for (family, params), (result, _) in corpus_results.items():
        for pair in ("dd_uu", "du_ud"):
            rep = result.report["duality"][pair]
            assert rep["worst_offdiagonal"] <= 1e-8, (family, params, pair)
            assert rep["dim_corollary_ok"], (family, params, pair)


def test_duality_exempt_cells_are_not_orthogonal(corpus_results):
    # Control: the exempt pairs (i + r = D and j + s = D) carry genuinely
    # large inner products, so the orthogonality statement is not vacuous.
    for (family, params), (result, _) in corpus_results.items():
        for pair in ("dd_uu", "du_ud"):
            rep = result.report["duality"][pair]
            assert rep["exempt_max"] > 1e-3, (family, params, pair)
            assert rep["exempt_witness"] is not None


def test_duality_report_fields(q3, tol):
    rep = verify_duality(q3.grids["dd"], q3.grids["uu"], tol)
    assert rep.pair == "dd_uu"
    assert rep.ok
    assert rep.worst_offdiagonal <= tol.eps_orth
    i, j, r, s = rep.exempt_witness
    assert i + r == 3 and j + s == 3
    flipped = verify_duality(q3.grids["uu"], q3.grids["dd"], tol)
    assert flipped.pair == "dd_uu"


def test_dimension_corollary_is_exact_point_reflection(corpus_results):
    for (family, params), (result, _) in corpus_results.items():
        dd = result.grids["dd"].dims
        uu = result.grids["uu"].dims
        du = result.grids["du"].dims
        ud = result.grids["ud"].dims
        assert (dd == uu[::-1, ::-1]).all()
        assert (du == ud[::-1, ::-1]).all()


def test_non_dual_pair_is_rejected(q3, tol):
    with pytest.raises(PairMismatch):
        verify_duality(q3.grids["dd"], q3.grids["ud"], tol)
    with pytest.raises(PairMismatch):
        verify_duality(q3.grids["du"], q3.grids["du"], tol)


def test_reconstruction_reports_on_corpus(corpus_results):
    for (family, params), (result, _) in corpus_results.items():
        for key in ("dd", "du", "ud", "uu"):
            rep = result.report["reconstruction"][key]
            assert rep["worst_distance"] <= 1e-7, (family, params, key)


def test_reconstruction_direct(q3, tol):
    modules = [
        (rec, q3.splits[idx][("down", "down")])
        for idx, rec in enumerate(q3.records)
    ]
    rep = verify_module_reconstruction(q3.grids["dd"], modules, tol)
    assert rep.ok
    assert (rep.mu, rep.nu) == ("down", "down")
    assert rep.worst_distance <= 1e-7


def test_reconstruction_rejects_mismatched_splits(q3, tol):
    modules = [
        (rec, q3.splits[idx][("down", "up")])
        for idx, rec in enumerate(q3.records)
    ]
    with pytest.raises(PairMismatch):
        verify_module_reconstruction(q3.grids["dd"], modules, tol)


def test_primary_module_pieces_fill_corner_cells(q3):
    # The module through the base vertex has endpoints 0 and full diameter,
    # so its down/down pieces run along the whole antidiagonal; the corner
    # cells (0, D) and (D, 0) receive nothing else on the 3-cube.
    d = q3.scheme.diameter
    idx = next(
        k
        for k, rec in enumerate(q3.records)
        if rec.endpoint == 0 and rec.diameter == d
    )
    pieces = q3.splits[idx][("down", "down")].pieces
    assert len(pieces) == d + 1
    grid = q3.grids["dd"]
    assert subspace_distance(pieces[0], grid.tilde[0][d]) <= 1e-8
    assert subspace_distance(pieces[d], grid.tilde[d][0]) <= 1e-8


def test_dual_pairs_constant():
    assert DUAL_PAIRS == (
        (("down", "down"), ("up", "up")),
        (("down", "up"), ("up", "down")),
    )


def test_base_vertex_choice_never_changes_dims():
    # Vertex-transitive graphs: the tables cannot depend on the base point.
    for family, params, bases in (
        ("hypercube", (3,), (0, 1)),
        ("johnson", (7, 3), (0, 5)),
    ):
        tables = []
        for base in bases:
            result = run_dims(RunConfig(family=family, params=params, base=base))
            tables.append(result.dims_by_pair)
        assert tables[0] == tables[1]


def test_second_ordering_verifies_cleanly():
    # The 4-cube admits a second Q-polynomial ordering; the whole pipeline
    # must go through on it, not just the identity ordering.
    config = RunConfig(
        family="hypercube", params=(4,), ordering=1, tol=ToleranceProfile()
    )
    result = run_verify(config)
    assert result.ok
    assert result.exit_code == 0
    assert result.report["scheme"]["ordering"] == [0, 3, 2, 1, 4]
