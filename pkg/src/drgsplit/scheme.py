"""Bose–Mesner algebra of a distance-regular graph.

Distance matrices, eigenvalues (via the tridiagonal quotient matrix),
primitive idempotents (Lagrange interpolation in the adjacency matrix),
Krein parameters, and the search for Q-polynomial orderings of the
idempotents.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import (
    ConditioningFailure,
    EigenvalueCollision,
    NotQPolynomial,
)
from .graphs import DistanceData, IntersectionNumbers
from .subspace import Subspace, span
from .tolerances import ToleranceProfile

__all__ = [
    "AssociationScheme",
    "distance_matrices",
    "eigenvalues_from_intersection_numbers",
    "primitive_idempotents",
    "krein_parameters",
    "find_qpoly_orderings",
    "qpoly_margin",
    "apply_ordering",
    "build_scheme",
    "idempotent_column_spaces",
]


@dataclass(frozen=True)
class AssociationScheme:
    """Distance matrices A_i, primitive idempotents E_i and derived data.

    ``theta``, ``mult``, ``E`` and ``krein`` are listed in the scheme's
    current idempotent order; a freshly built scheme uses descending
    eigenvalue order and ``qpoly_order is None``.  After
    :func:`apply_ordering` the listed order is the selected Q-polynomial
    ordering and ``qpoly_order`` records the permutation that was applied
    (position -> descending-order index).
    """

    n: int
    diameter: int
    A: np.ndarray  # (D+1, n, n) distance matrices, A[0] = I
    E: np.ndarray  # (D+1, n, n) primitive idempotents
    theta: np.ndarray  # (D+1,) eigenvalues, theta[i] paired with E[i]
    mult: np.ndarray  # (D+1,) ranks of the idempotents
    krein: np.ndarray  # (D+1, D+1, D+1) q[h, i, j]
    p: np.ndarray  # intersection numbers p[h, i, j]
    qpoly_order: tuple[int, ...] | None = None


def distance_matrices(dd: DistanceData) -> np.ndarray:
    """Stack of 0/1 distance matrices A_0 = I, ..., A_D."""
    return np.stack(
        [(dd.dist == h).astype(np.float64) for h in range(dd.diameter + 1)]
    )


def eigenvalues_from_intersection_numbers(
    inum: IntersectionNumbers, tol: ToleranceProfile
) -> np.ndarray:
    """The D+1 distinct adjacency eigenvalues, descending.

    Computed from the (D+1)x(D+1) tridiagonal quotient matrix with
    subdiagonal c_i, diagonal a_i = k - b_i - c_i and superdiagonal b_i.
    Positive off-diagonal products make it similar to a symmetric tridiagonal
    matrix, so the eigenvalues come from a symmetric solve.  Raises
    :class:`EigenvalueCollision` if two of them are closer than the cluster
    gap (they are provably distinct, so a collision means the input is
    broken).
    """
    d = inum.diameter
    k = inum.valency
    b, c = inum.b, inum.c
    a = np.array([k - b[i] - c[i] for i in range(d + 1)], dtype=np.float64)
    sym = np.diag(a)
    for i in range(d):
        off = np.sqrt(float(b[i]) * float(c[i + 1]))
        sym[i, i + 1] = sym[i + 1, i] = off
    theta = np.linalg.eigvalsh(sym)[::-1].copy()  # descending
    gap_bound = tol.eps_eig * max(1.0, float(np.abs(theta).max()))
    gaps = np.diff(theta[::-1])
    if gaps.size and gaps.min() < gap_bound:
        i = int(np.argmin(gaps))
        raise EigenvalueCollision(
            f"eigenvalues {theta[::-1][i]:.6g} and {theta[::-1][i + 1]:.6g} "
            f"are closer than {gap_bound:.3e}"
        )
    if abs(theta[0] - k) > gap_bound:
        raise ConditioningFailure(
            f"largest eigenvalue {theta[0]:.6g} does not match the valency {k}"
        )
    return theta


def primitive_idempotents(
    adjacency: np.ndarray, theta: np.ndarray, tol: ToleranceProfile
) -> np.ndarray:
    """Spectral projectors E_i = prod_{j != i} (A - theta_j I) / (theta_i - theta_j).

    Each result is symmetrized and checked for ||E^2 - E||_F within the
    assertion bound (:class:`ConditioningFailure` otherwise).
    """
    n = adjacency.shape[0]
    count = theta.shape[0]
    eye = np.eye(n)
    out = np.empty((count, n, n))
    bound = tol.assertion_tol()
    for i in range(count):
        m = eye
        for j in range(count):
            if j == i:
                continue
            m = m @ (adjacency - theta[j] * eye) / (theta[i] - theta[j])
        m = (m + m.T) / 2.0
        defect = float(np.linalg.norm(m @ m - m, "fro"))
        if defect > bound:
            raise ConditioningFailure(
                f"idempotent {i} fails E^2 = E by {defect:.3e} (bound {bound:.3e})"
            )
        out[i] = m
    return out


def multiplicities(idempotents: np.ndarray, tol: ToleranceProfile) -> np.ndarray:
    """Ranks of the idempotents, via traces (trace = rank for a projector)."""
    traces = np.einsum("ikk->i", idempotents)
    mult = np.rint(traces).astype(np.int64)
    n = idempotents.shape[1]
    if np.abs(traces - mult).max() > 1e-6 or mult.sum() != n or (mult < 1).any():
        raise ConditioningFailure(
            f"idempotent traces {traces} do not round to multiplicities summing to {n}"
        )
    return mult


def krein_parameters(
    idempotents: np.ndarray, mult: np.ndarray
) -> np.ndarray:
    """Krein table q[h, i, j] = n * trace((E_i ∘ E_j) E_h) / m_h,
    where ∘ is the entrywise product."""
    n = idempotents.shape[1]
    q = n * np.einsum("iab,jab,hab->hij", idempotents, idempotents, idempotents)
    q /= np.asarray(mult, dtype=np.float64)[:, None, None]
    return (q + q.transpose(0, 2, 1)) / 2.0


def _nonzero(value: float, cutoff: float) -> bool:
    return abs(value) > cutoff


def find_qpoly_orderings(
    krein: np.ndarray, tol: ToleranceProfile
) -> list[tuple[int, ...]]:
    """All orderings sigma of the idempotents (sigma(0) = 0) under which the
    Krein table satisfies the Q-polynomial condition:

    q[sigma(h), sigma(i), sigma(j)] vanishes whenever one of h, i, j exceeds
    the sum of the other two, and is nonzero whenever one equals the sum of
    the other two.

    The search tries each index as position 1 and chains: position t is the
    unique unused v with q[v, sigma(1), sigma(t-1)] nonzero.  Each completed
    chain is validated against the full condition.  Returned sorted
    lexicographically; empty list if the scheme is not Q-polynomial (callers
    raise :class:`NotQPolynomial` where that is an error).
    """
    d = krein.shape[0] - 1
    cutoff = tol.eps_zero * float(np.abs(krein).max())
    found = []
    for first in range(1, d + 1):
        order = [0, first]
        used = {0, first}
        ok = True
        while len(order) < d + 1 and ok:
            prev = order[-1]
            candidates = [
                v
                for v in range(d + 1)
                if v not in used and _nonzero(krein[v, first, prev], cutoff)
            ]
            if len(candidates) != 1:
                ok = False
                break
            order.append(candidates[0])
            used.add(candidates[0])
        if ok and len(order) == d + 1 and _qpoly_condition_holds(krein, order, cutoff):
            found.append(tuple(order))
    return sorted(found)


def _qpoly_condition_holds(krein, order, cutoff) -> bool:
    d = len(order) - 1
    for h in range(d + 1):
        for i in range(d + 1):
            for j in range(d + 1):
                value = krein[order[h], order[i], order[j]]
                if h > i + j or i > h + j or j > h + i:
                    if _nonzero(value, cutoff):
                        return False
                elif h == i + j or i == h + j or j == h + i:
                    if not _nonzero(value, cutoff):
                        return False
    return True


def qpoly_margin(
    krein: np.ndarray, order, tol: ToleranceProfile
) -> tuple[float, float]:
    """(smallest must-be-nonzero |q|, largest must-be-zero |q|) under the
    given ordering — how decisively the Q-polynomial condition held."""
    d = krein.shape[0] - 1
    smallest_nonzero = np.inf
    largest_zero = 0.0
    for h in range(d + 1):
        for i in range(d + 1):
            for j in range(d + 1):
                value = abs(float(krein[order[h], order[i], order[j]]))
                if h > i + j or i > h + j or j > h + i:
                    largest_zero = max(largest_zero, value)
                elif h == i + j or i == h + j or j == h + i:
                    smallest_nonzero = min(smallest_nonzero, value)
    return float(smallest_nonzero), float(largest_zero)


def apply_ordering(scheme: AssociationScheme, order) -> AssociationScheme:
    """Return the scheme with idempotent-indexed data permuted into ``order``.

    ``order`` maps new position -> current index and must fix 0."""
    order = tuple(int(t) for t in order)
    d = scheme.diameter
    if sorted(order) != list(range(d + 1)) or order[0] != 0:
        raise NotQPolynomial(f"{order} is not a permutation of 0..{d} fixing 0")
    idx = np.array(order)
    return replace(
        scheme,
        E=scheme.E[idx],
        theta=scheme.theta[idx],
        mult=scheme.mult[idx],
        krein=scheme.krein[np.ix_(idx, idx, idx)],
        qpoly_order=order,
    )


def build_scheme(
    dd: DistanceData,
    inum: IntersectionNumbers,
    tol: ToleranceProfile,
    theta: np.ndarray | None = None,
) -> AssociationScheme:
    """Assemble the scheme in descending-eigenvalue order.

    ``theta`` may be supplied (e.g. from a cache) to skip the quotient-matrix
    solve; it must already be descending.
    """
    a_mats = distance_matrices(dd)
    if theta is None:
        theta = eigenvalues_from_intersection_numbers(inum, tol)
    idempotents = primitive_idempotents(a_mats[1], theta, tol)
    mult = multiplicities(idempotents, tol)
    krein = krein_parameters(idempotents, mult)
    return AssociationScheme(
        n=inum.n,
        diameter=inum.diameter,
        A=a_mats,
        E=idempotents,
        theta=np.asarray(theta, dtype=np.float64),
        mult=mult,
        krein=krein,
        p=inum.p,
    )


def idempotent_column_spaces(
    scheme: AssociationScheme, tol: ToleranceProfile
) -> list[Subspace]:
    """Orthonormal bases of the eigenspaces E_i V, in the scheme's current
    idempotent order."""
    spaces = []
    for i in range(scheme.diameter + 1):
        space = span(scheme.E[i], tol)
        if space.dim != int(scheme.mult[i]):
            raise ConditioningFailure(
                f"column space of idempotent {i} has numerical rank {space.dim}, "
                f"expected multiplicity {int(scheme.mult[i])}"
            )
        spaces.append(space)
    return spaces
