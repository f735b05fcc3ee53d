"""Tolerance-aware subspaces of R^n stored as orthonormal column bases.

All eigenspace, subconstituent and split-space computations downstream reduce
to the lattice operations here: span, sum, intersection, relative complement.
Rank decisions funnel through one relative cutoff (``ToleranceProfile.eps_rank``)
plus a single absolute floor for "this spanning set is numerically zero", so
that "is this space trivial" always means the same thing.
"""

import numpy as np

from .errors import AmbientMismatch, NotContained
from .tolerances import ASSERTION_FLOOR, ToleranceProfile

__all__ = [
    "Subspace",
    "span",
    "zero_subspace",
    "full_subspace",
    "is_orthogonal",
    "subspace_distance",
    "intersect_nullspace",
]


class Subspace:
    """A subspace of R^n held as an n-by-k matrix with orthonormal columns.

    The zero subspace is the canonical ``k = 0`` instance.  Construction
    validates orthonormality of the columns (within the assertion bound) so a
    Subspace in hand is always safe to use in projector arithmetic.
    """

    __slots__ = ("basis", "tol")

    def __init__(self, basis: np.ndarray, tol: ToleranceProfile):
        basis = np.ascontiguousarray(basis, dtype=np.float64)
        if basis.ndim != 2:
            raise ValueError("basis must be a 2-d array (n, k)")
        k = basis.shape[1]
        if k:
            gram_defect = np.abs(basis.T @ basis - np.eye(k)).max()
            if gram_defect > max(tol.eps_orth, ASSERTION_FLOOR):
                raise ValueError(
                    f"basis columns are not orthonormal (defect {gram_defect:.3e})"
                )
        self.basis = basis
        self.tol = tol

    @property
    def ambient(self) -> int:
        return self.basis.shape[0]

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def __repr__(self):
        return f"Subspace(dim={self.dim}, ambient={self.ambient})"

    def projector(self) -> np.ndarray:
        """Orthogonal projector onto the subspace (n x n)."""
        return self.basis @ self.basis.T

    def sum(self, other: "Subspace") -> "Subspace":
        """Subspace sum U + W."""
        _same_ambient(self, other)
        return span(np.hstack([self.basis, other.basis]), self.tol)

    def complement(self) -> "Subspace":
        """Orthogonal complement within the ambient space."""
        n, k = self.basis.shape
        if k == 0:
            return Subspace(np.eye(n), self.tol)
        if k == n:
            return Subspace(np.zeros((n, 0)), self.tol)
        u = np.linalg.svd(self.basis, full_matrices=True)[0]
        return Subspace(u[:, k:], self.tol)

    def intersect(self, other: "Subspace") -> "Subspace":
        """Subspace intersection, computed as the complement of the sum of
        complements.  (The direct null-space formulation is
        :func:`intersect_nullspace`, kept alive as an independent oracle.)"""
        _same_ambient(self, other)
        return self.complement().sum(other.complement()).complement()

    def containment_defect(self, inner: "Subspace") -> float:
        """Spectral norm of (I - P_self) B_inner; 0 iff inner is contained."""
        _same_ambient(self, inner)
        if inner.dim == 0:
            return 0.0
        residual = inner.basis - self.basis @ (self.basis.T @ inner.basis)
        return float(np.linalg.norm(residual, 2))

    def contains(self, inner: "Subspace") -> bool:
        return self.containment_defect(inner) <= self.tol.assertion_tol()

    def complement_within(self, inner: "Subspace") -> "Subspace":
        """Orthogonal complement of ``inner`` inside ``self``.

        Requires ``inner`` to be contained in ``self`` (within the assertion
        bound); raises :class:`NotContained` otherwise.  The result has
        dimension ``self.dim - inner.dim`` and is orthogonal to ``inner``.
        """
        defect = self.containment_defect(inner)
        if defect > self.tol.assertion_tol():
            raise NotContained(
                f"inner subspace (dim {inner.dim}) is not contained in parent "
                f"(dim {self.dim}); containment defect {defect:.3e}"
            )
        if inner.dim == 0:
            return Subspace(self.basis.copy(), self.tol)
        residual = self.basis - inner.basis @ (inner.basis.T @ self.basis)
        return span(residual, self.tol)

    def same_as(self, other: "Subspace") -> bool:
        """True when the two spans agree within tolerance.  Any two subspaces
        of numerical dimension 0 compare equal."""
        _same_ambient(self, other)
        if self.dim != other.dim:
            return False
        if self.dim == 0:
            return True
        return subspace_distance(self, other) <= self.tol.assertion_tol()


def _same_ambient(u: Subspace, w: Subspace) -> None:
    if u.ambient != w.ambient:
        raise AmbientMismatch(f"ambient dimensions differ: {u.ambient} vs {w.ambient}")


def span(vectors: np.ndarray, tol: ToleranceProfile) -> Subspace:
    """Orthonormal basis of the column space of ``vectors``.

    Rank is the number of singular values ``>= eps_rank * sigma_max``.  A
    block whose overall scale is numerically zero (``sigma_max`` at or below
    the assertion floor) spans nothing; without that floor the relative rule
    would happily rank-1 a matrix of pure round-off.
    """
    v = np.asarray(vectors, dtype=np.float64)
    if v.ndim == 1:
        v = v[:, None]
    n, m = v.shape
    if m == 0:
        return Subspace(np.zeros((n, 0)), tol)
    u, s, _ = np.linalg.svd(v, full_matrices=False)
    if s[0] <= ASSERTION_FLOOR:
        return Subspace(np.zeros((n, 0)), tol)
    rank = int(np.count_nonzero(s >= tol.eps_rank * s[0]))
    return Subspace(u[:, :rank], tol)


def zero_subspace(n: int, tol: ToleranceProfile) -> Subspace:
    return Subspace(np.zeros((n, 0)), tol)


def full_subspace(n: int, tol: ToleranceProfile) -> Subspace:
    return Subspace(np.eye(n), tol)


def is_orthogonal(u: Subspace, w: Subspace) -> tuple[bool, float]:
    """Whether U ⊥ W within eps_orth; returns (verdict, max |<u_i, w_j>|)."""
    _same_ambient(u, w)
    if u.dim == 0 or w.dim == 0:
        return True, 0.0
    worst = float(np.abs(u.basis.T @ w.basis).max())
    return worst <= u.tol.eps_orth, worst


def subspace_distance(u: Subspace, w: Subspace) -> float:
    """Frobenius norm of the difference of orthogonal projectors."""
    _same_ambient(u, w)
    return float(np.linalg.norm(u.projector() - w.projector(), "fro"))


def intersect_nullspace(u: Subspace, w: Subspace) -> Subspace:
    """Intersection via the null space of [B_u | -B_w].

    Algorithmically independent of :meth:`Subspace.intersect`; the test suite
    holds the two routes against each other.
    """
    _same_ambient(u, w)
    if u.dim == 0 or w.dim == 0:
        return zero_subspace(u.ambient, u.tol)
    stacked = np.hstack([u.basis, -w.basis])
    _, s, vh = np.linalg.svd(stacked, full_matrices=True)
    if s[0] <= ASSERTION_FLOOR:
        rank = 0
    else:
        rank = int(np.count_nonzero(s >= u.tol.eps_rank * s[0]))
    null_basis = vh[rank:].T  # coefficient pairs (a; b) with B_u a = B_w b
    if null_basis.shape[1] == 0:
        return zero_subspace(u.ambient, u.tol)
    return span(u.basis @ null_basis[: u.dim, :], u.tol)
