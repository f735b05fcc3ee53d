"""Dual Bose–Mesner algebra with respect to a base vertex.

Dual idempotents E*_i (diagonal 0/1 indicators of the subconstituents),
dual distance matrices A*_i = n · diag(E_i[x, :]), dual eigenvalues, and the
two tridiagonal relations that tie the algebra to its dual.
"""

from dataclasses import dataclass

import numpy as np

from .errors import NonConstantOnSubconstituent, VertexOutOfRange
from .graphs import DistanceData, Graph
from .scheme import AssociationScheme
from .tolerances import ToleranceProfile

__all__ = [
    "DualStructure",
    "TridiagonalReport",
    "dual_idempotents",
    "dual_distance_matrices",
    "build_dual",
    "verify_tridiagonal_relations",
]


@dataclass(frozen=True)
class DualStructure:
    """Dual algebra data at a fixed base vertex.

    ``Estar[i]`` indicates the i-th subconstituent (distance i from the
    base); ``Astar[i]`` is built from the i-th primitive idempotent *in the
    scheme's current (Q-polynomial) order*, so ``Astar[1]`` is the dual
    adjacency matrix.  Matrices are stored dense; n is small.
    """

    base: int
    Estar: np.ndarray  # (D+1, n, n) diagonal 0/1
    Astar: np.ndarray  # (D+1, n, n) diagonal
    theta_star: np.ndarray  # (D+1,) dual eigenvalues of Astar[1]


@dataclass(frozen=True)
class TridiagonalReport:
    """Largest off-tridiagonal block norms for the two relations."""

    max_a_offband: float  # ||E*_j A E*_i||_F over |i - j| > 1
    max_astar_offband: float  # ||E_j A* E_i||_F over |i - j| > 1
    bound: float

    @property
    def a_ok(self) -> bool:
        return self.max_a_offband <= self.bound

    @property
    def astar_ok(self) -> bool:
        return self.max_astar_offband <= self.bound

    @property
    def ok(self) -> bool:
        return self.a_ok and self.astar_ok


def dual_idempotents(g: Graph, dd: DistanceData, base: int) -> np.ndarray:
    """Diagonal 0/1 projectors onto the subconstituents of the base vertex."""
    if not (0 <= base < g.n):
        raise VertexOutOfRange(f"base vertex {base} not in [0, {g.n})")
    return np.stack(
        [
            np.diag((dd.dist[base] == i).astype(np.float64))
            for i in range(dd.diameter + 1)
        ]
    )


def dual_distance_matrices(
    scheme: AssociationScheme, base: int, tol: ToleranceProfile
) -> tuple[np.ndarray, np.ndarray]:
    """Dual distance matrices A*_i = n · diag(E_i[base, :]) and the dual
    eigenvalues theta*_i.

    Expects the scheme's idempotents to already sit in the selected
    Q-polynomial order.  theta*_i is read off the dual adjacency A*_1, whose
    diagonal must be constant on each subconstituent
    (:class:`NonConstantOnSubconstituent` otherwise); A*_0 is snapped to the
    identity after the same check.
    """
    n = scheme.n
    if not (0 <= base < n):
        raise VertexOutOfRange(f"base vertex {base} not in [0, {n})")
    d = scheme.diameter
    astar = np.stack([np.diag(n * scheme.E[i][base]) for i in range(d + 1)])
    bound = tol.assertion_tol()

    defect = float(np.abs(astar[0] - np.eye(n)).max())
    if defect > bound:
        raise NonConstantOnSubconstituent(
            f"A*_0 deviates from the identity by {defect:.3e}"
        )
    astar[0] = np.eye(n)

    dual_adjacency = np.diag(astar[1])
    theta_star = np.empty(d + 1)
    for i in range(d + 1):
        members = scheme.A[i][base] == 1.0
        values = dual_adjacency[members]
        spread = float(values.max() - values.min())
        if spread > bound:
            raise NonConstantOnSubconstituent(
                f"dual adjacency is not constant on subconstituent {i} "
                f"(spread {spread:.3e})"
            )
        theta_star[i] = values.mean()
    return astar, theta_star


def build_dual(
    g: Graph,
    dd: DistanceData,
    scheme: AssociationScheme,
    base: int,
    tol: ToleranceProfile,
) -> DualStructure:
    estar = dual_idempotents(g, dd, base)
    astar, theta_star = dual_distance_matrices(scheme, base, tol)
    return DualStructure(base=base, Estar=estar, Astar=astar, theta_star=theta_star)


def verify_tridiagonal_relations(
    scheme: AssociationScheme,
    dual: DualStructure,
    tol: ToleranceProfile,
) -> TridiagonalReport:
    """Check A E*_i V ⊆ E*_{i-1}V + E*_iV + E*_{i+1}V and the dual statement
    A* E_i V ⊆ E_{i-1}V + E_iV + E_{i+1}V (indices in the scheme's current
    idempotent order).

    The first holds for any distance-regular graph; the second is exactly
    what a Q-polynomial ordering buys, so it is the one that breaks when the
    idempotents are shuffled into a non-Q-polynomial order.
    """
    d = scheme.diameter
    adjacency = scheme.A[1]
    dual_adjacency = dual.Astar[1]
    max_a = 0.0
    max_astar = 0.0
    for i in range(d + 1):
        a_estar = adjacency @ dual.Estar[i]
        astar_e = dual_adjacency @ scheme.E[i]
        for j in range(d + 1):
            if abs(i - j) <= 1:
                continue
            max_a = max(max_a, float(np.linalg.norm(dual.Estar[j] @ a_estar, "fro")))
            max_astar = max(
                max_astar, float(np.linalg.norm(scheme.E[j] @ astar_e, "fro"))
            )
    return TridiagonalReport(
        max_a_offband=max_a, max_astar_offband=max_astar, bound=tol.eps_orth
    )
