"""Global split decompositions of the standard module and the duality check.

For directions mu, nu in {down, up} and -1 <= i, j <= D the split space is
the intersection of a cumulative dual-idempotent span with a cumulative
idempotent span:

    down/down V_{i,j} = (E*_0 V + ... + E*_i V)   ∩ (E_0 V + ... + E_j V)
    up/down   V_{i,j} = (E*_D V + ... + E*_{D-i} V) ∩ (E_0 V + ... + E_j V)
    down/up   V_{i,j} = (E*_0 V + ... + E*_i V)   ∩ (E_D V + ... + E_{D-j} V)
    up/up     V_{i,j} = (E*_D V + ... + E*_{D-i} V) ∩ (E_D V + ... + E_{D-j} V)

(zero when i or j is -1), and the reduced space is

    tilde V_{i,j} = orthogonal complement of (V_{i-1,j} + V_{i,j-1}) in V_{i,j}.

The (D+1)^2 reduced spaces of one (mu, nu) decompose R^n directly; the
duality statement pairs (down,down) with (up,up) and (down,up) with
(up,down): cells (i,j) and (r,s) are orthogonal unless i + r = D and
j + s = D.  Module pieces recombine into the grid cells by an index rule
checked in :func:`verify_module_reconstruction`.
"""

from dataclasses import dataclass

import numpy as np

from .dual import DualStructure
from .errors import DirectSumViolation, IndexOutOfRange, PairMismatch
from .scheme import AssociationScheme, idempotent_column_spaces
from .subspace import (
    Subspace,
    is_orthogonal,
    span,
    subspace_distance,
    zero_subspace,
)
from .tmodule import ModuleSplit, TModuleRecord
from .tolerances import ToleranceProfile

__all__ = [
    "SplitCaches",
    "SplitGrid",
    "DualityReport",
    "ReconstructionReport",
    "build_split_caches",
    "v_munu",
    "tilde_v",
    "split_grid",
    "verify_duality",
    "verify_module_reconstruction",
    "DUAL_PAIRS",
]

DIRECTIONS = ("down", "up")
DUAL_PAIRS = ((("down", "down"), ("up", "up")), (("down", "up"), ("up", "down")))


@dataclass(frozen=True)
class SplitCaches:
    """Cumulative idempotent spans, computed once per run.

    ``star_prefix[i]`` spans E*_0 V + ... + E*_i V (coordinate vectors of the
    ball of radius i around the base vertex, exactly orthonormal);
    ``star_suffix[i]`` spans E*_D V + ... + E*_{D-i} V.  ``e_prefix`` and
    ``e_suffix`` are the analogues built from the idempotent column spaces in
    the scheme's current (Q-polynomial) order.
    """

    n: int
    diameter: int
    star_prefix: tuple[Subspace, ...]
    star_suffix: tuple[Subspace, ...]
    e_prefix: tuple[Subspace, ...]
    e_suffix: tuple[Subspace, ...]
    tol: ToleranceProfile


def _cumulative(blocks: list[np.ndarray], tol: ToleranceProfile) -> tuple[Subspace, ...]:
    spaces = []
    acc = None
    for block in blocks:
        acc = block if acc is None else np.hstack([acc, block])
        spaces.append(Subspace(acc, tol))
    return tuple(spaces)


def build_split_caches(
    scheme: AssociationScheme, dual: DualStructure, tol: ToleranceProfile
) -> SplitCaches:
    d = scheme.diameter
    n = scheme.n
    eye = np.eye(n)
    star_blocks = []
    for i in range(d + 1):
        members = np.flatnonzero(np.diag(dual.Estar[i]) > 0.5)
        star_blocks.append(eye[:, members])
    e_blocks = [space.basis for space in idempotent_column_spaces(scheme, tol)]
    return SplitCaches(
        n=n,
        diameter=d,
        star_prefix=_cumulative(star_blocks, tol),
        star_suffix=_cumulative(star_blocks[::-1], tol),
        e_prefix=_cumulative(e_blocks, tol),
        e_suffix=_cumulative(e_blocks[::-1], tol),
        tol=tol,
    )


def _check_direction(value: str) -> str:
    if value not in DIRECTIONS:
        raise ValueError(f"direction must be 'down' or 'up', got {value!r}")
    return value


def v_munu(caches: SplitCaches, mu: str, nu: str, i: int, j: int) -> Subspace:
    """The split space for directions (mu, nu) at indices (i, j); the zero
    subspace when i or j is -1.  Raises :class:`IndexOutOfRange` outside
    {-1, ..., D}."""
    _check_direction(mu)
    _check_direction(nu)
    d = caches.diameter
    for name, value in (("i", i), ("j", j)):
        if not (-1 <= value <= d):
            raise IndexOutOfRange(f"{name}={value} outside -1..{d}")
    if i == -1 or j == -1:
        return zero_subspace(caches.n, caches.tol)
    star = caches.star_prefix[i] if mu == "down" else caches.star_suffix[i]
    e_part = caches.e_prefix[j] if nu == "down" else caches.e_suffix[j]
    return star.intersect(e_part)


def tilde_v(caches: SplitCaches, mu: str, nu: str, i: int, j: int) -> Subspace:
    """Reduced split space at (i, j): complement of V_{i-1,j} + V_{i,j-1}
    inside V_{i,j}."""
    parent = v_munu(caches, mu, nu, i, j)
    below = v_munu(caches, mu, nu, i - 1, j).sum(v_munu(caches, mu, nu, i, j - 1))
    return parent.complement_within(below)


@dataclass(frozen=True)
class SplitGrid:
    """All reduced split spaces of one (mu, nu), plus their dimension table
    (rows indexed by the E*-side index i, columns by the E-side index j)."""

    mu: str
    nu: str
    tilde: tuple[tuple[Subspace, ...], ...]
    dims: np.ndarray  # (D+1, D+1) int64

    @property
    def diameter(self) -> int:
        return self.dims.shape[0] - 1


def split_grid(caches: SplitCaches, mu: str, nu: str) -> SplitGrid:
    """Compute the full reduced grid and certify it decomposes R^n directly
    (dimensions sum to n and the concatenated bases have full rank)."""
    _check_direction(mu)
    _check_direction(nu)
    d = caches.diameter
    tol = caches.tol
    full = [[None] * (d + 1) for _ in range(d + 1)]
    for i in range(d + 1):
        for j in range(d + 1):
            full[i][j] = v_munu(caches, mu, nu, i, j)
    zero = zero_subspace(caches.n, tol)
    tilde_rows = []
    dims = np.zeros((d + 1, d + 1), dtype=np.int64)
    for i in range(d + 1):
        row = []
        for j in range(d + 1):
            left = full[i - 1][j] if i > 0 else zero
            up = full[i][j - 1] if j > 0 else zero
            reduced = full[i][j].complement_within(left.sum(up))
            dims[i, j] = reduced.dim
            row.append(reduced)
        tilde_rows.append(tuple(row))

    total = int(dims.sum())
    stacked = np.hstack(
        [cell.basis for row in tilde_rows for cell in row if cell.dim]
    )
    rank = span(stacked, tol).dim
    if total != caches.n or rank != caches.n:
        raise DirectSumViolation(
            f"({mu},{nu}) reduced grid dimensions sum to {total} with "
            f"concatenated rank {rank}, expected {caches.n}"
        )
    return SplitGrid(mu=mu, nu=nu, tilde=tuple(tilde_rows), dims=dims)


@dataclass(frozen=True)
class DualityReport:
    """Sweep result for one dual pair of grids.

    ``worst_offdiagonal`` is the largest inner product among cell pairs that
    the duality statement requires to be orthogonal (i + r != D or
    j + s != D); ``exempt_max`` is the largest inner product among exempt
    pairs (i + r = D and j + s = D), the control showing the statement has
    teeth (non-vacuity).  ``dim_corollary_ok`` is the exact integer check
    dims_first[i, j] == dims_second[D-i, D-j].
    """

    pair: str  # "dd_uu" | "du_ud"
    worst_offdiagonal: float
    witness: tuple[int, int, int, int] | None
    exempt_max: float
    exempt_witness: tuple[int, int, int, int] | None
    dim_corollary_ok: bool
    bound: float

    @property
    def ok(self) -> bool:
        return self.worst_offdiagonal <= self.bound and self.dim_corollary_ok


def _pair_name(mu: str, nu: str) -> str:
    return mu[0] + nu[0]


def verify_duality(
    first: SplitGrid, second: SplitGrid, tol: ToleranceProfile
) -> DualityReport:
    """Check the duality statement on a dual pair of grids.

    Accepts exactly {(down,down), (up,up)} or {(down,up), (up,down)} in
    either order (:class:`PairMismatch` otherwise).  Sweeps all index
    quadruples (i, j, r, s): cells must be orthogonal unless i + r = D and
    j + s = D, and the dimension tables must satisfy the point-reflection
    identity exactly.
    """
    got = {(first.mu, first.nu), (second.mu, second.nu)}
    if got == {("down", "down"), ("up", "up")}:
        pair = "dd_uu"
    elif got == {("down", "up"), ("up", "down")}:
        pair = "du_ud"
    else:
        raise PairMismatch(
            f"grids {sorted(got)} do not form a dual pair; expected "
            "{(down,down),(up,up)} or {(down,up),(up,down)}"
        )
    d = first.diameter
    worst = 0.0
    witness = None
    exempt_max = 0.0
    exempt_witness = None
    for i in range(d + 1):
        for j in range(d + 1):
            cell = first.tilde[i][j]
            if cell.dim == 0:
                continue
            for r in range(d + 1):
                for s in range(d + 1):
                    other = second.tilde[r][s]
                    if other.dim == 0:
                        continue
                    _, value = is_orthogonal(cell, other)
                    if i + r == d and j + s == d:
                        if value > exempt_max:
                            exempt_max = value
                            exempt_witness = (i, j, r, s)
                    elif value > worst:
                        worst = value
                        witness = (i, j, r, s)
    corollary = bool(
        (first.dims == second.dims[::-1, ::-1]).all()
    )
    return DualityReport(
        pair=pair,
        worst_offdiagonal=worst,
        witness=witness,
        exempt_max=exempt_max,
        exempt_witness=exempt_witness,
        dim_corollary_ok=corollary,
        bound=tol.eps_orth,
    )


@dataclass(frozen=True)
class ReconstructionReport:
    """Agreement between each reduced grid cell and the sum of the module
    split pieces that the index rule sends there."""

    mu: str
    nu: str
    worst_distance: float
    worst_cell: tuple[int, int] | None
    bound: float

    @property
    def ok(self) -> bool:
        return self.worst_distance <= self.bound


def _target_cell(
    mu: str, nu: str, record: TModuleRecord, h: int, diameter: int
) -> tuple[int, int]:
    """Grid cell receiving piece h of a module with endpoint rho, dual
    endpoint tau and diameter d:

        down/down -> (rho + h,         tau + d - h)
        up/down   -> (D - rho - d + h, tau + d - h)
        down/up   -> (rho + h,         D - tau - h)
        up/up     -> (D - rho - d + h, D - tau - h)
    """
    rho, tau, d = record.endpoint, record.dual_endpoint, record.diameter
    i = rho + h if mu == "down" else diameter - rho - d + h
    j = tau + d - h if nu == "down" else diameter - tau - h
    return i, j


def verify_module_reconstruction(
    grid: SplitGrid,
    modules: list[tuple[TModuleRecord, ModuleSplit]],
    tol: ToleranceProfile,
    bound: float = 1e-7,
) -> ReconstructionReport:
    """Rebuild every reduced cell from module split pieces and compare.

    Each (module, h) piece lands in exactly one cell via the index rule;
    cells receiving nothing must be zero.  Distance is the Frobenius norm of
    the projector difference; the default bound is looser than eps_orth
    because two layers of subspace arithmetic compound."""
    d = grid.diameter
    buckets: dict[tuple[int, int], list[np.ndarray]] = {}
    for record, msplit in modules:
        if (msplit.mu, msplit.nu) != (grid.mu, grid.nu):
            raise PairMismatch(
                f"module split ({msplit.mu},{msplit.nu}) does not match grid "
                f"({grid.mu},{grid.nu})"
            )
        for h, piece in enumerate(msplit.pieces):
            if piece.dim == 0:
                continue
            cell = _target_cell(grid.mu, grid.nu, record, h, d)
            buckets.setdefault(cell, []).append(piece.basis)
    worst = 0.0
    worst_cell = None
    for i in range(d + 1):
        for j in range(d + 1):
            blocks = buckets.get((i, j))
            if blocks:
                predicted = span(np.hstack(blocks), tol)
            else:
                predicted = zero_subspace(grid.tilde[i][j].ambient, tol)
            value = subspace_distance(predicted, grid.tilde[i][j])
            if value > worst:
                worst = value
                worst_cell = (i, j)
    return ReconstructionReport(
        mu=grid.mu, nu=grid.nu, worst_distance=worst, worst_cell=worst_cell,
        bound=bound,
    )
