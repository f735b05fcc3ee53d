"""Decomposition of the standard module under the algebra generated by the
adjacency matrix A and the dual adjacency matrix A*.

The strategy: compute an orthonormal (Frobenius) basis of the commutant
{M : MA = AM, MA* = A*M}, draw a seeded pseudo-random *symmetric* element of
it, and read the irreducible modules off its eigenspaces.  Candidates are
accepted only after passing an invariance check and a cyclic-closure
irreducibility check; a failed candidate triggers a redraw with a derived
seed (up to 8 attempts).
"""

from dataclasses import dataclass

import numpy as np

from .errors import (
    DecompositionFailed,
    DirectSumViolation,
    NonContiguousSupport,
)
from .subspace import Subspace, is_orthogonal, span, zero_subspace
from .tolerances import ToleranceProfile

__all__ = [
    "TModuleRecord",
    "ModuleSplit",
    "TDPairReport",
    "ModuleOrthogonalityReport",
    "unit_coefficients",
    "commutant",
    "closure_span",
    "decompose_standard_module",
    "module_parameters",
    "build_tmodules",
    "verify_td_pair",
    "module_split",
    "verify_module_orthogonality",
]

_MASK64 = (1 << 64) - 1


def _splitmix64(seed: int):
    """Deterministic, platform-independent 64-bit stream (splitmix style).

    Each step advances the state by the golden-ratio increment
    0x9E3779B97F4B9C15 and mixes it through two xor-shift/multiply rounds
    (shifts 30 and 27, multipliers 0xBF58476D1CE4E5B9 and 0x94D049BB133111EB)
    followed by a final 31-bit xor-shift.  All arithmetic is modulo 2**64.
    """
    state = seed & _MASK64
    while True:
        state = (state + 0x9E3779B97F4B9C15) & _MASK64
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
        z ^= z >> 31
        yield z


class _CoefficientStream:
    """Uniform floats in [-1, 1) expanded from a 64-bit seed via splitmix64."""

    def __init__(self, seed: int):
        self._gen = _splitmix64(int(seed))

    def take(self, count: int) -> np.ndarray:
        return np.array(
            [(next(self._gen) >> 11) * 2.0**-52 - 1.0 for _ in range(count)]
        )


def unit_coefficients(seed: int, count: int) -> np.ndarray:
    """First ``count`` coefficients of the stream for ``seed`` (for tests)."""
    return _CoefficientStream(seed).take(count)


@dataclass(frozen=True)
class TModuleRecord:
    """An irreducible module with its slice data.

    ``estar_slices[h]`` is E*_{endpoint+h} W and ``e_slices[h]`` is
    E_{dual_endpoint+h} W, h = 0..diameter; slices outside the support are
    zero and not stored.
    """

    basis: Subspace
    endpoint: int  # min i with E*_i W != 0
    dual_endpoint: int  # min i with E_i W != 0
    diameter: int  # support length - 1 (equal on both sides)
    estar_slices: tuple[Subspace, ...]
    e_slices: tuple[Subspace, ...]

    @property
    def dim(self) -> int:
        return self.basis.dim


@dataclass(frozen=True)
class ModuleSplit:
    """The pieces W^{mu,nu}_h, h = 0..diameter, for one (mu, nu)."""

    mu: str  # "down" | "up"  (E*-side)
    nu: str  # "down" | "up"  (E-side)
    pieces: tuple[Subspace, ...]


@dataclass(frozen=True)
class TDPairReport:
    """Evidence that (A, A*) act on a module as a tridiagonal pair."""

    restriction_symmetry_defect: float  # diagonalizability: restrictions stay symmetric
    a_offband_on_estar_slices: float  # A three-term action on the E*-slices
    astar_offband_on_e_slices: float  # A* three-term action on the E-slices
    closure_dim: int  # dim of the cyclic closure of a random vector
    module_dim: int
    bound: float

    @property
    def irreducible(self) -> bool:
        return self.closure_dim == self.module_dim

    @property
    def max_violation(self) -> float:
        return max(
            self.restriction_symmetry_defect,
            self.a_offband_on_estar_slices,
            self.astar_offband_on_e_slices,
        )

    @property
    def ok(self) -> bool:
        return self.irreducible and self.max_violation <= self.bound


@dataclass(frozen=True)
class ModuleOrthogonalityReport:
    """Worst inner product among split pieces that must be orthogonal:
    W^{dd}_h vs W^{uu}_l and W^{du}_h vs W^{ud}_l for h + l != diameter."""

    worst: float
    witness: tuple[str, int, str, int] | None  # (pair-kind, h, pair-kind, l)
    checked_pairs: int
    bound: float

    @property
    def ok(self) -> bool:
        return self.worst <= self.bound


def commutant(
    a: np.ndarray, astar: np.ndarray, tol: ToleranceProfile
) -> list[np.ndarray]:
    """Orthonormal (Frobenius) basis of {M : MA = AM, MA* = A*M}.

    Any M commuting with the symmetric matrix A is block diagonal in an
    eigenbasis of A, so the unknowns are restricted to those blocks (sum of
    squared eigenspace dimensions, far fewer than n^2) and only the
    constraint against A* is solved as a null-space problem.
    """
    n = a.shape[0]
    w, u = np.linalg.eigh(a)
    gap = tol.eps_eig * max(1.0, float(np.abs(w).max()))
    blocks = []  # (start, stop) index ranges of eigenvalue clusters
    start = 0
    for i in range(1, n):
        if w[i] - w[i - 1] > gap:
            blocks.append((start, i))
            start = i
    blocks.append((start, n))

    b = u.T @ astar @ u
    sizes = [stop - start for start, stop in blocks]
    offsets = np.concatenate([[0], np.cumsum([s * s for s in sizes])])
    unknowns = int(offsets[-1])

    system = np.zeros((n * n, unknowns))
    row = 0
    for gi, (g0, g1) in enumerate(blocks):
        mg = sizes[gi]
        for hi, (h0, h1) in enumerate(blocks):
            mh = sizes[hi]
            bgh = b[g0:g1, h0:h1]
            rows = slice(row, row + mg * mh)
            # row-major vec: vec(X_g B_gh) = (I ⊗ B_gh^T) vec(X_g),
            #                vec(B_gh X_h) = (B_gh ⊗ I) vec(X_h)
            system[rows, offsets[gi] : offsets[gi + 1]] += np.kron(np.eye(mg), bgh.T)
            system[rows, offsets[hi] : offsets[hi + 1]] -= np.kron(bgh, np.eye(mh))
            row += mg * mh

    _, s, vh = np.linalg.svd(system, full_matrices=True)
    if s.size and s[0] > 0:
        rank = int(np.count_nonzero(s >= tol.eps_rank * s[0]))
    else:
        rank = 0
    null_vectors = vh[rank:]

    basis = []
    for coeffs in null_vectors:
        m_tilde = np.zeros((n, n))
        for gi, (g0, g1) in enumerate(blocks):
            mg = sizes[gi]
            m_tilde[g0:g1, g0:g1] = coeffs[offsets[gi] : offsets[gi + 1]].reshape(
                mg, mg
            )
        basis.append(u @ m_tilde @ u.T)
    return basis


def closure_span(
    a: np.ndarray,
    astar: np.ndarray,
    vector: np.ndarray,
    tol: ToleranceProfile,
) -> Subspace:
    """Span of the orbit of ``vector`` under all words in {A, A*}.

    Grows a basis by applying A and A* and keeping genuinely new directions.
    The cutoff is measured against the pre-projection block scale, not the
    residual, so a block already contained in the current span contributes
    nothing.
    """
    n = a.shape[0]
    norm = float(np.linalg.norm(vector))
    if norm <= tol.assertion_tol():
        return zero_subspace(n, tol)
    scale = max(
        1.0,
        float(np.abs(a).sum(axis=1).max()),
        float(np.abs(astar).sum(axis=1).max()),
    )
    basis = (vector / norm)[:, None]
    while basis.shape[1] < n:
        block = np.hstack([a @ basis, astar @ basis])
        residual = block - basis @ (basis.T @ block)
        residual -= basis @ (basis.T @ residual)  # second pass for orthogonality
        u, s, _ = np.linalg.svd(residual, full_matrices=False)
        keep = s > tol.eps_rank * scale
        if not keep.any():
            break
        basis = np.hstack([basis, u[:, keep]])
    return Subspace(basis, tol)


def _invariance_defect(matrix: np.ndarray, basis: np.ndarray) -> float:
    image = matrix @ basis
    return float(np.linalg.norm(image - basis @ (basis.T @ image), "fro"))


def decompose_standard_module(
    a: np.ndarray,
    astar: np.ndarray,
    seed: int,
    tol: ToleranceProfile,
    commutant_basis: list[np.ndarray] | None = None,
    max_attempts: int = 8,
) -> tuple[list[Subspace], int]:
    """Split R^n into irreducible modules of the algebra generated by A, A*.

    Draws a symmetric commutant element with splitmix64 coefficients from
    ``seed``, clusters its eigenvalues, and accepts the eigenspaces only if
    every one is (a) invariant under A and A* and (b) irreducible in the
    cyclic-closure sense (the orbit of a random vector fills the candidate).
    Attempt k uses seed + k; returns (modules, attempts used).  Raises
    :class:`DecompositionFailed` after ``max_attempts`` failures and
    :class:`DirectSumViolation` if accepted modules fail to fill R^n.
    """
    n = a.shape[0]
    if commutant_basis is None:
        commutant_basis = commutant(a, astar, tol)
    sym_basis = [(m + m.T) / 2.0 for m in commutant_basis]
    scale = max(
        1.0,
        float(np.abs(a).sum(axis=1).max()),
        float(np.abs(astar).sum(axis=1).max()),
    )
    inv_bound = tol.assertion_tol() * scale

    for attempt in range(max_attempts):
        stream = _CoefficientStream(seed + attempt)
        coeffs = stream.take(len(sym_basis))
        s_elem = sum(c * m for c, m in zip(coeffs, sym_basis))
        s_elem = (s_elem + s_elem.T) / 2.0
        w, q = np.linalg.eigh(s_elem)
        w_scale = max(1.0, float(np.abs(w).max()))
        gap = tol.eps_eig * w_scale
        clusters = []
        start = 0
        for i in range(1, n):
            if w[i] - w[i - 1] > gap:
                clusters.append((start, i))
                start = i
        clusters.append((start, n))

        # Computed eigenvectors of clusters separated by a gap g carry
        # ~macheps/g cross-cluster contamination; demand gaps well above the
        # cluster-resolution knob so the contamination stays near round-off,
        # and redraw otherwise.
        safe_gap = np.sqrt(tol.eps_eig) * w_scale
        boundary_gaps = [
            w[clusters[t + 1][0]] - w[clusters[t][1] - 1]
            for t in range(len(clusters) - 1)
        ]
        if any(g < safe_gap for g in boundary_gaps):
            continue

        candidates = [Subspace(q[:, c0:c1], tol) for c0, c1 in clusters]
        accepted = True
        for cand in candidates:
            if (
                _invariance_defect(a, cand.basis) > inv_bound
                or _invariance_defect(astar, cand.basis) > inv_bound
            ):
                accepted = False
                break
            vector = cand.basis @ stream.take(cand.dim)
            closure = closure_span(a, astar, vector, tol)
            if closure.dim != cand.dim:
                accepted = False
                break
        if accepted:
            total = sum(c.dim for c in candidates)
            stacked = np.hstack([c.basis for c in candidates])
            rank = span(stacked, tol).dim
            if total != n or rank != n:
                raise DirectSumViolation(
                    f"modules of dimension {[c.dim for c in candidates]} "
                    f"sum to {total} with concatenated rank {rank}, expected {n}"
                )
            return candidates, attempt + 1

    raise DecompositionFailed(
        f"no admissible eigenspace decomposition after {max_attempts} seeded "
        f"attempts (seeds {seed}..{seed + max_attempts - 1})"
    )


def module_parameters(
    module: Subspace,
    estar: np.ndarray,
    idempotents: np.ndarray,
    tol: ToleranceProfile,
) -> TModuleRecord:
    """Slice a module by the dual idempotents and the idempotents.

    Returns the record with endpoint, dual endpoint, diameter and both slice
    families.  Raises :class:`NonContiguousSupport` when either support has
    gaps, the slice dimensions do not add up to the module dimension, or the
    two supports have different lengths.
    """
    count = estar.shape[0]

    def slice_one(block):
        # The module basis has unit columns, so honest slices have singular
        # values of order one while spurious ones sit at eigenvector round-off.
        # Rank against that unit scale with the cluster-resolution knob -- the
        # per-block relative rule would keep a block made of pure noise.
        u, s, _ = np.linalg.svd(block, full_matrices=False)
        cutoff = max(tol.eps_rank * (s[0] if s.size else 0.0), tol.eps_eig)
        rank = int(np.sum(s >= cutoff))
        return Subspace(u[:, :rank], tol)

    def slice_family(projectors):
        slices = [slice_one(projectors[i] @ module.basis) for i in range(count)]
        support = [i for i, s in enumerate(slices) if s.dim > 0]
        if not support or support != list(range(support[0], support[-1] + 1)):
            raise NonContiguousSupport(f"support {support} is empty or has gaps")
        if sum(s.dim for s in slices) != module.dim:
            raise NonContiguousSupport(
                f"slice dimensions {[s.dim for s in slices]} do not sum to "
                f"module dimension {module.dim}"
            )
        return support[0], [slices[i] for i in support]

    endpoint, estar_slices = slice_family(estar)
    dual_endpoint, e_slices = slice_family(idempotents)
    if len(estar_slices) != len(e_slices):
        raise NonContiguousSupport(
            f"diameter mismatch: {len(estar_slices) - 1} on the dual side vs "
            f"{len(e_slices) - 1} on the idempotent side"
        )
    return TModuleRecord(
        basis=module,
        endpoint=endpoint,
        dual_endpoint=dual_endpoint,
        diameter=len(estar_slices) - 1,
        estar_slices=tuple(estar_slices),
        e_slices=tuple(e_slices),
    )


def build_tmodules(
    a: np.ndarray,
    astar: np.ndarray,
    estar: np.ndarray,
    idempotents: np.ndarray,
    seed: int,
    tol: ToleranceProfile,
    commutant_basis: list[np.ndarray] | None = None,
) -> tuple[list[TModuleRecord], int]:
    """Decompose and annotate, sorted by (endpoint, dual endpoint, diameter,
    dim) for stable reporting.  Returns (records, attempts)."""
    modules, attempts = decompose_standard_module(
        a, astar, seed, tol, commutant_basis=commutant_basis
    )
    records = [module_parameters(m, estar, idempotents, tol) for m in modules]
    records.sort(key=lambda r: (r.endpoint, r.dual_endpoint, r.diameter, r.dim))
    return records, attempts


def verify_td_pair(
    record: TModuleRecord,
    a: np.ndarray,
    astar: np.ndarray,
    tol: ToleranceProfile,
    seed: int = 0,
) -> TDPairReport:
    """Check the tridiagonal-pair conditions on one module.

    (i) both restrictions are (real symmetric, hence) diagonalizable —
    reported as the symmetry defect of the restricted matrices;
    (ii)/(iii) A acts three-term on the E*-slices and A* acts three-term on
    the E-slices — reported as the largest off-band block norm;
    (iv) no proper invariant subspace — checked as cyclic closure of a seeded
    random vector filling the module.
    """
    basis = record.basis.basis
    restr_a = basis.T @ a @ basis
    restr_astar = basis.T @ astar @ basis
    symmetry_defect = max(
        float(np.abs(restr_a - restr_a.T).max()),
        float(np.abs(restr_astar - restr_astar.T).max()),
    )

    def offband(matrix, slices):
        worst = 0.0
        for i, si in enumerate(slices):
            if si.dim == 0:
                continue
            image = matrix @ si.basis
            for j, sj in enumerate(slices):
                if abs(i - j) <= 1 or sj.dim == 0:
                    continue
                worst = max(worst, float(np.linalg.norm(sj.basis.T @ image, "fro")))
        return worst

    vector = basis @ _CoefficientStream(seed).take(record.dim)
    closure = closure_span(a, astar, vector, tol)
    return TDPairReport(
        restriction_symmetry_defect=symmetry_defect,
        a_offband_on_estar_slices=offband(a, record.estar_slices),
        astar_offband_on_e_slices=offband(astar, record.e_slices),
        closure_dim=closure.dim,
        module_dim=record.dim,
        bound=tol.eps_orth,
    )


def _prefix_space(slices, lo: int, hi: int, tol: ToleranceProfile) -> Subspace:
    """Sum of mutually orthogonal slices lo..hi (inclusive), by concatenation."""
    blocks = [slices[i].basis for i in range(lo, hi + 1)]
    return Subspace(np.hstack(blocks), tol)


def module_split(
    record: TModuleRecord, mu: str, nu: str, tol: ToleranceProfile
) -> ModuleSplit:
    """The (mu, nu)-split of a module: for h = 0..d the piece is the
    intersection of a prefix/suffix of the E*-slices with a suffix/prefix of
    the E-slices:

        down/down: (slices* 0..h)     ∩ (slices 0..d-h)
        up/down:   (slices* d-h..d)   ∩ (slices 0..d-h)
        down/up:   (slices* 0..h)     ∩ (slices h..d)
        up/up:     (slices* d-h..d)   ∩ (slices h..d)

    (slice indices relative to the endpoints).  The pieces must sum directly
    to the module; :class:`DirectSumViolation` otherwise.
    """
    if mu not in ("down", "up") or nu not in ("down", "up"):
        raise ValueError(f"mu/nu must be 'down' or 'up', got {mu!r}, {nu!r}")
    d = record.diameter
    pieces = []
    for h in range(d + 1):
        star_part = (
            _prefix_space(record.estar_slices, 0, h, tol)
            if mu == "down"
            else _prefix_space(record.estar_slices, d - h, d, tol)
        )
        e_part = (
            _prefix_space(record.e_slices, 0, d - h, tol)
            if nu == "down"
            else _prefix_space(record.e_slices, h, d, tol)
        )
        pieces.append(star_part.intersect(e_part))
    total = sum(p.dim for p in pieces)
    stacked = np.hstack([p.basis for p in pieces])
    rank = span(stacked, tol).dim if stacked.shape[1] else 0
    if total != record.dim or rank != record.dim:
        raise DirectSumViolation(
            f"({mu},{nu})-split pieces of dimensions {[p.dim for p in pieces]} "
            f"sum to {total} with rank {rank}, expected {record.dim}"
        )
    return ModuleSplit(mu=mu, nu=nu, pieces=tuple(pieces))


def verify_module_orthogonality(
    splits: dict[tuple[str, str], ModuleSplit],
    diameter: int,
    tol: ToleranceProfile,
) -> ModuleOrthogonalityReport:
    """Check W^{dd}_h ⊥ W^{uu}_l and W^{du}_h ⊥ W^{ud}_l for h + l != d.

    Vacuously passes when d = 0 (no pairs to check)."""
    worst = 0.0
    witness = None
    checked = 0
    for (first, second) in ((("down", "down"), ("up", "up")),
                            (("down", "up"), ("up", "down"))):
        for h, piece in enumerate(splits[first].pieces):
            for l, other in enumerate(splits[second].pieces):
                if h + l == diameter:
                    continue
                checked += 1
                _, value = is_orthogonal(piece, other)
                if value > worst:
                    worst = value
                    witness = ("".join(k[0] for k in first), h,
                               "".join(k[0] for k in second), l)
    return ModuleOrthogonalityReport(
        worst=worst, witness=witness, checked_pairs=checked, bound=tol.eps_orth
    )
