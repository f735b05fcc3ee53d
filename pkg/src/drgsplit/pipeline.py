"""End-to-end verification pipeline.

``run_verify`` drives: graph construction → BFS + distance-regularity
certification → Bose–Mesner scheme (cached) → Q-polynomial ordering → dual
algebra → four reduced split grids → duality + dimension corollary →
irreducible module decomposition → per-module tridiagonal-pair and split
checks → module reconstruction of every grid cell.  Structural failures
raise; quantitative invariants are recorded as named checks that decide the
exit code at the end, with the duality check mapped to its own code.
"""

from dataclasses import dataclass, field
from enum import IntEnum
import hashlib

import numpy as np

from .cache import load_scheme_cache, store_scheme_cache
from .dual import build_dual, verify_tridiagonal_relations
from .errors import (
    DecompositionFailed,
    DiameterTooSmall,
    DirectSumViolation,
    DrgSplitError,
    IndexOutOfRange,
    NotDistanceRegular,
    NotQPolynomial,
)
from .graphs import (
    Graph,
    build_family,
    certify_distance_regular,
    distances,
    graph_to_text,
    read_graph,
)
from .scheme import (
    apply_ordering,
    build_scheme,
    find_qpoly_orderings,
    qpoly_margin,
)
from .split import (
    DUAL_PAIRS,
    build_split_caches,
    split_grid,
    verify_duality,
    verify_module_reconstruction,
)
from .subspace import is_orthogonal
from .tmodule import (
    build_tmodules,
    commutant,
    module_split,
    verify_module_orthogonality,
    verify_td_pair,
)
from .tolerances import ToleranceProfile

__all__ = ["ExitCode", "RunConfig", "Check", "VerifyResult", "DimsResult",
           "run_verify", "run_dims", "RECONSTRUCTION_BOUND", "exit_code_for_error"]

#: Projector-distance bound for rebuilding grid cells from module pieces.
RECONSTRUCTION_BOUND = 1e-7

_PAIRS = (("down", "down"), ("down", "up"), ("up", "down"), ("up", "up"))


class ExitCode(IntEnum):
    OK = 0
    NOT_DISTANCE_REGULAR = 10
    NOT_Q_POLYNOMIAL = 11
    DIRECT_SUM_VIOLATION = 12
    DUALITY_VIOLATION = 13
    DECOMPOSITION_FAILED = 14
    DIAMETER_TOO_SMALL = 15
    DOMAIN_ERROR = 16
    CHECK_FAILED = 20


def exit_code_for_error(exc: DrgSplitError) -> ExitCode:
    if isinstance(exc, NotDistanceRegular):
        return ExitCode.NOT_DISTANCE_REGULAR
    if isinstance(exc, NotQPolynomial):
        return ExitCode.NOT_Q_POLYNOMIAL
    if isinstance(exc, DirectSumViolation):
        return ExitCode.DIRECT_SUM_VIOLATION
    if isinstance(exc, DecompositionFailed):
        return ExitCode.DECOMPOSITION_FAILED
    if isinstance(exc, DiameterTooSmall):
        return ExitCode.DIAMETER_TOO_SMALL
    return ExitCode.DOMAIN_ERROR


@dataclass(frozen=True)
class RunConfig:
    """Everything that determines a run (embedded verbatim in reports)."""

    family: str | None = None
    params: tuple[int, ...] = ()
    graph_path: str | None = None
    base: int = 0
    ordering: int = 0
    seed: int = 0
    tol: ToleranceProfile = field(default_factory=ToleranceProfile)
    fmt: str = "json"
    cache_dir: str | None = None

    def __post_init__(self):
        if (self.family is None) == (self.graph_path is None):
            raise ValueError("exactly one of family or graph_path must be given")
        if self.fmt not in ("json", "csv", "markdown"):
            raise ValueError(f"unknown output format {self.fmt!r}")

    def to_dict(self) -> dict:
        if self.graph_path is not None:
            source = {"kind": "file", "path": str(self.graph_path)}
        else:
            source = {
                "kind": "family",
                "family": self.family,
                "params": list(self.params),
            }
        return {
            "graph_source": source,
            "base": self.base,
            "ordering": self.ordering,
            "seed": self.seed,
            "tolerances": self.tol.to_dict(),
            "format": self.fmt,
            "cache_dir": self.cache_dir,
        }


@dataclass
class Check:
    name: str
    value: float | int
    threshold: float | int
    ok: bool

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "value": self.value,
            "threshold": self.threshold,
            "ok": self.ok,
        }


@dataclass
class DimsResult:
    graph: Graph
    dims_by_pair: dict[str, list[list[int]]]
    # handles for further processing / tests
    scheme: object = None
    dual: object = None
    caches: object = None
    grids: dict = None
    orderings: list = None


@dataclass
class VerifyResult:
    report: dict
    exit_code: ExitCode
    ok: bool
    # non-serialized handles for tests and the acceptance suite
    graph: Graph = None
    scheme: object = None
    dual: object = None
    grids: dict = None
    records: list = None
    splits: list = None
    checks: list = None


def _load_graph(config: RunConfig) -> Graph:
    if config.graph_path is not None:
        return read_graph(config.graph_path)
    return build_family(config.family, config.params)


def _pair_key(mu: str, nu: str) -> str:
    return mu[0] + nu[0]


def _scheme_stage(config: RunConfig, dd, inum, graph_text: str):
    """Build the scheme and ordering list, consulting the cache when enabled."""
    tol = config.tol
    cached = None
    if config.cache_dir:
        cached = load_scheme_cache(config.cache_dir, graph_text, tol)
    if cached is not None:
        scheme = build_scheme(dd, inum, tol, theta=cached.theta)
        orderings = cached.orderings
    else:
        scheme = build_scheme(dd, inum, tol)
        orderings = find_qpoly_orderings(scheme.krein, tol)
        if config.cache_dir:
            store_scheme_cache(
                config.cache_dir,
                graph_text,
                tol,
                scheme.theta,
                scheme.mult,
                scheme.krein,
                orderings,
            )
    return scheme, orderings


def _grids_stage(config: RunConfig, g: Graph):
    tol = config.tol
    dd = distances(g)
    inum = certify_distance_regular(g, dd)
    graph_text = graph_to_text(g)
    scheme, orderings = _scheme_stage(config, dd, inum, graph_text)
    if not orderings:
        raise NotQPolynomial(
            f"no Q-polynomial ordering of the idempotents exists for {g.name or 'graph'}"
        )
    if not (0 <= config.ordering < len(orderings)):
        raise IndexOutOfRange(
            f"ordering selector {config.ordering} out of range; "
            f"{len(orderings)} ordering(s) available"
        )
    order = orderings[config.ordering]
    oscheme = apply_ordering(scheme, order)
    dual = build_dual(g, dd, oscheme, config.base, tol)
    caches = build_split_caches(oscheme, dual, tol)
    grids = {
        _pair_key(mu, nu): split_grid(caches, mu, nu) for mu, nu in _PAIRS
    }
    return dd, inum, graph_text, oscheme, orderings, dual, caches, grids


def run_dims(config: RunConfig) -> DimsResult:
    g = _load_graph(config)
    _, _, _, oscheme, orderings, dual, caches, grids = _grids_stage(config, g)
    dims = {
        key: [[int(v) for v in row] for row in grid.dims]
        for key, grid in grids.items()
    }
    return DimsResult(
        graph=g,
        dims_by_pair=dims,
        scheme=oscheme,
        dual=dual,
        caches=caches,
        grids=grids,
        orderings=orderings,
    )


def run_verify(config: RunConfig) -> VerifyResult:
    tol = config.tol
    g = _load_graph(config)
    dd, inum, graph_text, oscheme, orderings, dual, caches, grids = _grids_stage(
        config, g
    )
    n, d = oscheme.n, oscheme.diameter
    checks: list[Check] = []

    def add(name, value, threshold, ok=None):
        if ok is None:
            ok = value <= threshold
        checks.append(Check(name=name, value=value, threshold=threshold, ok=bool(ok)))

    # scheme invariants
    eye = np.eye(n)
    worst_products = 0.0
    for i in range(d + 1):
        for j in range(d + 1):
            target = oscheme.E[i] if i == j else 0.0
            worst_products = max(
                worst_products,
                float(np.linalg.norm(oscheme.E[i] @ oscheme.E[j] - target, "fro")),
            )
    add("scheme.idempotent_products", worst_products, tol.eps_orth)
    add(
        "scheme.idempotent_sum",
        float(np.linalg.norm(oscheme.E.sum(axis=0) - eye, "fro")),
        tol.eps_orth,
    )
    add(
        "scheme.e0_all_ones",
        float(np.linalg.norm(oscheme.E[0] - np.full((n, n), 1.0 / n), "fro")),
        tol.eps_orth,
    )
    spectral = sum(oscheme.theta[i] * oscheme.E[i] for i in range(d + 1))
    add(
        "scheme.spectral_decomposition",
        float(np.linalg.norm(oscheme.A[1] - spectral, "fro")),
        tol.eps_orth,
    )
    krein_min = float(oscheme.krein.min())
    add("scheme.krein_nonnegative", krein_min, -tol.eps_krein, ok=krein_min >= -tol.eps_krein)

    theta_gaps = np.abs(oscheme.theta[:, None] - oscheme.theta[None, :])
    min_gap = float(theta_gaps[~np.eye(d + 1, dtype=bool)].min())
    gap_bound = tol.eps_eig * max(1.0, float(np.abs(oscheme.theta).max()))
    add("scheme.eigenvalues_distinct", min_gap, gap_bound, ok=min_gap > gap_bound)

    # dual invariants
    star_gaps = np.abs(dual.theta_star[:, None] - dual.theta_star[None, :])
    min_star_gap = float(star_gaps[~np.eye(d + 1, dtype=bool)].min())
    star_bound = tol.eps_eig * max(1.0, float(np.abs(dual.theta_star).max()))
    add(
        "dual.eigenvalues_distinct",
        min_star_gap,
        star_bound,
        ok=min_star_gap > star_bound,
    )
    dual_spectral = sum(
        dual.theta_star[i] * dual.Estar[i] for i in range(d + 1)
    )
    add(
        "dual.spectral_decomposition",
        float(np.linalg.norm(dual.Astar[1] - dual_spectral, "fro")),
        tol.eps_orth,
    )
    diag = np.stack([np.diag(dual.Astar[i]) for i in range(d + 1)])
    worst_dual_product = 0.0
    for i in range(d + 1):
        for j in range(d + 1):
            combo = np.tensordot(oscheme.krein[:, i, j], diag, axes=(0, 0))
            worst_dual_product = max(
                worst_dual_product, float(np.abs(diag[i] * diag[j] - combo).max())
            )
    add("dual.product_structure", worst_dual_product, tol.eps_orth)

    tri = verify_tridiagonal_relations(oscheme, dual, tol)
    add("dual.tridiagonal_a_on_estar", tri.max_a_offband, tri.bound)
    add("dual.tridiagonal_astar_on_e", tri.max_astar_offband, tri.bound)

    # duality on the two dual pairs
    duality_reports = {}
    for (mu1, nu1), (mu2, nu2) in DUAL_PAIRS:
        rep = verify_duality(grids[_pair_key(mu1, nu1)], grids[_pair_key(mu2, nu2)], tol)
        duality_reports[rep.pair] = rep
        add(f"duality.orthogonality.{rep.pair}", rep.worst_offdiagonal, rep.bound)
        dims_first = grids[_pair_key(mu1, nu1)].dims
        dims_second = grids[_pair_key(mu2, nu2)].dims
        dim_gap = int(np.abs(dims_first - dims_second[::-1, ::-1]).max())
        add(f"duality.corollary.{rep.pair}", dim_gap, 0, ok=rep.dim_corollary_ok)

    # irreducible modules
    adjacency = oscheme.A[1]
    dual_adjacency = dual.Astar[1]
    commutant_basis = commutant(adjacency, dual_adjacency, tol)
    records, attempts = build_tmodules(
        adjacency,
        dual_adjacency,
        dual.Estar,
        oscheme.E,
        config.seed,
        tol,
        commutant_basis=commutant_basis,
    )
    dim_total = sum(r.dim for r in records)
    add("modules.dimension_sum", dim_total, n, ok=dim_total == n)

    worst_pairwise = 0.0
    for a_idx in range(len(records)):
        for b_idx in range(a_idx + 1, len(records)):
            _, value = is_orthogonal(records[a_idx].basis, records[b_idx].basis)
            worst_pairwise = max(worst_pairwise, value)
    add("modules.pairwise_orthogonality", worst_pairwise, tol.eps_orth)

    module_rows = []
    splits_by_record = []
    worst_td = 0.0
    failed_closures = 0
    worst_split_orth = 0.0
    for record in records:
        td = verify_td_pair(record, adjacency, dual_adjacency, tol, seed=config.seed)
        worst_td = max(worst_td, td.max_violation)
        if not td.irreducible:
            failed_closures += 1
        splits = {
            (mu, nu): module_split(record, mu, nu, tol) for mu, nu in _PAIRS
        }
        orth = verify_module_orthogonality(splits, record.diameter, tol)
        worst_split_orth = max(worst_split_orth, orth.worst)
        splits_by_record.append(splits)
        module_rows.append(
            {
                "dim": record.dim,
                "endpoint": record.endpoint,
                "dual_endpoint": record.dual_endpoint,
                "diameter": record.diameter,
                "max_td_violation": td.max_violation,
                "max_split_orthogonality": orth.worst,
            }
        )
    add("modules.td_conditions", worst_td, tol.eps_orth)
    add("modules.closures_irreducible", failed_closures, 0, ok=failed_closures == 0)
    add("modules.split_orthogonality", worst_split_orth, tol.eps_orth)

    # reconstruction of every grid cell from module pieces
    reconstruction_reports = {}
    for mu, nu in _PAIRS:
        key = _pair_key(mu, nu)
        rep = verify_module_reconstruction(
            grids[key],
            [(rec, splits_by_record[idx][(mu, nu)]) for idx, rec in enumerate(records)],
            tol,
            bound=RECONSTRUCTION_BOUND,
        )
        reconstruction_reports[key] = rep
        add(f"reconstruction.{key}", rep.worst_distance, rep.bound)

    # exit code: duality violations get their own code, everything else that
    # failed maps to the generic check failure
    failed = [c for c in checks if not c.ok]
    if any(c.name.startswith("duality.orthogonality") for c in failed):
        exit_code = ExitCode.DUALITY_VIOLATION
    elif failed:
        exit_code = ExitCode.CHECK_FAILED
    else:
        exit_code = ExitCode.OK

    margin = qpoly_margin(oscheme.krein, tuple(range(d + 1)), tol)
    report = {
        "schema_version": 1,
        "config": config.to_dict(),
        "graph": {
            "name": g.name,
            "n": n,
            "diameter": d,
            "sha256": hashlib.sha256(graph_text.encode("utf-8")).hexdigest(),
            "valency": inum.valency,
            "b": [int(v) for v in inum.b],
            "c": [int(v) for v in inum.c],
            "subconstituent_sizes": [int(v) for v in inum.k],
        },
        "scheme": {
            "theta": [float(v) for v in oscheme.theta],
            "mult": [int(v) for v in oscheme.mult],
            "qpoly_orderings": [list(o) for o in orderings],
            "ordering": list(oscheme.qpoly_order),
            "krein_min": krein_min,
            "qpoly_margin": {
                "smallest_nonzero": margin[0],
                "largest_zero": margin[1],
            },
        },
        "dual": {
            "theta_star": [float(v) for v in dual.theta_star],
            "tridiagonal": {
                "max_a_offband": tri.max_a_offband,
                "max_astar_offband": tri.max_astar_offband,
            },
        },
        "grids": {
            key: {"dims": [[int(v) for v in row] for row in grids[key].dims]}
            for key in ("dd", "du", "ud", "uu")
        },
        "duality": {
            pair: {
                "worst_offdiagonal": rep.worst_offdiagonal,
                "witness": list(rep.witness) if rep.witness else None,
                "exempt_max": rep.exempt_max,
                "exempt_witness": (
                    list(rep.exempt_witness) if rep.exempt_witness else None
                ),
                "dim_corollary_ok": rep.dim_corollary_ok,
            }
            for pair, rep in duality_reports.items()
        },
        "modules": {
            "seed": config.seed,
            "attempts": attempts,
            "count": len(records),
            "dim_total": dim_total,
            "records": module_rows,
            "pairwise_orthogonality_max": worst_pairwise,
            "commutant_dim": len(commutant_basis),
        },
        "reconstruction": {
            key: {
                "worst_distance": rep.worst_distance,
                "worst_cell": list(rep.worst_cell) if rep.worst_cell else None,
            }
            for key, rep in reconstruction_reports.items()
        },
        "checks": [c.to_dict() for c in checks],
        "ok": exit_code == ExitCode.OK,
        "exit_code": int(exit_code),
    }
    return VerifyResult(
        report=report,
        exit_code=exit_code,
        ok=exit_code == ExitCode.OK,
        graph=g,
        scheme=oscheme,
        dual=dual,
        grids=grids,
        records=records,
        splits=splits_by_record,
        checks=checks,
    )
