"""Split decompositions of Q-polynomial distance-regular graphs.

Build the classical test families, certify distance-regularity, assemble the
Bose–Mesner algebra and its dual at a base vertex, decompose the standard
module into irreducible modules of the algebra generated by the adjacency and
dual adjacency matrices, form the four reduced split-space grids, and verify
the duality and reconstruction statements that tie them together.
"""

from .errors import (
    AmbientMismatch,
    CacheError,
    ConditioningFailure,
    DecompositionFailed,
    DiameterTooSmall,
    DirectSumViolation,
    Disconnected,
    DrgSplitError,
    EigenvalueCollision,
    GraphFileError,
    IndexOutOfRange,
    InvalidFamilyParams,
    NonConstantOnSubconstituent,
    NonContiguousSupport,
    NotContained,
    NotDistanceRegular,
    NotQPolynomial,
    PairMismatch,
    VertexOutOfRange,
)
from .graphs import (
    DistanceData,
    Graph,
    IntersectionNumbers,
    build_family,
    certify_distance_regular,
    distances,
    read_graph,
    write_graph,
)
from .scheme import (
    AssociationScheme,
    apply_ordering,
    build_scheme,
    distance_matrices,
    eigenvalues_from_intersection_numbers,
    find_qpoly_orderings,
    krein_parameters,
    primitive_idempotents,
)
from .dual import (
    DualStructure,
    build_dual,
    dual_distance_matrices,
    dual_idempotents,
    verify_tridiagonal_relations,
)
from .subspace import (
    Subspace,
    is_orthogonal,
    intersect_nullspace,
    span,
    subspace_distance,
    zero_subspace,
)
from .tmodule import (
    ModuleSplit,
    TModuleRecord,
    build_tmodules,
    closure_span,
    commutant,
    decompose_standard_module,
    module_parameters,
    module_split,
    verify_module_orthogonality,
    verify_td_pair,
)
from .split import (
    SplitGrid,
    DualityReport,
    build_split_caches,
    split_grid,
    tilde_v,
    v_munu,
    verify_duality,
    verify_module_reconstruction,
)
from .pipeline import ExitCode, RunConfig, run_dims, run_verify
from .tolerances import ToleranceProfile

__version__ = "0.1.0"
