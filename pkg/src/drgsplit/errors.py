"""Exception types raised by the drgsplit pipeline.

Everything domain-specific derives from :class:`DrgSplitError` so callers can
catch one base class; the CLI maps the concrete types to stable exit codes.
"""

__all__ = [
    "DrgSplitError",
    "InvalidFamilyParams",
    "DiameterTooSmall",
    "Disconnected",
    "NotDistanceRegular",
    "GraphFileError",
    "EigenvalueCollision",
    "ConditioningFailure",
    "NotQPolynomial",
    "VertexOutOfRange",
    "NonConstantOnSubconstituent",
    "AmbientMismatch",
    "NotContained",
    "IndexOutOfRange",
    "NonContiguousSupport",
    "DecompositionFailed",
    "DirectSumViolation",
    "PairMismatch",
    "CacheError",
]


class DrgSplitError(Exception):
    """Base class for all errors raised by this package."""


class InvalidFamilyParams(DrgSplitError):
    """Graph-family parameters are malformed or outside the documented domain."""


class DiameterTooSmall(InvalidFamilyParams):
    """The graph (or the requested family member) has diameter < 3.

    Subclasses :class:`InvalidFamilyParams` because family constructors reject
    too-small members at parameter-validation time, but it is also raised by
    the distance-regularity certifier for arbitrary input graphs.
    """


class Disconnected(DrgSplitError):
    """BFS found a vertex pair with no connecting path."""


class NotDistanceRegular(DrgSplitError):
    """Exhaustive certification found a witness violating distance-regularity."""


class GraphFileError(DrgSplitError):
    """A graph file could not be parsed or failed validation."""


class EigenvalueCollision(DrgSplitError):
    """Two eigenvalues of the quotient matrix are closer than the cluster gap."""


class ConditioningFailure(DrgSplitError):
    """A computed projector or multiplicity failed its conditioning check."""


class NotQPolynomial(DrgSplitError):
    """No ordering of the primitive idempotents satisfies the Q-polynomial condition."""


class VertexOutOfRange(DrgSplitError):
    """Base vertex index is not in [0, n)."""


class NonConstantOnSubconstituent(DrgSplitError):
    """A dual eigenvalue failed to be constant on a subconstituent."""


class AmbientMismatch(DrgSplitError):
    """Two subspaces live in different ambient dimensions."""


class NotContained(DrgSplitError):
    """complement_within was asked for a complement of a non-subspace."""


class IndexOutOfRange(DrgSplitError):
    """Split-space index outside {-1, 0, ..., D}."""


class NonContiguousSupport(DrgSplitError):
    """A candidate module's (dual) idempotent support has gaps or inconsistent length."""


class DecompositionFailed(DrgSplitError):
    """All seeded attempts at the standard-module decomposition failed."""


class DirectSumViolation(DrgSplitError):
    """Component dimensions do not sum to the ambient dimension, or the
    concatenated bases are rank-deficient."""


class PairMismatch(DrgSplitError):
    """The duality check was handed grids that are not a dual pair."""


class CacheError(DrgSplitError):
    """The scheme cache file is unreadable or inconsistent."""
