"""Shared numerical tolerance profile.

One profile travels through the whole pipeline so that every rank decision,
orthogonality check and zero test means the same thing everywhere.  Fields
are either absolute bounds or relative factors; each docstring below says
which.
"""

from dataclasses import dataclass, fields

__all__ = ["ToleranceProfile", "ASSERTION_FLOOR"]

#: Internal sanity assertions (basis orthonormality, containment preconditions,
#: projector conditioning, "this block is numerically zero") never use a bound
#: sharper than this.  User-facing checks still honor the raw profile values,
#: so cranking eps_orth down to 1e-20 makes the *reported* invariants fail
#: without tripping assertions on plain float noise first.
ASSERTION_FLOOR = 1e-12


@dataclass(frozen=True)
class ToleranceProfile:
    """Knobs for every numerical decision in the pipeline.

    Attributes
    ----------
    eps_rank : float
        Relative singular-value cutoff: a rank decision keeps singular values
        ``>= eps_rank * sigma_max``.
    eps_eig : float
        Eigenvalue cluster gap, relative to the matrix scale ``max(1, |w|_max)``.
    eps_orth : float
        Absolute bound for orthogonality and residual checks.
    eps_krein : float
        Absolute slack allowed below zero for Krein parameters.
    eps_zero : float
        Zero threshold for Krein parameters in the Q-polynomial condition,
        relative to the largest absolute entry of the Krein table.
    """

    eps_rank: float = 1e-9
    eps_eig: float = 1e-6
    eps_orth: float = 1e-8
    eps_krein: float = 1e-8
    eps_zero: float = 1e-6

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if not (isinstance(value, (int, float)) and value > 0):
                raise ValueError(f"{f.name} must be a positive number, got {value!r}")

    def assertion_tol(self) -> float:
        """Bound used for internal sanity assertions (floored, see above)."""
        return max(self.eps_orth, ASSERTION_FLOOR)

    def to_dict(self) -> dict:
        return {f.name: float(getattr(self, f.name)) for f in fields(self)}

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceProfile":
        return cls(**{f.name: float(d[f.name]) for f in fields(cls)})

    def with_overrides(self, **kwargs) -> "ToleranceProfile":
        values = self.to_dict()
        for key, value in kwargs.items():
            if value is None:
                continue
            if key not in values:
                raise ValueError(f"unknown tolerance field {key!r}")
            values[key] = value
        return ToleranceProfile(**values)
