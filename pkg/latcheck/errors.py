"""Exception hierarchy for latcheck."""

from __future__ import annotations


class LatcheckError(Exception):
    """Base class for latcheck errors."""


class RankDeficiencyError(LatcheckError, ValueError):
    """Raised when rows that must be independent are not."""


class LatticeError(LatcheckError, ValueError):
    """Raised when a Gram matrix or glue vector breaks a lattice invariant."""


class DegenerateFormError(LatcheckError, ValueError):
    """Raised when a quadratic form or module is degenerate where it may not be."""


class BudgetExceededError(LatcheckError):
    """Raised when an enumeration or search exceeds its budget."""

    def __init__(self, message: str, budget: int) -> None:
        super().__init__(f"{message} (budget={budget})")
        self.budget = budget


class CatalogError(LatcheckError):
    """Raised when a catalog entry is malformed or fails its invariants."""

    def __init__(self, key: str, message: str, provenance: str | None = None) -> None:
        where = f" [{provenance}]" if provenance else ""
        super().__init__(f"{key}: {message}{where}")
        self.key = key
        self.provenance = provenance


class InadmissibleParameterError(LatcheckError, ValueError):
    """Raised when a table row is evaluated outside its congruence class."""

    def __init__(self, row: str, constraint: str, value: int) -> None:
        super().__init__(f"{row}: parameter {value} violates {constraint}")
        self.row = row
        self.constraint = constraint
        self.value = value


class UnknownTargetError(LatcheckError, KeyError):
    """Raised when the CLI is asked for a verification target that does not exist."""

    def __str__(self) -> str:
        return str(self.args[0]) if self.args else "unknown target"
