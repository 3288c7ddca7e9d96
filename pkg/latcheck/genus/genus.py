"""Genus descriptors and genus equality."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from typing import Any, Mapping, Union

from latcheck.errors import BudgetExceededError, DegenerateFormError, LatticeError
from latcheck.lattice.core import Lattice
from latcheck.lattice.shortvec import short_vectors
from latcheck.torsion.isometry import Outcome, fqm_isomorphic
from latcheck.torsion.module import (
    TorsionQuadraticModule,
    discriminant_module,
    milgram_signature,
)

logger = logging.getLogger(__name__)

# Definite lattices up to this rank also get a short-vector fingerprint.
FINGERPRINT_MAX_RANK = 6
FINGERPRINT_BOUND = 12


@dataclass(eq=False)
class GenusDescriptor:
    """Signature plus discriminant form."""

    signature: tuple[int, int]
    disc: TorsionQuadraticModule
    label: str | None = None

    def __post_init__(self) -> None:
        pos, neg = (int(x) for x in self.signature)
        if pos < 0 or neg < 0:
            raise LatticeError(f"invalid signature {self.signature}")
        self.signature = (pos, neg)
        residue = milgram_signature(self.disc)
        if residue != (pos - neg) % 8:
            raise LatticeError(
                f"{self.name}: Gauss sum residue {residue} contradicts signature ({pos}, {neg})"
            )

    @property
    def name(self) -> str:
        return self.label or f"genus {self.signature}"

    @property
    def rank(self) -> int:
        return sum(self.signature)

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GenusDescriptor":
        disc = TorsionQuadraticModule.from_dict(data["disc"])
        pos, neg = data["signature"]
        return cls((pos, neg), disc, label=data.get("label"))

    def to_dict(self) -> dict[str, Any]:
        return {"label": self.label, "signature": list(self.signature), "disc": self.disc.to_dict()}


LatticeOrGenus = Union[Lattice, GenusDescriptor]


def genus_of(lattice: LatticeOrGenus) -> GenusDescriptor:
    if isinstance(lattice, GenusDescriptor):
        return lattice
    pos, neg, zero = lattice.signature
    if zero:
        raise DegenerateFormError(f"{lattice.name} is degenerate")
    return GenusDescriptor((pos, neg), discriminant_module(lattice), label=lattice.label)


def short_vector_counts(lattice: Lattice, bound: int = FINGERPRINT_BOUND) -> Counter[int]:
    return Counter(-lattice.square(v) for v in short_vectors(lattice, bound))


def same_genus(a: LatticeOrGenus, b: LatticeOrGenus, budget: int | None = None) -> Outcome:
    """Signature equality and isomorphic discriminant forms."""
    ga, gb = genus_of(a), genus_of(b)
    if ga.signature != gb.signature:
        return Outcome.FAIL
    outcome = fqm_isomorphic(ga.disc, gb.disc, budget)
    if outcome is not Outcome.PASS:
        return outcome
    if (
        isinstance(a, Lattice)
        and isinstance(b, Lattice)
        and a.rank <= FINGERPRINT_MAX_RANK
        and a.is_negative_definite
    ):
        try:
            if short_vector_counts(a) != short_vector_counts(b):
                logger.info("%s and %s share a genus but not short vectors", a.name, b.name)
                return Outcome.FAIL
        except BudgetExceededError:
            return Outcome.UNKNOWN
    return Outcome.PASS
