"""Even integral lattices, embedded sublattices and glued overlattices."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Any, Callable, Mapping, Sequence

import numpy as np

from latcheck.errors import LatticeError, RankDeficiencyError
from latcheck.linalg.exact import (
    IntMatrix,
    RatMatrix,
    block_diagonal,
    determinant,
    exact_signature,
    gcd_list,
    hermite_normal_form,
    int_matrix,
    is_symmetric,
    kernel_basis,
    lattice_index,
    lcm_list,
    matmul,
    rank,
    rat_matrix,
    rat_vector,
    rational_inverse,
    saturate,
    to_rows,
)

logger = logging.getLogger(__name__)


def bilinear(gram: np.ndarray, v: Sequence[Any], w: Sequence[Any]) -> Any:
    """``v · gram · w`` for int or Fraction coordinates."""
    n = gram.shape[0]
    total: Any = 0
    for i in range(n):
        if v[i] == 0:
            continue
        row = 0
        for j in range(n):
            if w[j] != 0 and gram[i, j] != 0:
                row += gram[i, j] * w[j]
        total += v[i] * row
    return total


@dataclass(eq=False)
class Lattice:
    """Even lattice given by its Gram matrix."""

    gram: IntMatrix
    label: str | None = None
    allow_degenerate: bool = False

    def __post_init__(self) -> None:
        self.gram = int_matrix(self.gram)
        if self.gram.ndim != 2 or self.gram.shape[0] != self.gram.shape[1]:
            raise LatticeError(f"{self.name}: Gram matrix must be square")
        if not is_symmetric(self.gram):
            raise LatticeError(f"{self.name}: Gram matrix is not symmetric")
        odd = [i for i in range(self.rank) if self.gram[i, i] % 2]
        if odd:
            raise LatticeError(f"{self.name}: odd diagonal entry at position {odd[0]}")
        if not self.allow_degenerate and self.determinant == 0:
            raise LatticeError(f"{self.name}: degenerate Gram matrix")

    @property
    def name(self) -> str:
        return self.label or f"rank-{self.gram.shape[0]} lattice"

    @property
    def rank(self) -> int:
        return self.gram.shape[0]

    @cached_property
    def determinant(self) -> int:
        return determinant(self.gram)

    @cached_property
    def signature(self) -> tuple[int, int, int]:
        return exact_signature(self.gram)

    @property
    def is_negative_definite(self) -> bool:
        pos, neg, zero = self.signature
        return neg == self.rank

    @property
    def is_definite(self) -> bool:
        pos, neg, _ = self.signature
        return self.rank > 0 and self.rank in (pos, neg)

    def dual_basis(self) -> RatMatrix:
        """Rows are the dual basis in lattice coordinates (``G^-1``)."""
        return rational_inverse(self.gram)

    def square(self, v: Sequence[Any]) -> Any:
        return bilinear(self.gram, v, v)

    def pair(self, v: Sequence[Any], w: Sequence[Any]) -> Any:
        return bilinear(self.gram, v, w)

    def __repr__(self) -> str:
        return f"Lattice({self.name}, rank={self.rank})"


@dataclass(eq=False)
class EmbeddedSublattice:
    """Sublattice spanned by integer rows in the ambient basis."""

    ambient: Lattice
    basis: IntMatrix

    def __post_init__(self) -> None:
        n = self.ambient.rank
        self.basis = int_matrix(self.basis, n)
        if self.basis.shape[1] != n:
            raise LatticeError(
                f"basis width {self.basis.shape[1]} does not match ambient rank {n}"
            )
        if rank(self.basis) != self.basis.shape[0]:
            raise RankDeficiencyError("sublattice basis rows are dependent")

    @property
    def rank(self) -> int:
        return self.basis.shape[0]

    @cached_property
    def gram(self) -> IntMatrix:
        return matmul(matmul(self.basis, self.ambient.gram), self.basis.T)

    def lattice(self, label: str | None = None) -> Lattice:
        return Lattice(self.gram, label=label, allow_degenerate=True)

    def saturation(self) -> "EmbeddedSublattice":
        return EmbeddedSublattice(self.ambient, saturate(self.basis))

    def index_in_saturation(self) -> int:
        if self.rank == 0:
            return 1
        return lattice_index(self.basis, saturate(self.basis))

    @cached_property
    def primitive(self) -> bool:
        return self.index_in_saturation() == 1

    def contains(self, other: "EmbeddedSublattice") -> bool:
        stacked = hermite_normal_form(np.vstack([self.basis, other.basis]))
        return to_rows(stacked) == to_rows(hermite_normal_form(self.basis))

    def same_as(self, other: "EmbeddedSublattice") -> bool:
        return to_rows(hermite_normal_form(self.basis)) == to_rows(
            hermite_normal_form(other.basis)
        )


@dataclass(eq=False)
class Overlattice(Lattice):
    """Lattice glued from a direct sum; ``basis`` is over direct-sum coordinates."""

    basis: RatMatrix | None = None
    index: int = 1


@dataclass(eq=False)
class GlueSpec:
    """Direct sum of summands plus rational glue vectors over its coordinates."""

    summands: list[Lattice]
    glue_vectors: list[Sequence[Any]] = field(default_factory=list)
    label: str | None = None

    def __post_init__(self) -> None:
        self.ambient = direct_sum(self.summands, label=self.label)
        n = self.ambient.rank
        vectors = []
        for k, raw in enumerate(self.glue_vectors):
            v = rat_vector(raw)
            if v.shape[0] != n:
                raise LatticeError(f"glue vector {k} has length {v.shape[0]}, expected {n}")
            if self.order_of(v) == 1:
                raise LatticeError(f"glue vector {k} {_fmt(v)} is already in the direct sum")
            vectors.append(v)
        self.glue_vectors = vectors
        g = self.ambient.gram
        for k, v in enumerate(vectors):
            pairing = matmul(v, g)
            if any(Fraction(x).denominator != 1 for x in pairing):
                raise LatticeError(f"glue vector {k} {_fmt(v)} is not in the dual lattice")
            sq = Fraction(bilinear(g, v, v))
            if sq.denominator != 1 or sq.numerator % 2:
                raise LatticeError(f"glue vector {k} {_fmt(v)} has non-even square {sq}")
            for j in range(k):
                p = Fraction(bilinear(g, v, vectors[j]))
                if p.denominator != 1:
                    raise LatticeError(
                        f"glue vector {k} {_fmt(v)} pairs non-integrally ({p}) with vector {j}"
                    )

    @staticmethod
    def order_of(vector: Sequence[Any]) -> int:
        return lcm_list(Fraction(x).denominator for x in vector)

    def overlattice(self) -> Overlattice:
        return overlattice(self)


def _fmt(v: Sequence[Any]) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


def direct_sum(parts: Sequence[Lattice], label: str | None = None) -> Lattice:
    if not parts:
        return Lattice(int_matrix([], 0), label=label or "0")
    gram = block_diagonal([p.gram for p in parts])
    if label is None:
        label = " + ".join(p.name for p in parts)
    degenerate = any(p.allow_degenerate for p in parts)
    return Lattice(gram, label=label, allow_degenerate=degenerate)


def rescale(lattice: Lattice, n: int | Fraction, label: str | None = None) -> Lattice:
    """``L(n)``: every inner product multiplied by ``n``."""
    factor = Fraction(n)
    if factor == 0:
        raise LatticeError("rescaling factor must be nonzero")
    scaled = [[Fraction(x) * factor for x in row] for row in lattice.gram]
    if any(x.denominator != 1 for row in scaled for x in row):
        raise LatticeError(f"{lattice.name}({n}) is not integral")
    if any(scaled[i][i].numerator % 2 for i in range(lattice.rank)):
        raise LatticeError(f"{lattice.name}({n}) is odd")
    return Lattice(
        int_matrix(scaled, lattice.rank),
        label=label or f"{lattice.name}({n})",
        allow_degenerate=lattice.allow_degenerate,
    )


def orthogonal_complement(sub: EmbeddedSublattice) -> EmbeddedSublattice:
    """Saturated orthogonal complement inside ``sub.ambient``."""
    n = sub.ambient.rank
    if sub.rank == 0:
        return EmbeddedSublattice(sub.ambient, int_matrix([[int(i == j) for j in range(n)] for i in range(n)], n))
    constraints = matmul(sub.basis, sub.ambient.gram)
    kernel = kernel_basis(constraints)
    if kernel.shape[0] == 0:
        return EmbeddedSublattice(sub.ambient, int_matrix([], n))
    return EmbeddedSublattice(sub.ambient, hermite_normal_form(kernel))


def overlattice(spec: GlueSpec) -> Overlattice:
    """Even lattice generated by the direct sum and the glue vectors."""
    n = spec.ambient.rank
    denom = lcm_list(Fraction(x).denominator for v in spec.glue_vectors for x in v)
    rows = [[denom * int(i == j) for j in range(n)] for i in range(n)]
    rows += [[int(Fraction(x) * denom) for x in v] for v in spec.glue_vectors]
    hnf = hermite_normal_form(int_matrix(rows, n))
    basis = rat_matrix([[Fraction(x, denom) for x in row] for row in hnf], n)
    gram_q = matmul(matmul(basis, spec.ambient.gram), basis.T)
    if any(Fraction(x).denominator != 1 for x in gram_q.flat):
        raise LatticeError(f"{spec.ambient.name}: glued lattice is not integral")
    index = denom**n // abs(determinant(hnf))
    logger.debug("overlattice of %s has index %d", spec.ambient.name, index)
    return Overlattice(
        int_matrix(gram_q, n),
        label=spec.label or f"({spec.ambient.name})'",
        allow_degenerate=spec.ambient.allow_degenerate,
        basis=basis,
        index=index,
    )


def divisibility(v: Sequence[Any], lattice: Lattice) -> int:
    """Positive generator of ``v · L``."""
    if all(x == 0 for x in v):
        raise LatticeError("divisibility of the zero vector is undefined")
    products = matmul(int_matrix([v], lattice.rank), lattice.gram)[0]
    return gcd_list(products)


def lattice_from_dict(
    data: Mapping[str, Any],
    resolve: Callable[[str], Lattice] | None = None,
) -> Lattice | EmbeddedSublattice:
    """Read ``{"label", "gram"}`` or ``{"ambient", "basis"}``."""
    if "basis" in data:
        ambient_raw = data.get("ambient")
        if isinstance(ambient_raw, str):
            if resolve is None:
                raise LatticeError(f"cannot resolve ambient lattice '{ambient_raw}'")
            ambient = resolve(ambient_raw)
        elif isinstance(ambient_raw, Mapping):
            ambient = lattice_from_dict(ambient_raw, resolve)  # type: ignore[assignment]
        else:
            raise LatticeError("embedded lattice needs an 'ambient' entry")
        if not isinstance(ambient, Lattice):
            raise LatticeError("ambient must be a plain lattice")
        return EmbeddedSublattice(ambient, int_matrix(data["basis"], ambient.rank))
    if "gram" not in data:
        raise LatticeError("lattice entry needs a 'gram' matrix")
    gram = data["gram"]
    return Lattice(int_matrix(gram, len(gram)), label=data.get("label"))


def lattice_to_dict(obj: Lattice | EmbeddedSublattice) -> dict[str, Any]:
    if isinstance(obj, EmbeddedSublattice):
        return {"ambient": lattice_to_dict(obj.ambient), "basis": to_rows(obj.basis)}
    return {"label": obj.label, "gram": to_rows(obj.gram)}


__all__ = [
    "EmbeddedSublattice",
    "GlueSpec",
    "Lattice",
    "Overlattice",
    "bilinear",
    "direct_sum",
    "divisibility",
    "lattice_from_dict",
    "lattice_to_dict",
    "orthogonal_complement",
    "overlattice",
    "rescale",
]
