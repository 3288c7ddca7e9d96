"""
Images of invariant lattices under quotient maps.

A pushforward record lists the image basis as rational combinations of the
images ``x̂`` of the source basis vectors, together with the printed image
lattice in that basis. Pairings of images are the source pairings multiplied
by the degree of the quotient map; the printed Gram matrix is checked
against that rule, never assumed.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Sequence

from latcheck.catalog.loader import Catalog, Host
from latcheck.errors import CatalogError, LatticeError
from latcheck.lattice.core import Lattice, bilinear
from latcheck.linalg.exact import RatMatrix, int_matrix, matmul, rat_matrix, solve_rational, to_rows
from latcheck.models import PushforwardRecord

logger = logging.getLogger(__name__)


@dataclass(eq=False)
class Pushforward:
    """Quotient-map image of a host lattice."""

    key: str
    source: Host
    record: PushforwardRecord
    # The image recipe as printed, in generator order.
    printed: Lattice

    def __post_init__(self) -> None:
        if self.printed.rank != len(self.record.generators):
            raise LatticeError(
                f"{self.key}: printed image has rank {self.printed.rank}, "
                f"{len(self.record.generators)} generators given"
            )

    @property
    def degree(self) -> int:
        return self.record.degree

    @cached_property
    def generators(self) -> RatMatrix:
        """Image basis over the images of the source basis."""
        return rat_matrix([self.source.vector(text) for text in self.record.generators], self.source.rank)

    @cached_property
    def rational_gram(self) -> RatMatrix:
        c = self.generators
        return matmul(matmul(c, self.source.lattice.gram), c.T) * self.degree

    @cached_property
    def image(self) -> Lattice:
        """Image lattice computed from the generators and the degree."""
        gram = self.rational_gram
        if any(Fraction(x).denominator != 1 for x in gram.flat):
            raise LatticeError(f"{self.key}: image Gram is not integral")
        return Lattice(int_matrix(gram, gram.shape[0]), label=f"{self.key} image")

    def gram_mismatches(self) -> list[tuple[int, int]]:
        """Entries where the computed image Gram differs from the printed one."""
        computed, printed = to_rows(self.image.gram), to_rows(self.printed.gram)
        n = len(printed)
        return [(i, j) for i in range(n) for j in range(i, n) if computed[i][j] != printed[i][j]]

    def __call__(self, vector: Sequence[int]) -> list[int]:
        return pushforward(self, vector)


def pushforward(spec: Pushforward, vector: Sequence[int]) -> list[int]:
    """Coordinates of ``π_*(vector)`` in the image basis."""
    n = spec.source.rank
    if len(vector) != n:
        raise LatticeError(f"{spec.key}: vector of length {len(vector)} for a rank-{n} source")
    if any(Fraction(x).denominator != 1 for x in vector):
        raise LatticeError(f"{spec.key}: {list(vector)} is not in the source lattice")
    coords = solve_rational(spec.generators, rat_matrix([vector], n))
    if coords is None:
        raise LatticeError(f"{spec.key}: {list(vector)} is outside the source span")
    image = coords.tolist()[0]
    if any(Fraction(x).denominator != 1 for x in image):
        raise LatticeError(f"{spec.key}: image of {list(vector)} is not in the image lattice")
    return [int(x) for x in image]


def printed_square(spec: Pushforward, image: Sequence[int]) -> int:
    """Square of image coordinates in the printed image lattice."""
    return int(bilinear(spec.printed.gram, image, image))


def degree_holds(spec: Pushforward, vector: Sequence[int], other: Sequence[int] | None = None) -> bool:
    """``π_*(v)·π_*(w) = degree · v·w``, measured in the printed image lattice."""
    other = vector if other is None else other
    lhs = bilinear(spec.printed.gram, pushforward(spec, vector), pushforward(spec, other))
    rhs = spec.degree * bilinear(spec.source.lattice.gram, vector, other)
    return lhs == rhs


def load_pushforward(catalog: Catalog, key: str) -> Pushforward:
    record = catalog.pushforwards.get(key)
    if record is None:
        raise CatalogError(key, "no such pushforward")
    printed = catalog.recipe_lattice(record.image)
    return Pushforward(key, catalog.host(record.source), record, Lattice(printed.gram, label=record.image))


__all__ = ["Pushforward", "degree_holds", "load_pushforward", "printed_square", "pushforward"]
