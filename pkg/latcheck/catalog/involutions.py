"""Integral involutions acting on column vectors of a catalog host."""

from __future__ import annotations

import logging
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from latcheck.catalog.loader import Catalog, Host
from latcheck.errors import CatalogError
from latcheck.lattice.core import EmbeddedSublattice, Lattice, orthogonal_complement
from latcheck.linalg.exact import IntMatrix, identity, int_matrix, kernel_basis, matmul, to_rows
from latcheck.models import InvolutionRecord

logger = logging.getLogger(__name__)


def is_involution(matrix: np.ndarray) -> bool:
    n = matrix.shape[0]
    return to_rows(matmul(matrix, matrix)) == to_rows(identity(n))


def preserves_form(matrix: np.ndarray, gram: np.ndarray) -> bool:
    """``Aᵀ G A = G`` for the left action on column vectors."""
    return to_rows(matmul(matmul(matrix.T, gram), matrix)) == to_rows(gram)


def invariant_lattice(matrix: np.ndarray, host: Lattice) -> EmbeddedSublattice:
    """Vectors fixed by ``matrix``, as rows in host coordinates."""
    n = matrix.shape[0]
    fixed = kernel_basis(matrix - identity(n))
    return EmbeddedSublattice(host, int_matrix(fixed, n))


def coinvariant_lattice(matrix: np.ndarray, host: Lattice) -> EmbeddedSublattice:
    return orthogonal_complement(invariant_lattice(matrix, host))


@dataclass(eq=False)
class InducedInvolution:
    """Catalog involution together with its host lattice."""

    key: str
    host: Host
    matrix: IntMatrix
    record: InvolutionRecord

    @cached_property
    def invariant(self) -> EmbeddedSublattice:
        return invariant_lattice(self.matrix, self.host.lattice)

    @cached_property
    def coinvariant(self) -> EmbeddedSublattice:
        return orthogonal_complement(self.invariant)

    def apply(self, vector: list[int]) -> list[int]:
        return [int(x) for x in matmul(self.matrix, int_matrix([[v] for v in vector], 1)).flat]


def induced_involution(catalog: Catalog, which: str) -> InducedInvolution:
    """The printed matrix ``which`` on its host, left action on column vectors."""
    record = catalog.involutions.get(which)
    if record is None:
        raise CatalogError(which, "no such involution")
    host = catalog.host(record.host)
    matrix = int_matrix(record.matrix, host.rank)
    logger.debug("involution %s on %s", which, host.key)
    return InducedInvolution(which, host, matrix, record)


__all__ = [
    "InducedInvolution",
    "coinvariant_lattice",
    "induced_involution",
    "invariant_lattice",
    "is_involution",
    "preserves_form",
]
