"""Even integral lattices, sublattices and overlattices."""

from latcheck.lattice.core import (
    EmbeddedSublattice,
    GlueSpec,
    Lattice,
    Overlattice,
    direct_sum,
    divisibility,
    orthogonal_complement,
    overlattice,
    rescale,
)
from latcheck.lattice.shortvec import short_vectors

__all__ = [
    "EmbeddedSublattice",
    "GlueSpec",
    "Lattice",
    "Overlattice",
    "direct_sum",
    "divisibility",
    "orthogonal_complement",
    "overlattice",
    "rescale",
    "short_vectors",
]
