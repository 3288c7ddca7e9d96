"""Exact lattice toolkit and verifier for the order-four classification tables."""

from latcheck.catalog.loader import Catalog, load_catalog
from latcheck.genus.genus import GenusDescriptor
from latcheck.lattice.core import EmbeddedSublattice, GlueSpec, Lattice
from latcheck.torsion.isometry import Outcome
from latcheck.torsion.module import TorsionQuadraticModule

__version__ = "0.1.0"

__all__ = [
    "Catalog",
    "EmbeddedSublattice",
    "GenusDescriptor",
    "GlueSpec",
    "Lattice",
    "Outcome",
    "TorsionQuadraticModule",
    "load_catalog",
]
