"""Finite quadratic modules and their isometries."""

from latcheck.torsion.isometry import Outcome, OrbitPartition, fqm_isomorphic, fqm_orbits
from latcheck.torsion.module import (
    FqmElement,
    TorsionQuadraticModule,
    discriminant_module,
    elements_with,
    milgram_signature,
)

__all__ = [
    "FqmElement",
    "OrbitPartition",
    "Outcome",
    "TorsionQuadraticModule",
    "discriminant_module",
    "elements_with",
    "fqm_isomorphic",
    "fqm_orbits",
    "milgram_signature",
]
