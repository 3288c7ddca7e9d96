"""
Genera, gluing and embedding checks.

``latcheck.genus.rows`` depends on the catalog and is imported directly.
"""

from latcheck.genus.genus import GenusDescriptor, genus_of, same_genus
from latcheck.genus.gluing import GlueResult, exists_glue_to_genus
from latcheck.genus.star import StarReport, alternative_gluing, check_star_condition
from latcheck.genus.witness import WitnessResult, find_witness

__all__ = [
    "GenusDescriptor",
    "GlueResult",
    "StarReport",
    "WitnessResult",
    "alternative_gluing",
    "check_star_condition",
    "exists_glue_to_genus",
    "find_witness",
    "genus_of",
    "same_genus",
]
