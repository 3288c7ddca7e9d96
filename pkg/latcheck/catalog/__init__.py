"""Catalog of lattices, classes, glue models and classification tables."""

from latcheck.catalog.involutions import induced_involution
from latcheck.catalog.loader import Catalog, load_catalog
from latcheck.catalog.partial_gram import solve_partial_gram
from latcheck.catalog.pushforward import load_pushforward, pushforward

__all__ = [
    "Catalog",
    "induced_involution",
    "load_catalog",
    "load_pushforward",
    "pushforward",
    "solve_partial_gram",
]
