"""
Unit tests for latcheck/genus/star.py

A small two-summand gluing serves as its own reference, then the catalog's
D4(2) model is checked against itself.
"""

from fractions import Fraction

import pytest

from latcheck.errors import LatticeError
from latcheck.genus.star import (
    alternative_gluing,
    check_star_condition,
    glue_graph_of_spec,
    summand_embedding,
)
from latcheck.lattice.core import EmbeddedSublattice, GlueSpec, Lattice
from latcheck.linalg.exact import int_matrix, to_rows
from latcheck.torsion.isometry import Outcome
from latcheck.torsion.module import discriminant_module

HALF = Fraction(1, 2)


@pytest.fixture
def reference() -> GlueSpec:
    four = Lattice(int_matrix([[-4]]), label="<-4>")
    return GlueSpec([four, four], [[HALF, HALF]], label="small")


class TestGlueGraph:
    """Tests for glue graphs and summand embeddings."""

    def test_graph_of_spec(self, reference):
        """The graph of (1/2, 1/2) pairs the order-2 classes of both sides."""
        graph, d, c = glue_graph_of_spec(reference)

        assert graph.order == 2
        assert graph.group_factors() == [2]
        assert to_rows(d.gram) == [[-4]]

    def test_summand_embedding(self, reference):
        """The first summand sits primitively in the overlattice with its own Gram."""
        phi = summand_embedding(reference, 0)

        assert phi.primitive
        assert to_rows(phi.gram) == [[-4]]

    def test_needs_two_summands(self):
        """A one-summand spec has no glue graph."""
        spec = GlueSpec([Lattice(int_matrix([[-4]]))], [])
        with pytest.raises(LatticeError):
            glue_graph_of_spec(spec)


class TestStarCondition:
    """Tests for check_star_condition."""

    def test_reference_against_itself(self, reference):
        """A summand glues like itself."""
        report = check_star_condition(summand_embedding(reference, 0), reference)

        assert report.outcome is Outcome.PASS
        assert report.steps["gram"] is Outcome.PASS
        assert report.steps["glue maps"] is Outcome.PASS

    def test_non_primitive_image(self, reference):
        """Twice the summand is not primitive."""
        phi = summand_embedding(reference, 0)
        doubled = EmbeddedSublattice(phi.ambient, 2 * phi.basis)
        report = check_star_condition(doubled, reference)

        assert report.outcome is Outcome.FAIL
        assert report.steps == {"primitive": Outcome.FAIL}

    def test_catalog_d4_model(self, catalog):
        """The D4(2) glue model satisfies its own condition."""
        model = catalog.glue_model("d4-standard")
        report = check_star_condition(summand_embedding(model.spec, 0), model.spec)

        assert report.steps["gram"] is Outcome.PASS
        assert report.outcome is not Outcome.FAIL


class TestAlternativeGluing:
    """Tests for alternative_gluing."""

    def test_finds_the_only_gluing(self, reference):
        """<-4> and <-4> glue to the discriminant form of <-2> + <-2>."""
        a, b = reference.summands
        target = discriminant_module(Lattice(int_matrix([[-2, 0], [0, -2]])))
        spec = alternative_gluing(a, b, target, [2])

        assert spec is not None
        assert spec.overlattice().determinant == 4

    def test_impossible_order(self, reference):
        """A target of the wrong order leaves nothing to glue."""
        a, b = reference.summands
        target = discriminant_module(Lattice(int_matrix([[-2]])))
        assert alternative_gluing(a, b, target, [2]) is None
