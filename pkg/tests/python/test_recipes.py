"""
Unit tests for latcheck/catalog/recipes.py
"""

import pytest

from latcheck.catalog.recipes import (
    Glued,
    Group,
    Name,
    RecipeEvaluator,
    Repeated,
    Scaled,
    bordered,
    evaluate_int,
    family_gram,
    parse_recipe,
    single_lattice,
)
from latcheck.errors import CatalogError, LatticeError
from latcheck.genus.genus import genus_of
from latcheck.lattice.core import Lattice
from latcheck.linalg.exact import int_matrix, to_rows

NAMED = {
    "U": [[0, 1], [1, 0]],
    "A1": [[-2]],
}


@pytest.fixture
def evaluator() -> RecipeEvaluator:
    def resolve(name, values):
        if name == "G1":
            return genus_of(Lattice(int_matrix([[-2]])))
        if name not in NAMED:
            raise LatticeError(f"unknown lattice name '{name}'")
        return Lattice(int_matrix(NAMED[name]), label=name)

    return RecipeEvaluator(resolve)


class TestEvaluateInt:
    """Tests for evaluate_int."""

    def test_substitution(self):
        """Parameters are substituted exactly."""
        assert evaluate_int("2*(4*m-3)", {"m": 2}) == 10
        assert evaluate_int(7) == 7

    def test_non_integer(self):
        """Fractional values are rejected."""
        with pytest.raises(LatticeError, match="not an integer"):
            evaluate_int("d/2", {"d": 3})

    def test_missing_value(self):
        """Free symbols left over name themselves."""
        with pytest.raises(LatticeError, match="needs values for d"):
            evaluate_int("2*d")


class TestParser:
    """Tests for parse_recipe."""

    def test_tree_shape(self):
        """Scaling, repetition and gluing marks bind to the preceding atom."""
        tree = parse_recipe("U(2)^3 + (A1 + A1)'")

        assert isinstance(tree, Group)
        first, second = tree.terms
        assert isinstance(first, Repeated) and first.count == 3
        assert isinstance(first.node, Scaled) and first.node.factor == "2"
        assert isinstance(first.node.node, Name)
        assert isinstance(second, Glued) and second.order == 2

    @pytest.mark.parametrize("text", ["U +", "U)", "<-2>'", "U^x", "<-2", ""])
    def test_malformed(self, text):
        """Malformed recipes raise LatticeError."""
        with pytest.raises(LatticeError):
            parse_recipe(text)


class TestEvaluator:
    """Tests for RecipeEvaluator."""

    def test_direct_sum(self, evaluator):
        """U + <-2>^2 has rank 4 and determinant -4."""
        (candidate,) = evaluator.evaluate("U + A1^2")

        assert candidate.rank == 4
        assert candidate.lattice.determinant == -4
        assert candidate.parts == [("U", 2), ("A1", 1), ("A1", 1)]

    def test_rank_one_with_parameter(self, evaluator):
        """<2*d> is evaluated at the given d."""
        lattice = single_lattice(evaluator.evaluate("<2*d>", {"d": 3}), "<2*d>")
        assert to_rows(lattice.gram) == [[6]]

    def test_rescale(self, evaluator):
        """U(4) has determinant -16."""
        lattice = single_lattice(evaluator.evaluate("U(4)"), "U(4)")
        assert lattice.determinant == -16

    def test_order_two_gluing(self, evaluator):
        """(<-4> + <-4>)' glues along the single admissible element."""
        (candidate,) = evaluator.evaluate("(<-4> + <-4>)'")

        assert candidate.lattice is not None
        assert candidate.lattice.determinant == 4
        assert candidate.index == 2

    def test_no_admissible_glue(self, evaluator):
        """(<-2> + <-2>)' has no isotropic element to glue along."""
        candidates = evaluator.evaluate("(A1 + A1)'")

        assert candidates == []
        with pytest.raises(CatalogError):
            single_lattice(candidates, "(A1 + A1)'")

    def test_genus_only_names(self, evaluator):
        """Names known by their genus give lattice-free candidates."""
        (candidate,) = evaluator.evaluate("U + G1")

        assert candidate.lattice is None
        assert candidate.genus.signature == (1, 2)

    def test_genus_cannot_be_rescaled(self, evaluator):
        """Rescaling needs a Gram matrix."""
        with pytest.raises(LatticeError, match="rescaled"):
            evaluator.evaluate("G1(2)")

    def test_unknown_name(self, evaluator):
        """Unknown names surface the resolver error."""
        with pytest.raises(LatticeError, match="unknown"):
            evaluator.evaluate("E7")


class TestFamilies:
    """Tests for family_gram and bordered."""

    def test_family_gram(self):
        """Entries are sympy expressions in the family parameter."""
        assert family_gram([["-2*m", 1], [1, -2]], {"m": 3}) == [[-6, 1], [1, -2]]

    def test_bordered(self):
        """The new generator pairs 2 with the old first generator only."""
        assert bordered([[-6, 1], [1, -2]], 0) == [[0, 2, 0], [2, -6, 1], [0, 1, -2]]
