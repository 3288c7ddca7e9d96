"""
Unit tests for latcheck/genus/genus.py and latcheck/genus/gluing.py
"""

import pytest

from latcheck.errors import BudgetExceededError, DegenerateFormError, LatticeError
from latcheck.genus.genus import GenusDescriptor, genus_of, same_genus
from latcheck.genus.gluing import _requirements, exists_glue_to_genus, iter_gluings
from latcheck.lattice.core import Lattice, direct_sum
from latcheck.linalg.exact import int_matrix
from latcheck.torsion.isometry import Outcome
from latcheck.torsion.module import discriminant_module


def lattice(rows, label=None) -> Lattice:
    return Lattice(int_matrix(rows), label=label)


A1 = [[-2]]
MINUS_FOUR = [[-4]]


class TestGenusDescriptor:
    """Tests for GenusDescriptor and genus_of."""

    def test_genus_of_rank_one(self):
        """<-2> has signature (0, 1) and a discriminant of order 2."""
        genus = genus_of(lattice(A1, "A1"))

        assert genus.signature == (0, 1)
        assert genus.disc.order == 2
        assert genus.name == "A1"

    def test_gauss_sum_must_match(self):
        """A signature contradicting the Gauss sum is rejected."""
        disc = discriminant_module(lattice(A1))
        with pytest.raises(LatticeError, match="Gauss sum"):
            GenusDescriptor((1, 0), disc)

    def test_dict_round_trip(self):
        """to_dict/from_dict keep the signature and the form."""
        genus = genus_of(lattice([[-2, 0], [0, -6]], "A1+<-6>"))
        again = GenusDescriptor.from_dict(genus.to_dict())

        assert again.signature == genus.signature
        assert again.disc.order == 12
        assert same_genus(genus, again) is Outcome.PASS

    def test_degenerate_lattice(self):
        """Degenerate lattices have no genus."""
        zero = Lattice(int_matrix([[0, 0], [0, 0]]), allow_degenerate=True)
        with pytest.raises(DegenerateFormError):
            genus_of(zero)


class TestSameGenus:
    """Tests for same_genus."""

    def test_reordered_sum(self, hyperbolic):
        """U + <-2> and <-2> + U are in one genus."""
        left = direct_sum([hyperbolic, lattice(A1)])
        right = direct_sum([lattice(A1), hyperbolic])
        assert same_genus(left, right) is Outcome.PASS

    def test_signature_mismatch(self):
        """<2> and <-2> differ in signature."""
        assert same_genus(lattice([[2]]), lattice(A1)) is Outcome.FAIL

    def test_lattice_against_descriptor(self):
        """A lattice is in its own genus."""
        d = lattice([[-2, 1], [1, -4]])
        assert same_genus(d, genus_of(d)) is Outcome.PASS

    def test_definite_classes_told_apart(self):
        """Two classes of determinant 23 share a genus but not their short vectors."""
        a = lattice([[-2, 1], [1, -12]])
        b = lattice([[-4, 1], [1, -6]])

        assert same_genus(genus_of(a), genus_of(b)) is Outcome.PASS
        assert same_genus(a, b) is Outcome.FAIL


class TestGluings:
    """Tests for iter_gluings and the forced part of the glue search."""

    def test_cyclic_pair_glues_once(self):
        """A_<-4> and A_<-4> glue to A_<-2>^2 along their order-2 subgroups only."""
        disc = discriminant_module(lattice(MINUS_FOUR))
        target = discriminant_module(lattice([[-2, 0], [0, -2]]))

        assert list(iter_gluings(disc, disc, target)) == [[((2,), (2,))]]

    def test_non_square_index(self):
        """|A_a| |A_b| / |A_M| must be a square."""
        disc = discriminant_module(lattice(MINUS_FOUR))
        assert list(iter_gluings(disc, disc, discriminant_module(lattice(A1)))) == []

    def test_invariant_factors_filter(self):
        """Restricting the glue group to Z/4 leaves nothing."""
        disc = discriminant_module(lattice(MINUS_FOUR))
        target = discriminant_module(lattice([[-2, 0], [0, -2]]))

        assert len(list(iter_gluings(disc, disc, target, factors=[2]))) == 1
        assert list(iter_gluings(disc, disc, target, factors=[4])) == []

    def test_budget(self):
        """An exhausted budget raises instead of reporting no gluing."""
        disc = discriminant_module(lattice(MINUS_FOUR))
        target = discriminant_module(lattice([[-2, 0], [0, -2]]))
        with pytest.raises(BudgetExceededError):
            list(iter_gluings(disc, disc, target, budget=0))

    def test_requirements(self):
        """Generators not killed by the exponent force their multiples into H."""
        disc = discriminant_module(lattice(MINUS_FOUR))

        assert _requirements(disc, 2) == [disc.index_of([2])]
        assert _requirements(disc, 4) == []


class TestExistsGlue:
    """Tests for exists_glue_to_genus."""

    def test_two_minus_four_glue_to_a1_squared(self):
        """<-4> + <-4> glues to a lattice in the genus of <-2> + <-2>."""
        target = lattice([[-2, 0], [0, -2]])
        result = exists_glue_to_genus(lattice(MINUS_FOUR), lattice(MINUS_FOUR), target)

        assert result.found
        assert result.spec is not None
        over = result.spec.overlattice()
        assert over.index == 2
        assert same_genus(genus_of(over), target) is Outcome.PASS

    def test_signature_mismatch(self, hyperbolic):
        """A definite pair never glues to an indefinite target."""
        result = exists_glue_to_genus(lattice(MINUS_FOUR), lattice(MINUS_FOUR), hyperbolic)

        assert result.outcome is Outcome.FAIL
        assert "signature" in result.detail

    def test_wrong_discriminant(self):
        """<-4> + <-4> cannot glue to the genus of <-2> + <-6>."""
        target = lattice([[-2, 0], [0, -6]])
        result = exists_glue_to_genus(lattice(MINUS_FOUR), lattice(MINUS_FOUR), target)
        assert result.outcome is Outcome.FAIL

    def test_genus_arguments(self):
        """Descriptors work in place of lattices; no witness spec is built."""
        a = genus_of(lattice(MINUS_FOUR))
        result = exists_glue_to_genus(a, a, genus_of(lattice([[-2, 0], [0, -2]])))

        assert result.found
        assert result.spec is None
