"""
Unit tests for latcheck/torsion/module.py

Discriminant modules of small lattices are checked against full group
enumeration.
"""

from fractions import Fraction

import pytest

from latcheck.errors import BudgetExceededError, DegenerateFormError
from latcheck.lattice.core import Lattice
from latcheck.linalg.exact import int_matrix
from latcheck.torsion.module import (
    TorsionQuadraticModule,
    discriminant_module,
    elements_with,
    format_fraction,
    milgram_signature,
)

D4 = [[-2, 0, 1, 0], [0, -2, 1, 0], [1, 1, -2, 1], [0, 0, 1, -2]]


def disc(rows) -> TorsionQuadraticModule:
    return discriminant_module(Lattice(int_matrix(rows)))


class TestConstruction:
    """Tests for TorsionQuadraticModule validation."""

    def test_q_must_be_well_defined(self):
        """q(g) = 1/3 is not well defined on Z/2."""
        with pytest.raises(DegenerateFormError):
            TorsionQuadraticModule((2,), (Fraction(1, 3),), ((Fraction(1, 3),),))

    def test_q_and_b_must_agree(self):
        """q(g) and b(g, g) must agree mod 1."""
        with pytest.raises(DegenerateFormError):
            TorsionQuadraticModule((2,), (Fraction(1, 2),), ((Fraction(0),),))

    def test_orders_at_least_two(self):
        """Trivial generators are rejected."""
        with pytest.raises(ValueError):
            TorsionQuadraticModule((1,), (Fraction(0),), ((Fraction(0),),))

    def test_from_form_and_dict(self):
        """Printed forms and the JSON form describe the same module."""
        module = TorsionQuadraticModule.from_form((2, 2), [["1/2", 0], [0, "1/2"]])
        again = TorsionQuadraticModule.from_dict(module.to_dict())

        assert module.order == 4
        assert again.q_values == module.q_values
        assert module.to_dict()["q"] == ["1/2", "1/2"]

    def test_format_fraction(self):
        """Integers print without a denominator."""
        assert format_fraction(Fraction(3, 4)) == "3/4"
        assert format_fraction(Fraction(2)) == "2"


class TestDiscriminantModule:
    """Tests for discriminant_module on small lattices."""

    def test_rank_one(self):
        """A_<-2> is Z/2 with q = -1/2 = 3/2 mod 2."""
        module = disc([[-2]])

        assert module.orders == (2,)
        assert module.q_values == (Fraction(3, 2),)

    def test_unimodular_is_trivial(self):
        """U has a trivial discriminant module."""
        assert disc([[0, 1], [1, 0]]).order == 1

    def test_u2_values(self):
        """A_U(2) has q values 0, 0, 0, 1."""
        module = disc([[0, 2], [2, 0]])

        assert module.order == 4
        assert sorted(module.q(x) for x in module.elements) == [0, 0, 0, 1]

    def test_d4_values(self):
        """Every nonzero class of A_D4 has q = 1."""
        module = disc(D4)
        values = [module.q(x) for x in module.elements if any(x)]

        assert module.order == 4
        assert values == [1, 1, 1]

    def test_primary_parts(self):
        """A_<-12> splits into parts of order 4 and 3."""
        module = disc([[-12]])

        assert module.primes() == [2, 3]
        assert module.primary_part(2).order == 4
        assert module.primary_part(3).order == 3

    def test_dual_vector_class(self):
        """(1/2, 0) in U(2) coordinates is an isotropic element of order 2."""
        module = disc([[0, 2], [2, 0]])
        x = module.element_from_dual_vector([Fraction(1, 2), 0])

        assert module.element_order(x) == 2
        assert module.q(x) == 0

    def test_negated(self):
        """Negation flips q."""
        module = disc([[-2]]).negated()
        assert module.q_values == (Fraction(1, 2),)


class TestMilgram:
    """Tests for milgram_signature."""

    @pytest.mark.parametrize(
        "rows, signature",
        [
            ([[-2]], -1),
            ([[2]], 1),
            ([[0, 2], [2, 0]], 0),
            (D4, -4),
            ([[-4, 0], [0, -4]], -2),
            ([[6]], 1),
            ([[16]], 1),
            ([[-10]], -1),
            ([[-46]], -1),
            ([[-2, 1], [1, -2]], -2),
            ([[0, 3], [3, 0]], 0),
            ([[2 * x for x in row] for row in D4], -4),
        ],
    )
    def test_gauss_sum_matches_signature(self, rows, signature):
        """Gauss sum argument equals the signature mod 8."""
        assert milgram_signature(disc(rows)) == signature % 8

    def test_degenerate_form(self):
        """A zero form on Z/2 has a Gauss sum of the wrong size."""
        module = TorsionQuadraticModule((2,), (Fraction(0),), ((Fraction(0),),))
        with pytest.raises(DegenerateFormError):
            milgram_signature(module)

    def test_large_odd_prime(self):
        """A 2·101 form is decided exactly; 101 = 1 mod 4."""
        assert milgram_signature(disc([[202]])) == 1
        assert milgram_signature(disc([[-202]])) == 7


class TestElementsWith:
    """Tests for elements_with and group-level helpers."""

    def test_isotropic_elements(self):
        """A_U(2) has two isotropic elements of order 2 and one of square 1."""
        module = disc([[0, 2], [2, 0]])

        assert len(elements_with(module, 2, 0)) == 2
        assert len(elements_with(module, 2, 1)) == 1

    def test_budget(self):
        """Groups larger than the budget raise BudgetExceededError."""
        module = disc([[-4, 0], [0, -4]])
        with pytest.raises(BudgetExceededError) as info:
            elements_with(module, 2, 0, budget=8)
        assert info.value.budget == 8

    def test_subquotient_of_isotropic(self):
        """x⊥/<x> for an isotropic x in A_U(2) is trivial."""
        module = disc([[0, 2], [2, 0]])
        x = elements_with(module, 2, 0)[0]
        quotient = module.subquotient(module.orthogonal([x.coords]), [x.coords])

        assert quotient.order == 1

    def test_direct_sum(self):
        """Orders multiply and generators concatenate."""
        module = disc([[-2]]).direct_sum(disc([[0, 2], [2, 0]]))

        assert module.order == 8
        assert module.rank == 3
        assert not module.is_degenerate
