"""
Unit tests for latcheck/torsion/isometry.py
"""

from fractions import Fraction

import pytest

from latcheck.errors import BudgetExceededError, DegenerateFormError
from latcheck.lattice.core import Lattice
from latcheck.linalg.exact import int_matrix
from latcheck.torsion.isometry import (
    Outcome,
    find_isometry,
    fqm_isomorphic,
    fqm_orbits,
    iter_isometries,
    same_orbit,
)
from latcheck.torsion.module import TorsionQuadraticModule, discriminant_module, elements_with

U2 = [[0, 2], [2, 0]]


def disc(rows) -> TorsionQuadraticModule:
    return discriminant_module(Lattice(int_matrix(rows)))


class TestOutcome:
    """Tests for the Outcome helpers."""

    def test_of(self):
        """Booleans map to PASS and FAIL."""
        assert Outcome.of(True) is Outcome.PASS
        assert Outcome.of(False) is Outcome.FAIL

    def test_combine(self):
        """FAIL dominates UNKNOWN, which dominates PASS."""
        assert Outcome.combine([Outcome.PASS, Outcome.UNKNOWN]) is Outcome.UNKNOWN
        assert Outcome.combine([Outcome.UNKNOWN, Outcome.FAIL]) is Outcome.FAIL
        assert Outcome.combine([]) is Outcome.PASS


class TestIsometries:
    """Tests for iter_isometries and find_isometry."""

    def test_u2_has_two_isometries(self):
        """O(A_U(2)) swaps the two isotropic elements."""
        module = disc(U2)
        assert len(list(iter_isometries(module, module))) == 2

    def test_prescribed_pair(self):
        """An isometry sending one isotropic element to the other exists."""
        module = disc(U2)
        x, y = elements_with(module, 2, 0)
        found = find_isometry(module, module, prescribed=[(x.coords, y.coords)])

        assert found is not None

    def test_budget(self):
        """A tiny budget raises BudgetExceededError."""
        module = disc([[-4, 0, 0], [0, -4, 0], [0, 0, -4]])
        with pytest.raises(BudgetExceededError):
            list(iter_isometries(module, module, budget=2))


class TestIsomorphic:
    """Tests for fqm_isomorphic."""

    def test_u2_is_self_dual(self):
        """u(2) is isomorphic to its negative."""
        module = disc(U2)
        assert fqm_isomorphic(module, module.negated()) is Outcome.PASS

    def test_sign_matters(self):
        """A_<2> and A_<-2> differ."""
        assert fqm_isomorphic(disc([[2]]), disc([[-2]])) is Outcome.FAIL

    def test_order_mismatch(self):
        """Different orders fail immediately."""
        assert fqm_isomorphic(disc([[-2]]), disc([[-4]])) is Outcome.FAIL

    def test_double_negation(self):
        """Negating twice gives an isomorphic module."""
        a = disc([[-4, 0], [0, -4]])
        b = disc([[-4, 0], [0, -4]]).negated().negated()
        assert fqm_isomorphic(a, b) is Outcome.PASS

    def test_d4_against_u2(self):
        """A_D4 and A_U(2) are not isomorphic: the q values differ."""
        d4 = disc([[-2, 0, 1, 0], [0, -2, 1, 0], [1, 1, -2, 1], [0, 0, 1, -2]])
        assert fqm_isomorphic(d4, disc(U2)) is Outcome.FAIL

    def test_degenerate_rejected(self):
        """Degenerate modules cannot be compared."""
        zero = TorsionQuadraticModule((2,), (Fraction(0),), ((Fraction(0),),))
        with pytest.raises(DegenerateFormError):
            fqm_isomorphic(zero, zero)


class TestOrbits:
    """Tests for same_orbit and fqm_orbits."""

    def test_isotropic_elements_share_an_orbit(self):
        """Both isotropic elements of A_U(2) form one orbit."""
        module = disc(U2)
        partition = fqm_orbits(module, elements_with(module, 2, 0))

        assert partition.outcome is Outcome.PASS
        assert len(partition.orbits) == 1

    def test_different_squares(self):
        """Elements of different square are never in one orbit."""
        module = disc(U2)
        (x,) = elements_with(module, 2, 1)
        y = elements_with(module, 2, 0)[0]

        assert same_orbit(module, x, y) is Outcome.FAIL

    def test_orbit_index(self):
        """orbit_of locates an element."""
        module = disc(U2)
        elems = elements_with(module, 2, 0) + elements_with(module, 2, 1)
        partition = fqm_orbits(module, elems)

        assert len(partition.orbits) == 2
        assert partition.orbit_of(elems[0]) == partition.orbit_of(elems[1])
        assert partition.orbit_of(elems[2]) != partition.orbit_of(elems[0])
