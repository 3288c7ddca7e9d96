"""
Unit tests for latcheck/lattice/core.py and latcheck/lattice/shortvec.py
"""

import itertools
from fractions import Fraction

import pytest

from latcheck.errors import BudgetExceededError, LatticeError
from latcheck.lattice.core import (
    EmbeddedSublattice,
    GlueSpec,
    Lattice,
    direct_sum,
    divisibility,
    lattice_from_dict,
    lattice_to_dict,
    orthogonal_complement,
    rescale,
)
from latcheck.lattice.shortvec import short_vectors
from latcheck.linalg.exact import int_matrix, to_rows

D4 = [[-2, 0, 1, 0], [0, -2, 1, 0], [1, 1, -2, 1], [0, 0, 1, -2]]


def lattice(rows, label=None) -> Lattice:
    return Lattice(int_matrix(rows), label=label)


class TestLattice:
    """Tests for Lattice validation and invariants."""

    def test_rejects_odd_diagonal(self):
        """Odd lattices are not allowed."""
        with pytest.raises(LatticeError, match="odd"):
            lattice([[1]])

    def test_rejects_asymmetric(self):
        """The Gram matrix must be symmetric."""
        with pytest.raises(LatticeError, match="symmetric"):
            lattice([[0, 1], [2, 0]])

    def test_rejects_degenerate_unless_allowed(self):
        """A zero determinant is an error unless allow_degenerate is set."""
        with pytest.raises(LatticeError, match="degenerate"):
            lattice([[0, 0], [0, 0]])
        assert Lattice(int_matrix([[0, 0], [0, 0]]), allow_degenerate=True).rank == 2

    def test_d4_invariants(self):
        """D4 is negative definite with determinant 4."""
        d4 = lattice(D4, "D4")

        assert d4.rank == 4
        assert d4.determinant == 4
        assert d4.signature == (0, 4, 0)
        assert d4.is_negative_definite
        assert d4.is_definite

    def test_square_and_pair(self, hyperbolic):
        """Bilinear form helpers on U."""
        assert hyperbolic.square([1, 1]) == 2
        assert hyperbolic.pair([1, 0], [0, 3]) == 3
        assert hyperbolic.square([Fraction(1, 2), 1]) == 1


class TestConstructions:
    """Tests for direct_sum, rescale and orthogonal_complement."""

    def test_direct_sum(self, hyperbolic):
        """U + <-2> has rank 3 and determinant 2."""
        total = direct_sum([hyperbolic, lattice([[-2]])])

        assert total.rank == 3
        assert total.determinant == 2
        assert total.signature == (1, 2, 0)
        assert not total.is_definite

    def test_rescale(self, hyperbolic):
        """U(4) has determinant -16; U(2)(1/2) is U again."""
        assert rescale(hyperbolic, 4).determinant == -16
        assert to_rows(rescale(rescale(hyperbolic, 2), Fraction(1, 2)).gram) == [[0, 1], [1, 0]]

    def test_rescale_to_odd_fails(self):
        """<-2>(1/2) is odd."""
        with pytest.raises(LatticeError, match="odd"):
            rescale(lattice([[-2]]), Fraction(1, 2))

    def test_orthogonal_complement(self, hyperbolic):
        """The complement of a square-2 vector in U + <-2>."""
        ambient = direct_sum([hyperbolic, lattice([[-2]])])
        sub = EmbeddedSublattice(ambient, int_matrix([[1, 1, 0]]))
        complement = orthogonal_complement(sub)

        assert complement.rank == 2
        assert complement.primitive
        assert abs(complement.lattice().determinant) == 4
        again = orthogonal_complement(complement)
        assert again.same_as(sub.saturation())

    def test_complement_of_non_primitive_is_saturated(self, hyperbolic):
        """Complement of complement is the saturation."""
        ambient = direct_sum([hyperbolic, hyperbolic])
        sub = EmbeddedSublattice(ambient, int_matrix([[2, 0, 0, 0]]))

        assert not sub.primitive
        assert sub.index_in_saturation() == 2
        assert orthogonal_complement(orthogonal_complement(sub)).same_as(sub.saturation())

    def test_divisibility(self, hyperbolic):
        """div(v) generates v . L."""
        assert divisibility([2, 0], hyperbolic) == 2
        assert divisibility([1, 0], rescale(hyperbolic, 2)) == 2
        assert divisibility([1, 1], hyperbolic) == 1
        with pytest.raises(LatticeError):
            divisibility([0, 0], hyperbolic)


class TestGlue:
    """Tests for GlueSpec and overlattice."""

    def test_index_two_overlattice(self):
        """<-4> + <-4> glued by (1/2, 1/2) has index 2 and determinant 4."""
        spec = GlueSpec([lattice([[-4]]), lattice([[-4]])], [[Fraction(1, 2), Fraction(1, 2)]])
        over = spec.overlattice()

        assert over.index == 2
        assert over.determinant == 4
        assert spec.order_of(spec.glue_vectors[0]) == 2

    def test_rejects_odd_glue(self):
        """Glue vectors of odd square name themselves in the error."""
        with pytest.raises(LatticeError, match="glue vector 0"):
            GlueSpec([lattice([[-2]]), lattice([[-2]])], [[Fraction(1, 2), Fraction(1, 2)]])

    def test_rejects_trivial_glue(self):
        """A glue vector already in the direct sum is rejected."""
        with pytest.raises(LatticeError, match="already"):
            GlueSpec([lattice([[-2]])], [[1]])

    def test_rejects_non_dual_glue(self):
        """Glue vectors must lie in the dual lattice."""
        with pytest.raises(LatticeError, match="dual"):
            GlueSpec([lattice([[-2]])], [[Fraction(1, 4)]])


class TestSerialization:
    """Tests for the JSON lattice forms."""

    def test_plain_round_trip(self):
        """A labelled Gram matrix survives to_dict/from_dict."""
        d4 = lattice(D4, "D4")
        again = lattice_from_dict(lattice_to_dict(d4))

        assert to_rows(again.gram) == D4
        assert again.label == "D4"

    def test_embedded_form(self, hyperbolic):
        """An embedded lattice resolves its ambient by name."""
        data = {"ambient": "U", "basis": [[1, 1]]}
        sub = lattice_from_dict(data, resolve=lambda name: hyperbolic)

        assert isinstance(sub, EmbeddedSublattice)
        assert to_rows(sub.gram) == [[2]]


class TestShortVectors:
    """Tests for short_vectors."""

    def test_d4_roots(self):
        """D4 has 24 roots, i.e. 12 up to sign."""
        roots = short_vectors(lattice(D4), 2)

        assert len(roots) == 12
        assert all(lattice(D4).square(v) == -2 for v in roots)

    def test_sorted_by_norm(self):
        """Vectors come sorted by increasing norm."""
        vectors = short_vectors(lattice([[-2, 0], [0, -4]]), 6)
        norms = [-lattice([[-2, 0], [0, -4]]).square(v) for v in vectors]

        assert norms == sorted(norms)
        assert norms[:2] == [2, 4]

    def test_indefinite_rejected(self, hyperbolic):
        """Indefinite lattices raise LatticeError."""
        with pytest.raises(LatticeError):
            short_vectors(hyperbolic, 4)

    def test_limit(self):
        """The vector-count cap raises BudgetExceededError or truncates."""
        try:
            found = short_vectors(lattice(D4), 8, limit=5)
        except BudgetExceededError:
            return
        assert len(found) <= 5

    @pytest.mark.parametrize("bound", [2, 4, 6])
    def test_matches_coefficient_box(self, bound):
        """Fincke-Pohst agrees with a brute-force scan of a coefficient box."""
        d4 = lattice(D4)
        box = range(-3, 4)
        expected = set()
        for v in itertools.product(box, repeat=4):
            norm = -d4.square(v)
            if 0 < norm <= bound:
                expected.add(frozenset([tuple(v), tuple(-x for x in v)]))
        found = {frozenset([tuple(int(x) for x in v), tuple(-int(x) for x in v)]) for v in short_vectors(d4, bound)}

        assert found == expected
