"""
Unit tests for latcheck/genus/rows.py and latcheck/genus/witness.py

Parameter handling plus a few full rows; whole tables run through the CLI.
"""

import pytest

from latcheck.errors import InadmissibleParameterError, LatticeError
from latcheck.genus.rows import best, parameter_values, row_values, verify_row
from latcheck.genus.star import StarReport
from latcheck.genus.witness import complement_of, format_vector, saturation_index
from latcheck.lattice.core import Lattice
from latcheck.linalg.exact import int_matrix, to_rows
from latcheck.models import RowRecord
from latcheck.torsion.isometry import Outcome


def row(**kwargs) -> RowRecord:
    fields = {"id": "r", "label": "L(d)", "ns": "A", "t": "B"}
    fields.update(kwargs)
    return RowRecord(**fields)


class TestRowValues:
    """Tests for row_values."""

    def test_derived_degree(self):
        """d = 4m - 3 at m = 2."""
        record = row(param="m", minimum={"m": 1}, derived={"d": "4*m-3"})
        assert row_values(record, 2) == {"m": 2, "d": 5}

    def test_congruence(self):
        """Values outside the congruence class are rejected with their context."""
        record = row(congruence=(4, 1))
        with pytest.raises(InadmissibleParameterError) as info:
            row_values(record, 2, "z4-families")

        assert info.value.value == 2
        assert info.value.row == "z4-families/r"
        assert "1 mod 4" in info.value.constraint

    def test_non_integral_derived_value(self):
        """A derived value must be an integer."""
        record = row(param="h", derived={"d": "h/2"})
        with pytest.raises(InadmissibleParameterError):
            row_values(record, 3)

    def test_minimum_on_derived_value(self):
        """Minima apply to derived values too."""
        record = row(param="m", minimum={"d": 1}, derived={"d": "4*(m-1)"})
        with pytest.raises(InadmissibleParameterError):
            row_values(record, 1)
        assert row_values(record, 2)["d"] == 4


class TestParameterValues:
    """Tests for parameter_values."""

    def test_degree_rows_cover_d_max(self):
        """Rows indexed by d list every admissible d up to d_max."""
        record = row(congruence=(4, 1), minimum={"d": 1})
        assert parameter_values(record, limit=2, d_max=12) == [1, 5, 9]

    def test_other_rows_take_limit(self):
        """Other rows take the first ``limit`` admissible values."""
        record = row(param="m", minimum={"m": 2}, derived={"d": "4*(m-1)"})
        assert parameter_values(record, limit=3) == [2, 3, 4]

    def test_skips_inadmissible(self):
        """Values with a non-integral derived degree are skipped."""
        record = row(param="h", minimum={"h": 1}, derived={"d": "h/2"})
        assert parameter_values(record, limit=2) == [2, 4]

    def test_catalog_row(self, catalog):
        """The d = 0 mod 8 rows of the Klein table start at 8."""
        table = catalog.table("klein-families")
        (record,) = [r for r in table.rows if r.id == "d0-L0"]
        assert parameter_values(record, limit=1, d_max=24) == [8, 16, 24]


class TestBest:
    """Tests for best."""

    def test_order(self):
        """PASS beats UNKNOWN beats FAIL."""
        assert best([Outcome.FAIL, Outcome.PASS]) is Outcome.PASS
        assert best([Outcome.FAIL, Outcome.UNKNOWN]) is Outcome.UNKNOWN
        assert best([Outcome.FAIL]) is Outcome.FAIL
        assert best([]) is Outcome.FAIL


class TestVerifyRow:
    """Argument handling of verify_row."""

    def test_unknown_row(self, catalog):
        """Row ids are checked against the table."""
        with pytest.raises(LatticeError, match="no row"):
            verify_row(catalog, "z4-families", "d9-L0", 1)

    def test_inadmissible_value(self, catalog):
        """d = 2 is outside the d = 1 mod 4 row."""
        with pytest.raises(InadmissibleParameterError):
            verify_row(catalog, "z4-families", "d1-L0", 2)


class TestWitnessHelpers:
    """Tests for saturation_index, complement_of and format_vector."""

    @pytest.mark.parametrize(
        "vector, index",
        [([2, 0, 2], 2), ([2, 0, 1], 1), ([0, 0, 3], 3), ([1, 3, 0], 1)],
    )
    def test_saturation_index_with_mu(self, vector, index):
        """gcd of the divisibility of the mu-free part and the mu coefficient."""
        host = Lattice(int_matrix([[0, 1, 0], [1, 0, 0], [0, 0, -2]]))
        assert saturation_index(vector, host, ["s1", "s2", "mu"]) == index

    def test_saturation_index_without_mu(self):
        """Without mu the index is the divisibility."""
        host = Lattice(int_matrix([[0, 1, 0], [1, 0, 0], [0, 0, -2]]))
        assert saturation_index([2, 2, 0], host, ["s1", "s2", "w"]) == 2

    def test_complement(self, hyperbolic):
        """The complement of s1 + s2 in U is <-2>."""
        assert to_rows(complement_of([1, 1], hyperbolic).gram) == [[-2]]

    @pytest.mark.parametrize(
        "vector, text",
        [([1, -1, 0, 3], "a-b+3*d"), ([0, 0, 0, 0], "0"), ([-2, 1, 0, 0], "-2*a+b")],
    )
    def test_format_vector(self, vector, text):
        """Coefficients print in front of basis names."""
        assert format_vector(vector, ["a", "b", "c", "d"]) == text


def check(report, name):
    (found,) = [c for c in report.checks if c.name == name]
    return found


class TestCatalogRows:
    """Full verification of single catalog rows."""

    @pytest.mark.parametrize(
        "table, row_id, value",
        [
            ("z4-orbifolds", "d1-L0", 1),
            ("klein-orbifolds", "d1-L0", 1),
            ("mixed-d6", "a-odd-G", 1),
            ("mixed-d4", "a-odd-G", 1),
        ],
    )
    def test_row_passes(self, catalog, table, row_id, value):
        """The lattices of the row glue into the orbifold lattice."""
        report = verify_row(catalog, table, row_id, value)

        assert report.failures == []
        assert check(report, "NS/T glue").status is Outcome.PASS
        assert check(report, "determinant").status is Outcome.PASS

    @pytest.mark.parametrize("table", ["z4-families", "klein-families"])
    def test_family_row_passes(self, catalog, table):
        """The class of L0(1) has square 2 and the expected complement."""
        assert verify_row(catalog, table, "d1-L0", 1).failures == []

    @pytest.mark.parametrize("table", ["mixed-d6", "mixed-d4"])
    def test_mixed_row_conditions(self, catalog, table):
        """The star condition and the fixed class hold for e = 1."""
        report = verify_row(catalog, table, "a-odd-G", 1)

        assert check(report, "star condition").status is Outcome.PASS
        assert check(report, "fixed class").status is Outcome.PASS

    def test_failed_star_condition_is_an_error(self, catalog, monkeypatch):
        """A failing star condition counts against the row."""
        monkeypatch.setattr(
            "latcheck.genus.rows.check_star_condition",
            lambda phi, reference, budget=None: StarReport(Outcome.FAIL, {"glue": Outcome.FAIL}, "no match"),
        )
        report = verify_row(catalog, "mixed-d4", "a-odd-G", 1)
        star = check(report, "star condition")

        assert star.status is Outcome.FAIL
        assert star.severity == "error"
        assert star in report.failures

    def test_pushed_polarization(self, catalog):
        """The source polarization pushed to the orbifold lattice has square 4d."""
        report = verify_row(catalog, "z4-orbifolds", "d1-L0", 1)
        pushed = check(report, "H^2 pushforward")

        assert pushed.status is Outcome.PASS
        assert pushed.detail.endswith("has square 4")
        assert report.columns["class"] != ""
