"""
Unit tests for latcheck/verify/targets.py
"""

from collections import Counter

import pytest

from latcheck.constants import ORBIFOLD_PARAM_MAX
from latcheck.torsion.isometry import Outcome
from latcheck.verify.targets import (
    STRUCTURAL_TARGETS,
    RunOptions,
    check_orbits,
    check_partial_gram,
    check_quotient,
    check_walls,
    run_target,
    table_jobs,
)


def checks(report):
    return {c.name: c for c in report.checks}


class TestStructuralTargets:
    """Every structural target passes on the shipped catalog."""

    @pytest.mark.parametrize("target", sorted(STRUCTURAL_TARGETS))
    def test_no_failures(self, catalog, target):
        """No error-severity failure in any report."""
        reports = run_target(catalog, target, RunOptions(param_max=2))

        assert reports
        assert [(r.row, [c.name for c in r.failures]) for r in reports if r.failures] == []

    def test_orbit_separation(self, catalog):
        """For d = 1 and 5 the two classes lie in different orbits."""
        reports = {r.param: r for r in check_orbits(catalog, RunOptions(param_max=2))}
        for d in (1, 5):
            separation = checks(reports[d])["orbit separation"]
            assert separation.status is Outcome.PASS
            assert separation.severity == "error"
        assert reports[4].columns["elements"] == "0"

    def test_refined_wall_counts(self, catalog):
        """No refined wall class in the D6(2) image or in the D4(2) glue model."""
        reports = {r.row: r for r in check_walls(catalog, RunOptions())}

        for key in ("d6-image", "d4-standard"):
            assert reports[key].columns["refined"] == "0"
            assert checks(reports[key])["refined count"].status is Outcome.PASS
            assert checks(reports[key])["refined count"].severity == "error"
            assert checks(reports[key])["literal count"].severity == "info"

    def test_quotient_genus(self, catalog):
        """The composed pushforward lands in the expected genus."""
        for report in check_quotient(catalog, RunOptions()):
            assert checks(report)["quotient genus"].status is Outcome.PASS


class TestTableJobs:
    """Tests for table_jobs."""

    def test_orbifold_rows_are_capped(self, catalog):
        """Each orbifold row runs at most ORBIFOLD_PARAM_MAX values."""
        jobs = table_jobs(catalog, "z4-orbifolds", RunOptions(param_max=5, d_max=24))
        per_row = Counter(row for row, _ in jobs)

        assert max(per_row.values()) <= ORBIFOLD_PARAM_MAX
        assert [v for row, v in jobs if row == "d1-L0"] == [1, 5, 9][:ORBIFOLD_PARAM_MAX]

    def test_family_degree_rows_are_not_capped(self, catalog):
        """Family rows indexed by d still cover every d up to d_max."""
        jobs = table_jobs(catalog, "z4-families", RunOptions(param_max=1, d_max=24))
        assert [v for row, v in jobs if row == "d1-L0"] == [1, 5, 9, 13, 17, 21]


class TestPartialGram:
    """Tests for check_partial_gram."""

    def test_completion_checks_are_errors(self, catalog):
        """Uniqueness, integrality and evenness of a completion count against the run."""
        names = {"unique", "integral", "even"}
        found = [c for r in check_partial_gram(catalog, RunOptions()) for c in r.checks if c.name in names]

        assert found
        assert {c.severity for c in found} == {"error"}
