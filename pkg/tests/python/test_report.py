"""
Unit tests for latcheck/verify/report.py and the target registry
"""

import csv
import io
import json

import pytest

from latcheck.errors import UnknownTargetError
from latcheck.models import RowReport
from latcheck.torsion.isometry import Outcome
from latcheck.verify.report import exit_code, render, sort_reports, summarize
from latcheck.verify.targets import DESCRIPTIONS, TABLE_TARGETS, expand_target


def report(*checks, target="glue", row="r", param=None) -> RowReport:
    out = RowReport(target=target, row=row, param=param, label="L", columns={"NS": "A"})
    for status, severity in checks:
        out.add(f"check {len(out.checks)}", status, "detail", severity=severity)
    return out


class TestExitCode:
    """Tests for exit_code."""

    def test_all_pass(self):
        """Passing reports exit 0."""
        assert exit_code([report((Outcome.PASS, "error"))]) == 0

    def test_error_failure(self):
        """An error-severity FAIL exits 1."""
        assert exit_code([report((Outcome.PASS, "error"), (Outcome.FAIL, "error"))]) == 1

    def test_warning_failure_needs_strict(self):
        """Warning-severity FAILs only count under --strict."""
        reports = [report((Outcome.FAIL, "warning"))]

        assert exit_code(reports) == 0
        assert exit_code(reports, strict=True) == 1

    def test_unknown_needs_strict(self):
        """UNKNOWN never fails a non-strict run."""
        reports = [report((Outcome.UNKNOWN, "error"))]

        assert exit_code(reports) == 0
        assert exit_code(reports, strict=True) == 1

    def test_info_never_counts(self):
        """Informational checks never change the exit code."""
        reports = [report((Outcome.FAIL, "info"), (Outcome.UNKNOWN, "info"))]
        assert exit_code(reports, strict=True) == 0


class TestRender:
    """Tests for the text, JSON and CSV renderers."""

    def test_summary(self):
        """Counts by status plus failures by severity."""
        counts = summarize([report((Outcome.PASS, "error"), (Outcome.FAIL, "error"), (Outcome.FAIL, "info"))])

        assert counts["pass"] == 1
        assert counts["fail"] == 2
        assert counts["error failures"] == 1
        assert "info failures" not in counts

    def test_sorting(self):
        """Reports sort by target, row and parameter."""
        reports = [report(row="b", param=1), report(row="a", param=5), report(row="a", param=2)]
        ordered = [(r.row, r.param) for r in sort_reports(reports)]
        assert ordered == [("a", 2), ("a", 5), ("b", 1)]

    def test_json(self):
        """JSON output lists reports with string statuses."""
        data = json.loads(render([report((Outcome.UNKNOWN, "warning"))], "json"))

        assert data[0]["target"] == "glue"
        assert data[0]["checks"][0]["status"] == "unknown"
        assert data[0]["checks"][0]["severity"] == "warning"

    def test_csv(self):
        """One CSV line per check; a missing parameter is empty."""
        text = render([report((Outcome.PASS, "error"), (Outcome.FAIL, "warning"))], "csv")
        rows = list(csv.DictReader(io.StringIO(text)))

        assert len(rows) == 2
        assert rows[0]["param"] == ""
        assert rows[1]["status"] == "fail"
        assert rows[1]["severity"] == "warning"

    def test_text(self):
        """The text report is a table per target and ends with the exit code."""
        text = render([report((Outcome.FAIL, "error"), param=3)], "text")

        assert "== glue ==" in text
        assert "row  param  label  NS  status" in text
        assert "r    3      L      A   fail" in text
        assert "  r[3]  fail check 0: detail" in text
        assert "error failures: 1" in text
        assert text.rstrip().endswith("exit code 1")

    def test_text_columns_align(self):
        """Cells of one column start at the same offset on every line."""
        reports = [
            report((Outcome.PASS, "error"), row="short", param=1),
            report((Outcome.UNKNOWN, "warning"), row="a-much-longer-row", param=12),
        ]
        lines = [line for line in render(reports, "text").splitlines() if line.startswith(("row", "short", "a-much"))]
        offsets = {line.index(word) for line, word in zip(lines, ["status", "warn", "pass"])}

        assert len(lines) == 3
        assert len(offsets) == 1

    def test_text_strict(self):
        """Strict runs are marked."""
        text = render([report((Outcome.UNKNOWN, "warning"))], "text", strict=True)
        assert text.rstrip().endswith("exit code 1 (strict)")


class TestTargets:
    """Tests for the target registry."""

    def test_all_expands_in_order(self):
        """``all`` lists every concrete target once."""
        targets = expand_target("all")

        assert "all" not in targets
        assert targets == [t for t in DESCRIPTIONS if t != "all"]
        assert set(TABLE_TARGETS) <= set(targets)

    def test_unknown(self):
        """Unknown targets raise UnknownTargetError."""
        with pytest.raises(UnknownTargetError):
            expand_target("tables")
