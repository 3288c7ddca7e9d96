"""
Unit tests for latcheck/cli.py
"""

import json

import pytest

from latcheck.cli import main, parse_args
from latcheck.verify.targets import DESCRIPTIONS


class TestParseArgs:
    """Tests for argument parsing."""

    def test_run_defaults(self):
        """run takes a target and falls back to the configured defaults."""
        args = parse_args(["run", "glue"])

        assert args.command == "run"
        assert args.target == "glue"
        assert args.format == "text"
        assert not args.strict
        assert args.out is None

    def test_run_options(self, tmp_path):
        """Numeric options and the output path are parsed."""
        out = tmp_path / "report.json"
        args = parse_args(
            ["-vv", "run", "mixed-d4", "--param-max", "2", "--d-max", "8", "--budget", "100",
             "--strict", "--format", "json", "--out", str(out), "--workers", "2"]
        )

        assert args.verbose == 2
        assert (args.param_max, args.d_max, args.budget, args.workers) == (2, 8, 100, 2)
        assert args.strict
        assert args.out == out

    def test_bad_format(self):
        """Unknown formats are a usage error."""
        with pytest.raises(SystemExit) as info:
            parse_args(["run", "glue", "--format", "xml"])
        assert info.value.code == 2


class TestMain:
    """Tests for main and its exit codes."""

    def test_list(self, capsys):
        """list prints every target id."""
        assert main(["list"]) == 0
        out = capsys.readouterr().out
        for target in DESCRIPTIONS:
            assert target in out

    def test_dump(self, capsys, catalog_dir):
        """dump prints the record with derived invariants as JSON."""
        assert main(["--catalog", str(catalog_dir), "dump", "E8"]) == 0
        data = json.loads(capsys.readouterr().out)

        assert data["key"] == "lattices/E8"
        assert data["determinant"] == 1
        assert data["signature"] == [0, 8]

    def test_dump_unknown_key(self, capsys, catalog_dir):
        """Unknown keys exit 2 with a message on stderr."""
        assert main(["--catalog", str(catalog_dir), "dump", "E9"]) == 2
        assert "E9" in capsys.readouterr().err

    def test_unknown_target(self, capsys, catalog_dir):
        """Unknown targets exit 2."""
        assert main(["--catalog", str(catalog_dir), "run", "bogus"]) == 2
        assert "bogus" in capsys.readouterr().err

    def test_non_positive_option(self, catalog_dir):
        """Non-positive limits exit 2."""
        assert main(["--catalog", str(catalog_dir), "run", "glue", "--budget", "0"]) == 2

    def test_missing_catalog(self, tmp_path):
        """A catalog directory without files exits 2."""
        assert main(["--catalog", str(tmp_path), "run", "glue"]) == 2

    def test_run_to_file(self, tmp_path, catalog_dir):
        """A JSON report is written to --out with one entry per glue model."""
        out = tmp_path / "reports" / "glue.json"
        code = main(["--catalog", str(catalog_dir), "run", "glue", "--format", "json", "--out", str(out)])
        data = json.loads(out.read_text(encoding="utf-8"))

        assert code == 0
        assert {entry["row"] for entry in data} == {"d4-standard", "d6-standard"}
        assert all(entry["target"] == "glue" for entry in data)
        assert [c["name"] for c in data[0]["checks"]] == ["glue orders", "overlattice genus"]

    def test_passing_target_exits_zero(self, capsys, catalog_dir):
        """A target with no failures exits 0 and prints its table."""
        assert main(["--catalog", str(catalog_dir), "run", "quotient"]) == 0
        out = capsys.readouterr().out

        assert "status" in out.splitlines()[1]
        assert out.rstrip().endswith("exit code 0")
