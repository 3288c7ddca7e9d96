"""Rendering of verification reports and the exit code they imply."""

from __future__ import annotations

import csv
import io
import json
from collections import Counter
from typing import Any, Iterable, Literal

from jinja2 import Environment, FileSystemLoader, StrictUndefined

from latcheck.constants import EXIT_FAILURE, EXIT_OK, TEMPLATES_DIR
from latcheck.models import RowReport
from latcheck.torsion.isometry import Outcome

Format = Literal["text", "json", "csv"]

CSV_FIELDS = ("target", "row", "param", "label", "flags", "check", "status", "severity", "detail", "witness")

_ENV = Environment(
    loader=FileSystemLoader(str(TEMPLATES_DIR)),
    undefined=StrictUndefined,
    trim_blocks=True,
    lstrip_blocks=True,
    keep_trailing_newline=True,
)


def sort_reports(reports: Iterable[RowReport]) -> list[RowReport]:
    return sorted(reports, key=RowReport.sort_key)


def summarize(reports: Iterable[RowReport]) -> Counter[str]:
    counts: Counter[str] = Counter()
    for report in reports:
        for check in report.checks:
            counts[check.status.value] += 1
            if check.severity == "info":
                continue
            if check.status is Outcome.FAIL:
                counts[f"{check.severity} failures"] += 1
    return counts


def exit_code(reports: Iterable[RowReport], strict: bool = False) -> int:
    """1 on an error-severity FAIL, or on any warning under ``strict``."""
    for report in reports:
        if report.failures:
            return EXIT_FAILURE
        if strict and report.warnings:
            return EXIT_FAILURE
    return EXIT_OK


def to_json(reports: Iterable[RowReport]) -> str:
    data = [r.model_dump(mode="json") for r in sort_reports(reports)]
    return json.dumps(data, indent=2, ensure_ascii=False) + "\n"


def to_csv(reports: Iterable[RowReport]) -> str:
    buffer = io.StringIO()
    writer = csv.DictWriter(buffer, fieldnames=CSV_FIELDS, lineterminator="\n")
    writer.writeheader()
    for report in sort_reports(reports):
        for check in report.checks:
            writer.writerow(
                {
                    "target": report.target,
                    "row": report.row,
                    "param": "" if report.param is None else report.param,
                    "label": report.label,
                    "flags": ";".join(report.flags),
                    "check": check.name,
                    "status": check.status.value,
                    "severity": check.severity,
                    "detail": check.detail,
                    "witness": check.witness or "",
                }
            )
    return buffer.getvalue()


def row_status(report: RowReport) -> str:
    """Overall cell of a report: its worst non-info check."""
    if report.failures:
        return Outcome.FAIL.value
    if report.warnings:
        return "warn"
    return Outcome.PASS.value


def _table(target: str, reports: list[RowReport]) -> dict[str, Any]:
    extra: list[str] = []
    for report in reports:
        extra += [name for name in report.columns if name not in extra]
    headers = ["row", "param", "label", *extra, "status"]
    rows = []
    notes = []
    for report in reports:
        param = "" if report.param is None else str(report.param)
        label = report.label + (f" ({', '.join(report.flags)})" if report.flags else "")
        rows.append([report.row, param, label, *(report.columns.get(name, "") for name in extra), row_status(report)])
        key = f"{report.row}[{param}]" if param else report.row
        notes += [
            {
                "key": key,
                "status": check.status.value,
                "check": check.name,
                "severity": check.severity,
                "detail": check.detail,
                "witness": check.witness,
            }
            for check in report.checks
            if check.status is not Outcome.PASS
        ]
    widths = [max([len(h), *(len(r[i]) for r in rows)]) for i, h in enumerate(headers)]
    return {"target": target, "headers": headers, "widths": widths, "rows": rows, "notes": notes}


def to_text(reports: Iterable[RowReport], strict: bool = False) -> str:
    """One aligned table per target, one line per (row, parameter); non-passing checks follow as notes."""
    ordered = sort_reports(reports)
    targets: dict[str, list[RowReport]] = {}
    for report in ordered:
        targets.setdefault(report.target, []).append(report)
    template = _ENV.get_template("report.txt.j2")
    return template.render(
        tables=[_table(target, rows) for target, rows in targets.items()],
        summary=summarize(ordered),
        exit_code=exit_code(ordered, strict),
        strict=strict,
    )


def render(reports: Iterable[RowReport], fmt: Format = "text", strict: bool = False) -> str:
    if fmt == "json":
        return to_json(reports)
    if fmt == "csv":
        return to_csv(reports)
    return to_text(reports, strict)


__all__ = ["exit_code", "render", "row_status", "sort_reports", "summarize", "to_csv", "to_json", "to_text"]
