"""Run verification targets, fanning table rows out over worker processes."""

from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any

from latcheck.catalog.loader import Catalog, load_catalog
from latcheck.models import RowReport
from latcheck.verify.targets import (
    TABLE_TARGETS,
    RunOptions,
    expand_target,
    flag_ambiguous_pairings,
    run_table_jobs,
    run_target,
    table_jobs,
)

logger = logging.getLogger(__name__)

_WORKER_CATALOGS: dict[str, Catalog] = {}


def _worker_catalog(directory: str) -> Catalog:
    if directory not in _WORKER_CATALOGS:
        _WORKER_CATALOGS[directory] = load_catalog(directory, validate=False)
    return _WORKER_CATALOGS[directory]


def _table_worker(worker_args: tuple[str, str, list[tuple[str, int]], int | None]) -> list[dict[str, Any]]:
    directory, key, jobs, budget = worker_args
    reports = run_table_jobs(_worker_catalog(directory), key, jobs, budget)
    return [r.model_dump() for r in reports]


def _chunks(jobs: list[tuple[str, int]], size: int) -> list[list[tuple[str, int]]]:
    return [jobs[i : i + size] for i in range(0, len(jobs), size)]


def run_targets(
    catalog: Catalog,
    target: str,
    options: RunOptions,
    workers: int | None = None,
) -> list[RowReport]:
    """
    Run ``target`` (or every target for ``all``).

    With ``workers > 1`` table rows are verified in a process pool; each
    worker loads its own copy of the catalog from ``catalog.directory``.
    """
    reports: list[RowReport] = []
    for key in expand_target(target):
        if key in TABLE_TARGETS and workers and workers > 1:
            reports.extend(_run_table_parallel(catalog, key, options, workers))
        else:
            reports.extend(run_target(catalog, key, options))
        logger.info("%s done, %d reports so far", key, len(reports))
    return reports


def _run_table_parallel(catalog: Catalog, key: str, options: RunOptions, workers: int) -> list[RowReport]:
    jobs = table_jobs(catalog, key, options)
    if not jobs:
        return []
    size = max(1, len(jobs) // (4 * workers))
    directory = str(Path(catalog.directory))
    worker_args = [(directory, key, chunk, options.budget) for chunk in _chunks(jobs, size)]
    reports: list[RowReport] = []
    with ProcessPoolExecutor(max_workers=workers) as executor:
        for dumped in executor.map(_table_worker, worker_args):
            reports.extend(RowReport.model_validate(d) for d in dumped)
    flag_ambiguous_pairings(catalog, key, reports, options.budget)
    return reports


__all__ = ["run_targets"]
