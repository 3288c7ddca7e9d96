"""
Verification of classification-table rows.

Three row kinds are supported:

* ``families``: a polarization class in the invariant lattice of a
  K3^[2]-type action; the complement of the class is the transcendental
  lattice.
* ``orbifolds``: Néron-Severi and transcendental lattices of a Nikulin-type
  orbifold obtained from a family row by a quotient map.
* ``mixed``: orbifolds carrying a non-standard involution; the glue of the
  ``D_k(2)`` summand must match a reference glue model.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from math import isqrt
from typing import Iterable, Sequence

from latcheck.catalog.loader import Catalog
from latcheck.catalog.pushforward import load_pushforward, printed_square
from latcheck.catalog.recipes import Candidate, evaluate_int
from latcheck.constants import DEFAULT_D_MAX
from latcheck.errors import InadmissibleParameterError, LatcheckError, LatticeError
from latcheck.genus.gluing import GlueResult, exists_glue_to_genus
from latcheck.genus.star import check_star_condition
from latcheck.genus.witness import (
    complement_matches,
    complement_of,
    find_witness,
    format_vector,
    saturation_index,
)
from latcheck.lattice.core import EmbeddedSublattice, Lattice, divisibility
from latcheck.linalg.exact import int_matrix, rat_matrix, solve_rational
from latcheck.models import RowRecord, RowReport, TableRecord
from latcheck.torsion.isometry import Outcome

logger = logging.getLogger(__name__)

# Scan window for parameters of rows whose first admissible value is far out.
SCAN_SPAN = 64


def best(outcomes: Iterable[Outcome]) -> Outcome:
    """PASS if any passed, else UNKNOWN if any was undecided, else FAIL."""
    seen = list(outcomes)
    if Outcome.PASS in seen:
        return Outcome.PASS
    return Outcome.UNKNOWN if Outcome.UNKNOWN in seen else Outcome.FAIL


def row_values(row: RowRecord, value: int, where: str = "") -> dict[str, int]:
    """Parameter values of ``row`` at ``value``; raises ``InadmissibleParameterError``."""
    name = f"{where}/{row.id}" if where else row.id
    if row.congruence is not None:
        modulus, residue = row.congruence
        if value % modulus != residue % modulus:
            raise InadmissibleParameterError(name, f"{row.param} = {residue} mod {modulus}", value)
    values = {row.param: value}
    for key, expr in row.derived.items():
        try:
            values[key] = evaluate_int(expr, values, f"{row.id}.{key}")
        except LatticeError as exc:
            raise InadmissibleParameterError(name, f"{key} = {expr} integral", value) from exc
    for key, low in row.minimum.items():
        if key in values and values[key] < low:
            raise InadmissibleParameterError(name, f"{key} >= {low}", value)
    return values


def admissible(row: RowRecord, value: int) -> bool:
    try:
        row_values(row, value)
    except InadmissibleParameterError:
        return False
    return True


def parameter_values(row: RowRecord, limit: int, d_max: int = DEFAULT_D_MAX) -> list[int]:
    """
    Ascending admissible parameter values: every ``d <= d_max`` for rows
    indexed by the degree, otherwise the first ``limit`` values.
    """
    start = row.minimum.get(row.param, 1)
    if row.param == "d":
        return [d for d in range(start, d_max + 1) if admissible(row, d)]
    out = []
    value = start
    while len(out) < limit and value < start + SCAN_SPAN * (limit + 1):
        if admissible(row, value):
            out.append(value)
        value += 1
    return out


def _lattice_or_genus(candidate: Candidate):
    return candidate.lattice if candidate.lattice is not None else candidate.genus


def _determinant_condition(ns: Sequence[Candidate], t: Sequence[Candidate], ambient_order: int) -> tuple[Outcome, str]:
    """``|A_NS| |A_T| = |A_ambient| · index²`` for some pair."""
    for a in ns:
        for b in t:
            product = a.genus.disc.order * b.genus.disc.order
            square, rest = divmod(product, ambient_order)
            if not rest and isqrt(square) ** 2 == square:
                return Outcome.PASS, f"|A_NS| |A_T| = {product} = {ambient_order} * {isqrt(square)}^2"
    return Outcome.FAIL, "no pair with a square index"


def _glue(
    ns: Sequence[Candidate], t: Sequence[Candidate], ambient: Lattice, budget: int | None
) -> tuple[Outcome, tuple[Candidate, Candidate, GlueResult] | None, str]:
    outcomes = []
    for a in ns:
        for b in t:
            result = exists_glue_to_genus(_lattice_or_genus(a), _lattice_or_genus(b), ambient, budget)
            outcomes.append(result.outcome)
            if result.found:
                return Outcome.PASS, (a, b, result), result.detail
    return best(outcomes), None, f"{len(outcomes)} candidate pairs"


class RowVerifier:
    """Runs the checks of one table against a loaded catalog."""

    def __init__(self, catalog: Catalog, table_key: str, budget: int | None = None) -> None:
        self.catalog = catalog
        self.table_key = table_key
        self.table: TableRecord = catalog.table(table_key)
        self.budget = budget

    def recipe(self, text: str, values: dict[str, int]) -> list[Candidate]:
        return self.catalog.recipe(text, values, scope=self.table)

    def verify(self, row: RowRecord, value: int) -> RowReport:
        values = row_values(row, value, self.table_key)
        report = RowReport(
            target=self.table_key,
            row=row.id,
            param=value,
            label=row.label,
            columns={"NS": row.ns, "T": row.t, **{k: str(v) for k, v in values.items()}},
        )
        logger.debug("verifying %s/%s at %s=%d", self.table_key, row.id, row.param, value)
        try:
            if self.table.kind == "families":
                self._families(row, values, report)
            elif self.table.kind == "orbifolds":
                self._orbifolds(row, values, report)
            else:
                self._mixed(row, values, report)
        except LatcheckError as exc:
            logger.warning("%s/%s at %d: %s", self.table_key, row.id, value, exc)
            report.add("evaluation", Outcome.FAIL, str(exc))
        return report

    # -- families ------------------------------------------------------

    def _families(self, row: RowRecord, values: dict[str, int], report: RowReport) -> None:
        host = self.catalog.host(self.table.host or "")
        square = evaluate_int(row.square or "0", values, "square")
        report.columns["square"] = str(square)
        t_candidates = self.recipe(row.t, values)
        if row.mjh:
            try:
                label = self.catalog.relation("mjh", values[row.param])
                report.columns["j,h"] = f"{label['j']},{label['h']}"
                report.add("label relation", Outcome.PASS, f"j={label['j']}, h={label['h']}", severity="info")
            except LatticeError as exc:
                report.add("label relation", Outcome.FAIL, str(exc))

        if row.polarization:
            vector = self.catalog.class_vector(row.polarization, values)
            report.columns["class"] = format_vector(vector, host.names)
            actual = host.lattice.square(vector)
            report.add("class square", Outcome.of(actual == square), f"{actual} vs {square}")
            index = saturation_index(vector, host.lattice, host.names)
            report.add("NS index", Outcome.of(index == row.index), f"{index} vs {row.index}")
            complement = complement_of(vector, host.lattice)
            self._transcendental(row, values, complement, t_candidates, report)
            return

        found = find_witness(host.lattice, host.names, square, row.index, [_lattice_or_genus(c) for c in t_candidates], self.budget)
        if found.found:
            report.columns["class"] = format_vector(found.vector or [], host.names)
            report.add("witness", Outcome.PASS, found.detail, witness=report.columns["class"])
            return
        ambient = self.catalog.lattice(self.table.ambient)
        outcome, _, detail = _glue(self.recipe(row.ns, values), t_candidates, ambient, self.budget)
        if outcome is Outcome.PASS:
            report.add("witness", Outcome.UNKNOWN, found.detail, severity="info")
            report.add("NS/T glue", Outcome.PASS, detail)
        else:
            report.add("witness", Outcome.UNKNOWN, found.detail, severity="warning")
            report.add("NS/T glue", outcome, detail, severity="warning" if outcome is Outcome.UNKNOWN else "error")

    def _transcendental(
        self,
        row: RowRecord,
        values: dict[str, int],
        complement: Lattice,
        candidates: Sequence[Candidate],
        report: RowReport,
    ) -> None:
        pos, neg, _ = complement.signature
        report.add("T signature", Outcome.of((pos, neg) == (2, complement.rank - 2)), f"({pos}, {neg})")
        targets = [_lattice_or_genus(c) for c in candidates]
        outcome = complement_matches(complement, targets, self.budget)
        if row.erratum:
            report.add("T genus", outcome, f"printed {row.t}; erratum: {row.erratum}", severity="warning")
        else:
            report.add("T genus", outcome, f"printed {row.t}")
        if row.t_corrected:
            corrected = [_lattice_or_genus(c) for c in self.recipe(row.t_corrected, values)]
            report.add("T genus (corrected)", complement_matches(complement, corrected, self.budget), row.t_corrected)

    # -- orbifolds -----------------------------------------------------

    def _orbifolds(self, row: RowRecord, values: dict[str, int], report: RowReport) -> None:
        square = evaluate_int(row.square or "0", values, "square")
        report.columns["H^2"] = str(square)
        if row.source is not None:
            table = self.catalog.table(row.source.table)
            by_id = {r.id: r for r in table.rows}
            value = values[row.source.param]
            source = next((by_id[k] for k in row.source.rows if admissible(by_id[k], value)), None)
            if source is None:
                report.add("H^2", Outcome.FAIL, f"no source row admits {row.source.param}={value}")
            else:
                source_square = evaluate_int(source.square or "0", row_values(source, value), "square")
                expected = Fraction(2 * source_square, 4 if row.halved else 1)
                report.add(
                    "H^2",
                    Outcome.of(expected == square),
                    f"{row.source.table}/{source.id}: L^2={source_square}, expected {expected}",
                )
                if source.polarization and row.source.pushforward:
                    self._pushed_square(row, source, value, square, report)
        self._orbifold_lattices(row, values, report)

    def _pushed_square(self, row: RowRecord, source: RowRecord, value: int, square: int, report: RowReport) -> None:
        """Push the source polarization through the quotient map and square it in the printed image."""
        pf = load_pushforward(self.catalog, row.source.pushforward)  # type: ignore[union-attr, arg-type]
        vector = self.catalog.class_vector(source.polarization, row_values(source, value))  # type: ignore[arg-type]
        image = pf(vector)
        label = f"{pf.key}({source.polarization})"
        if row.halved:
            if any(c % 2 for c in image):
                report.add("H^2 pushforward", Outcome.FAIL, f"{label} = {image} is not divisible by 2")
                return
            image = [c // 2 for c in image]
            label += "/2"
        pushed = printed_square(pf, image)
        report.columns["class"] = format_vector(image, [f"g{i + 1}" for i in range(len(image))])
        report.add("H^2 pushforward", Outcome.of(pushed == square), f"{label} has square {pushed}", witness=str(image))

    def _orbifold_lattices(
        self, row: RowRecord, values: dict[str, int], report: RowReport
    ) -> tuple[Candidate, Candidate, GlueResult] | None:
        ambient = self.catalog.lattice(self.table.ambient)
        ns = self.recipe(row.ns, values)
        t = self.recipe(row.t, values)
        if not ns or not t:
            report.add("recipes", Outcome.FAIL, f"{len(ns)} NS and {len(t)} T candidates")
            return None
        ranks = {a.rank + b.rank for a in ns for b in t}
        report.add("rank", Outcome.of(ranks == {ambient.rank}), f"rank(NS) + rank(T) in {sorted(ranks)}")
        pos, neg = t[0].genus.signature
        report.add("T signature", Outcome.of((pos, neg) == (2, t[0].rank - 2)), f"({pos}, {neg})")
        outcome, detail = _determinant_condition(ns, t, abs(ambient.determinant))
        report.add("determinant", outcome, detail)
        outcome, found, detail = _glue(ns, t, ambient, self.budget)
        report.add("NS/T glue", outcome, detail, severity="error" if outcome is Outcome.FAIL else "warning")
        return found

    # -- mixed actions -------------------------------------------------

    def _mixed(self, row: RowRecord, values: dict[str, int], report: RowReport) -> None:
        found = self._orbifold_lattices(row, values, report)
        if found is None or found[2].spec is None:
            report.add("star condition", Outcome.UNKNOWN, "no lattice-level gluing to test", severity="warning")
            if row.fixed_class:
                report.add("fixed class", Outcome.UNKNOWN, "no lattice-level gluing to test", severity="warning")
            return
        ns, _, glue = found
        over = glue.spec.overlattice()  # type: ignore[union-attr]
        width = over.rank

        def embed(rows: list[list[int]]) -> list[list[int]]:
            padded = rat_matrix([list(r) + [0] * (width - len(r)) for r in rows], width)
            coords = solve_rational(over.basis, padded)
            if coords is None:
                raise LatticeError("summand is not inside the glued lattice")
            return [[int(x) for x in r] for r in coords.tolist()]

        summands = [list(map(int, r)) for r in ns.summand_coords.tolist()]  # type: ignore[union-attr]
        k = ns.parts[0][1]
        if row.star:
            phi = EmbeddedSublattice(over, int_matrix(embed(summands[:k]), width))
            star = check_star_condition(phi, self.catalog.glue_model(row.star).spec, self.budget)
            steps = ", ".join(f"{name}={o.value}" for name, o in star.steps.items())
            report.add("star condition", star.outcome, f"{star.detail}; {steps}")
        if row.fixed_class:
            rank_last = ns.parts[-1][1]
            vector = embed(summands[-rank_last:])[0]
            sq = over.square(vector)
            div = divisibility(vector, over)
            report.add(
                "fixed class",
                Outcome.of(sq == -2 and div == 2),
                f"square {sq}, divisibility {div}",
            )


def verify_row(
    catalog: Catalog,
    table_key: str,
    row: RowRecord | str,
    value: int,
    budget: int | None = None,
) -> RowReport:
    """Verify one row at one parameter value."""
    verifier = RowVerifier(catalog, table_key, budget)
    if isinstance(row, str):
        matches = [r for r in verifier.table.rows if r.id == row]
        if not matches:
            raise LatticeError(f"{table_key} has no row {row}")
        row = matches[0]
    return verifier.verify(row, value)


__all__ = ["RowVerifier", "best", "parameter_values", "row_values", "verify_row"]
