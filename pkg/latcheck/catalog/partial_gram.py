"""
Completion of a partially known Gram matrix.

Generators are rational combinations of a known host basis and of auxiliary
vectors orthogonal to it whose mutual pairings are unknown. Requiring the
generators' Gram matrix to match a target (entries ``"*"`` are free) gives a
linear system in those pairings.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Optional

import sympy

from latcheck.catalog.loader import Catalog, linear_form
from latcheck.errors import CatalogError, LatticeError
from latcheck.genus.genus import same_genus
from latcheck.lattice.core import Lattice
from latcheck.linalg.exact import int_matrix
from latcheck.models import PartialGramRecord
from latcheck.torsion.isometry import Outcome

logger = logging.getLogger(__name__)

FREE = "*"


@dataclass
class PartialGramSolution:
    """Outcome of solving one system."""

    key: str
    consistent: bool
    unique: bool = False
    values: dict[str, Fraction] = field(default_factory=dict)
    gram: Optional[list[list[Fraction]]] = None
    equations: int = 0
    unknowns: int = 0

    @property
    def integral(self) -> bool:
        return self.gram is not None and all(x.denominator == 1 for row in self.gram for x in row)

    @property
    def even(self) -> bool:
        return self.integral and all(self.gram[i][i].numerator % 2 == 0 for i in range(len(self.gram)))  # type: ignore[index]

    def lattice(self) -> Lattice:
        if not self.even:
            raise LatticeError(f"{self.key}: completed Gram matrix is not even integral")
        rows = [[int(x) for x in row] for row in self.gram]  # type: ignore[union-attr]
        return Lattice(int_matrix(rows, len(rows)), label=f"{self.key} completion")


def _pair_symbol(a: str, b: str, symbols: dict[tuple[str, str], sympy.Symbol], order: list[str]) -> sympy.Symbol:
    i, j = sorted((order.index(a), order.index(b)))
    return symbols[(order[i], order[j])]


def solve_partial_gram(
    record: PartialGramRecord,
    host_names: list[str],
    host_gram: Any,
    target: list[list[Any]],
    key: str = "system",
) -> PartialGramSolution:
    """Solve for the pairings of the auxiliary vectors; see module docstring."""
    names = list(host_names) + list(record.unknowns)
    k = len(host_names)
    extra: dict[str, list[Fraction]] = {}
    for name, text in record.definitions.items():
        extra[name] = linear_form(text, names, extra=extra)
    rows = [linear_form(text, names, extra=extra) for text in record.generators]

    symbols = {}
    for i, a in enumerate(record.unknowns):
        for b in record.unknowns[i:]:
            symbols[(a, b)] = sympy.Symbol(f"{a}.{b}")
    fixed = {}
    for pair, value in record.fixed.items():
        a, b = (x.strip() for x in pair.split(","))
        if a not in record.unknowns or b not in record.unknowns:
            raise LatticeError(f"{key}: fixed pairing '{pair}' names an unknown vector")
        fixed[_pair_symbol(a, b, symbols, record.unknowns)] = value

    def known(u: list[Fraction], v: list[Fraction]) -> Fraction:
        total = Fraction(0)
        for i in range(k):
            if u[i]:
                for j in range(k):
                    if v[j] and host_gram[i, j]:
                        total += u[i] * v[j] * int(host_gram[i, j])
        return total

    def entry(u: list[Fraction], v: list[Fraction]) -> sympy.Expr:
        expr: sympy.Expr = sympy.Rational(known(u, v))
        for a_pos, a in enumerate(record.unknowns):
            ca = u[k + a_pos]
            if not ca:
                continue
            for b_pos, b in enumerate(record.unknowns):
                cb = v[k + b_pos]
                if cb:
                    expr += sympy.Rational(ca * cb) * _pair_symbol(a, b, symbols, record.unknowns)
        return expr.subs(fixed)

    n = len(rows)
    equations = []
    for i in range(n):
        for j in range(i, n):
            if target[i][j] == FREE:
                continue
            equations.append(sympy.Eq(entry(rows[i], rows[j]), int(target[i][j])))
    unknown_symbols = [s for s in symbols.values() if s not in fixed]
    solution = PartialGramSolution(key, consistent=False, equations=len(equations), unknowns=len(unknown_symbols))
    equations = [e for e in equations if e is not sympy.true]
    if any(e is sympy.false for e in equations):
        logger.info("%s: a fully known entry contradicts the target", key)
        return solution
    solved = sympy.linsolve(equations, unknown_symbols) if unknown_symbols else sympy.FiniteSet(())
    if solved == sympy.S.EmptySet or len(solved) == 0:
        logger.info("%s: system is inconsistent", key)
        return solution
    values = next(iter(solved))
    assignment = dict(zip(unknown_symbols, values))
    free = set().union(*(sympy.sympify(v).free_symbols for v in values)) if values else set()
    solution.consistent = True
    solution.unique = not free
    # Free parameters are set to zero so a representative Gram matrix can still be shown.
    assignment = {s: sympy.sympify(v).subs({f: 0 for f in free}) for s, v in assignment.items()}
    assignment.update(fixed)
    solution.values = {
        str(s): Fraction(int(sympy.Rational(v).p), int(sympy.Rational(v).q)) for s, v in assignment.items()
    }
    gram = []
    for i in range(n):
        row = []
        for j in range(n):
            value = sympy.Rational(entry(rows[i], rows[j]).subs(assignment))
            row.append(Fraction(int(value.p), int(value.q)))
        gram.append(row)
    solution.gram = gram
    logger.debug("%s: %d equations in %d unknowns, unique=%s", key, len(equations), len(unknown_symbols), solution.unique)
    return solution


def solve_catalog_system(catalog: Catalog, key: str) -> PartialGramSolution:
    record = catalog.partial_grams.get(key)
    if record is None:
        raise CatalogError(key, "no such partial Gram system")
    host = catalog.host(record.host)
    target = catalog.gram_targets[record.target]
    return solve_partial_gram(record, host.names, host.lattice.gram, target, key)


def completion_genus(catalog: Catalog, solution: PartialGramSolution, expected: str, budget: int | None = None) -> Outcome:
    """Does the completed Gram matrix lie in the genus of ``expected``?"""
    if not solution.consistent or not solution.even:
        return Outcome.FAIL
    try:
        lattice = solution.lattice()
    except LatticeError:
        return Outcome.FAIL
    return same_genus(lattice, catalog.recipe_lattice(expected), budget)


__all__ = ["PartialGramSolution", "completion_genus", "solve_catalog_system", "solve_partial_gram"]
