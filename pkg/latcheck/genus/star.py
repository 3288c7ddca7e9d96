"""
Comparison of the glue between an embedded ``D_k(2)`` and its complement
with a reference gluing.

The glue of a primitive sublattice ``D`` and its complement ``K`` inside an
ambient lattice ``M`` is the graph of a map ``γ: H -> A_K`` with ``H <= A_D``.
Two embeddings glue "the same way" when an isometry of ``A_D`` and an
isometry ``A_K -> A_C`` carry one graph onto the other.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from latcheck.constants import DEFAULT_BUDGET
from latcheck.errors import BudgetExceededError, LatticeError
from latcheck.genus.genus import same_genus
from latcheck.genus.gluing import glue_spec_from_map, iter_gluings
from latcheck.lattice.core import (
    EmbeddedSublattice,
    GlueSpec,
    Lattice,
    Overlattice,
    orthogonal_complement,
)
from latcheck.linalg.exact import (
    int_matrix,
    rational_inverse,
    solve_rational,
    to_rows,
)
from latcheck.torsion.isometry import Outcome, find_isometry, iter_isometries
from latcheck.torsion.module import TorsionQuadraticModule, discriminant_module

logger = logging.getLogger(__name__)

Coords = tuple[int, ...]


@dataclass
class GlueGraph:
    """Glue subgroup ``H <= A_D`` together with its map into the other side."""

    disc_d: TorsionQuadraticModule
    disc_other: TorsionQuadraticModule
    generators: list[tuple[Coords, Coords]]
    graph: dict[Coords, Coords] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if not self.graph:
            self.graph = _close(self.disc_d, self.disc_other, self.generators)

    @property
    def order(self) -> int:
        return len(self.graph)

    def group_factors(self) -> list[int]:
        gens = [list(x) for x, _ in self.generators if any(x)]
        if not gens:
            return []
        return sorted(self.disc_d.subquotient(gens).invariant_factors())


def _close(
    a: TorsionQuadraticModule,
    b: TorsionQuadraticModule,
    generators: Sequence[tuple[Coords, Coords]],
) -> dict[Coords, Coords]:
    """Subgroup of ``a ⊕ b`` spanned by ``generators`` as a map on the first factor."""
    zero = (tuple(0 for _ in a.orders), tuple(0 for _ in b.orders))
    members = {zero}
    frontier = [zero]
    gens = [(a.element(x).coords, b.element(y).coords) for x, y in generators]
    while frontier:
        following = []
        for x, y in frontier:
            for gx, gy in gens:
                s = (
                    tuple((u + v) % n for u, v, n in zip(x, gx, a.orders)),
                    tuple((u + v) % n for u, v, n in zip(y, gy, b.orders)),
                )
                if s not in members:
                    members.add(s)
                    following.append(s)
        frontier = following
    graph: dict[Coords, Coords] = {}
    for x, y in members:
        if x in graph and graph[x] != y:
            raise LatticeError("glue subgroup is not a graph: the first summand is not primitive")
        graph[x] = y
    return graph


def glue_graph_in_ambient(
    sub: EmbeddedSublattice,
    complement: EmbeddedSublattice | None = None,
) -> tuple[GlueGraph, Lattice, Lattice]:
    """
    Read the glue of ``sub`` and its complement off the ambient lattice.

    Every ambient basis vector is split over ``sub ⊕ complement``; its two
    projections are dual vectors whose classes form one glue pair.
    """
    complement = complement or orthogonal_complement(sub)
    k = sub.rank
    stacked = int_matrix(to_rows(sub.basis) + to_rows(complement.basis), sub.ambient.rank)
    inverse = rational_inverse(stacked)
    d_lattice = Lattice(sub.gram, label="D")
    k_lattice = Lattice(complement.gram, label="K")
    disc_d = discriminant_module(d_lattice)
    disc_k = discriminant_module(k_lattice)
    pairs = []
    for row in inverse.tolist():
        x = disc_d.element_from_dual_vector(row[:k]).coords
        y = disc_k.element_from_dual_vector(row[k:]).coords
        pairs.append((x, y))
    return GlueGraph(disc_d, disc_k, pairs), d_lattice, k_lattice


def glue_graph_of_spec(spec: GlueSpec) -> tuple[GlueGraph, Lattice, Lattice]:
    """Glue graph of a two-summand ``GlueSpec`` read from its overlattice basis."""
    if len(spec.summands) != 2:
        raise LatticeError("reference gluing needs exactly two summands")
    d_lattice, c_lattice = spec.summands
    k = d_lattice.rank
    disc_d = discriminant_module(d_lattice)
    disc_c = discriminant_module(c_lattice)
    basis = spec.overlattice().basis
    pairs = []
    for row in basis.tolist():
        x = disc_d.element_from_dual_vector(row[:k]).coords
        y = disc_c.element_from_dual_vector(row[k:]).coords
        pairs.append((x, y))
    return GlueGraph(disc_d, disc_c, pairs), d_lattice, c_lattice


def summand_embedding(spec: GlueSpec, index: int = 0) -> EmbeddedSublattice:
    """A summand of ``spec`` as a sublattice of its overlattice."""
    over: Overlattice = spec.overlattice()
    offset = sum(s.rank for s in spec.summands[:index])
    summand = spec.summands[index]
    n = spec.ambient.rank
    rows = [[int(offset + i == j) for j in range(n)] for i in range(summand.rank)]
    coords = solve_rational(over.basis, int_matrix(rows, n))
    if coords is None:
        raise LatticeError(f"summand {index} is not inside the overlattice")
    return EmbeddedSublattice(over, int_matrix(to_rows(coords), n))


def _apply(images: np.ndarray, x: Coords, orders: Sequence[int]) -> Coords:
    if not images.shape[0]:
        return tuple(0 for _ in orders)
    mapped = (np.asarray(x, dtype=np.int64) @ images) % np.array(orders, dtype=np.int64)
    return tuple(int(c) for c in mapped)


def _match(
    actual: GlueGraph,
    reference: GlueGraph,
    alphas: Iterable[np.ndarray | None],
    budget: int,
) -> Outcome:
    """Try each isometry ``alpha`` of ``A_D``; ``None`` stands for the identity."""
    keys = set(reference.graph)
    orders = actual.disc_d.orders
    sources = [x for x, _ in actual.generators]
    undecided = False
    # Isometries agreeing on the glue generators give the same prescription.
    tried: set[tuple[Coords, ...]] = set()
    for alpha in alphas:
        images = tuple(x if alpha is None else _apply(alpha, x, orders) for x in sources)
        if images in tried:
            continue
        tried.add(images)
        moved = {x: x if alpha is None else _apply(alpha, x, orders) for x in actual.graph}
        if set(moved.values()) != keys:
            continue
        prescribed = [(actual.graph[x], reference.graph[y]) for x, y in zip(sources, images)]
        try:
            beta = find_isometry(actual.disc_other, reference.disc_other, prescribed, budget=budget)
        except BudgetExceededError as exc:
            logger.warning("glue comparison undecided: %s", exc)
            undecided = True
            continue
        if beta is not None:
            return Outcome.PASS
    return Outcome.UNKNOWN if undecided else Outcome.FAIL


@dataclass
class StarReport:
    """Per-step outcome of a glue comparison."""

    outcome: Outcome
    steps: dict[str, Outcome]
    detail: str = ""


def check_star_condition(
    phi: EmbeddedSublattice,
    reference: GlueSpec,
    budget: int | None = None,
) -> StarReport:
    """
    Does ``phi`` glue to its complement as the first summand of ``reference``
    glues to the second?

    Steps: Gram of the image, glue group invariant factors, complement genus,
    then an isometry search intertwining the glue maps (identity on the
    ``D`` side first, then further isometries of ``A_D``).
    """
    limit = DEFAULT_BUDGET if budget is None else budget
    steps: dict[str, Outcome] = {}
    ref_graph, d_ref, c_ref = glue_graph_of_spec(reference)
    if not phi.primitive:
        return StarReport(Outcome.FAIL, {"primitive": Outcome.FAIL}, "image is not primitive")
    steps["gram"] = Outcome.of(to_rows(phi.gram) == to_rows(d_ref.gram))
    if steps["gram"] is Outcome.FAIL:
        return StarReport(Outcome.FAIL, steps, "image Gram differs from the reference summand")
    actual, _, k_lattice = glue_graph_in_ambient(phi)
    factors, ref_factors = actual.group_factors(), ref_graph.group_factors()
    steps["glue group"] = Outcome.of(factors == ref_factors)
    if steps["glue group"] is Outcome.FAIL:
        return StarReport(Outcome.FAIL, steps, f"glue group {factors} != {ref_factors}")
    steps["complement genus"] = same_genus(k_lattice, c_ref, limit)
    if steps["complement genus"] is not Outcome.PASS:
        return StarReport(steps["complement genus"], steps, "complement genus differs")

    first = _match(actual, ref_graph, [None], limit)
    outcome = first
    if first is not Outcome.PASS:
        try:
            rest = _match(actual, ref_graph, iter_isometries(actual.disc_d, actual.disc_d, budget=limit), limit)
        except BudgetExceededError as exc:
            logger.warning("isometries of %s not exhausted: %s", actual.disc_d.name, exc)
            rest = Outcome.UNKNOWN
        if rest is Outcome.PASS:
            outcome = Outcome.PASS
        elif Outcome.UNKNOWN in (first, rest):
            outcome = Outcome.UNKNOWN
        else:
            outcome = Outcome.FAIL
    steps["glue maps"] = outcome
    return StarReport(outcome, steps, f"glue group of order {actual.order} with factors {factors}")


def alternative_gluing(
    d: Lattice,
    c: Lattice,
    target: TorsionQuadraticModule,
    factors: Sequence[int],
    budget: int | None = None,
) -> GlueSpec | None:
    """
    A gluing of ``d`` and ``c`` with glue group of the given invariant factors
    whose overlattice has discriminant form ``target``, or ``None``.
    Raises ``BudgetExceededError`` when the search is cut short.
    """
    disc_d, disc_c = discriminant_module(d), discriminant_module(c)
    pairs = next(iter_gluings(disc_d, disc_c, target, factors, budget), None)
    return None if pairs is None else glue_spec_from_map(d, c, pairs)


__all__ = [
    "GlueGraph",
    "StarReport",
    "alternative_gluing",
    "check_star_condition",
    "glue_graph_in_ambient",
    "glue_graph_of_spec",
    "summand_embedding",
]
