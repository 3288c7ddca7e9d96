"""
Lattice recipes used in table cells.

Grammar::

    sum    := term ("+" term)*
    term   := atom postfix*
    atom   := NAME | "<" expr ">" | "(" sum ")"
    postfix:= "(" expr ")" | "^" INT | "'" | "*"

``(n)`` rescales, ``^k`` repeats, ``<expr>`` is a rank-one lattice. A prime
``'`` (star ``*``) glues the summands of the preceding group along an
isotropic element of order 2 (order 4) with nonzero components in every
summand. Expressions are evaluated with sympy in the row parameters.
"""

from __future__ import annotations

import itertools
import logging
import re
from dataclasses import dataclass, field
from typing import Callable, Mapping, Sequence, Union

import numpy as np
import sympy

from latcheck.constants import MAX_GROUP_ORDER
from latcheck.errors import BudgetExceededError, CatalogError, LatticeError
from latcheck.genus.genus import GenusDescriptor, genus_of, same_genus
from latcheck.lattice.core import GlueSpec, Lattice, direct_sum, rescale
from latcheck.linalg.exact import (
    IntMatrix,
    block_diagonal,
    identity,
    int_matrix,
    solve_rational,
    to_rows,
)
from latcheck.torsion.isometry import Outcome, value_fingerprint
from latcheck.torsion.module import TorsionQuadraticModule, discriminant_module, elements_with

logger = logging.getLogger(__name__)

Values = Mapping[str, int]


def evaluate_int(text: str | int, values: Values | None = None, what: str = "expression") -> int:
    """Integer value of a sympy expression in the given parameters."""
    if isinstance(text, int):
        return text
    values = dict(values or {})
    symbols = {name: sympy.Symbol(name) for name in values}
    try:
        expr = sympy.sympify(str(text), locals=symbols)
    except (sympy.SympifyError, SyntaxError, TypeError) as exc:
        raise LatticeError(f"cannot parse {what} '{text}': {exc}") from exc
    result = expr.subs({symbols[k]: v for k, v in values.items()})
    if result.free_symbols:
        missing = ", ".join(sorted(str(s) for s in result.free_symbols))
        raise LatticeError(f"{what} '{text}' needs values for {missing}")
    if not result.is_integer:
        raise LatticeError(f"{what} '{text}' is not an integer at {values}: {result}")
    return int(result)


# -- syntax tree ---------------------------------------------------------


@dataclass
class Name:
    name: str


@dataclass
class RankOne:
    expr: str


@dataclass
class Group:
    terms: list["Node"]


@dataclass
class Scaled:
    node: "Node"
    factor: str


@dataclass
class Repeated:
    node: "Node"
    count: int


@dataclass
class Glued:
    group: Group
    order: int


Node = Union[Name, RankOne, Group, Scaled, Repeated, Glued]


class _Parser:
    def __init__(self, text: str) -> None:
        self.text = text
        self.pos = 0

    def fail(self, message: str) -> LatticeError:
        return LatticeError(f"recipe '{self.text}' at {self.pos}: {message}")

    def peek(self) -> str:
        rest = self.text[self.pos :].lstrip()
        return rest[:1]

    def skip(self) -> None:
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def expect(self, char: str) -> None:
        self.skip()
        if self.text[self.pos : self.pos + 1] != char:
            raise self.fail(f"expected '{char}'")
        self.pos += 1

    def until(self, closing: str) -> str:
        """Raw text up to the matching ``closing`` bracket."""
        opening = {">": "<", ")": "("}[closing]
        depth = 0
        start = self.pos
        while self.pos < len(self.text):
            c = self.text[self.pos]
            if c == opening and closing == ")":
                depth += 1
            elif c == closing:
                if depth == 0:
                    chunk = self.text[start : self.pos]
                    self.pos += 1
                    return chunk.strip()
                depth -= 1
            self.pos += 1
        raise self.fail(f"unbalanced '{opening}'")

    def parse(self) -> Group:
        group = self.sum()
        self.skip()
        if self.pos != len(self.text):
            raise self.fail("trailing characters")
        return group

    def sum(self) -> Group:
        terms = [self.term()]
        while self.peek() == "+":
            self.expect("+")
            terms.append(self.term())
        return Group(terms)

    def term(self) -> Node:
        node = self.atom()
        while True:
            c = self.peek()
            if c == "(":
                self.expect("(")
                node = Scaled(node, self.until(")"))
            elif c == "^":
                self.expect("^")
                self.skip()
                m = re.match(r"\d+", self.text[self.pos :])
                if not m:
                    raise self.fail("expected a repeat count")
                self.pos += m.end()
                node = Repeated(node, int(m.group()))
            elif c in ("'", "*"):
                self.expect(c)
                if not isinstance(node, Group):
                    raise self.fail("a gluing mark must follow a parenthesized sum")
                node = Glued(node, 2 if c == "'" else 4)
            else:
                return node

    def atom(self) -> Node:
        self.skip()
        c = self.text[self.pos : self.pos + 1]
        if c == "<":
            self.pos += 1
            return RankOne(self.until(">"))
        if c == "(":
            self.pos += 1
            group = self.sum()
            self.expect(")")
            return group
        m = re.match(r"[A-Za-z][A-Za-z0-9_]*", self.text[self.pos :])
        if not m:
            raise self.fail("expected a name, '<' or '('")
        self.pos += m.end()
        return Name(m.group())


def parse_recipe(text: str) -> Group:
    """Syntax tree of a recipe; raises ``LatticeError`` on malformed text."""
    return _Parser(text).parse()


# -- evaluation ----------------------------------------------------------


@dataclass(eq=False)
class Candidate:
    """
    One lattice (or genus) a recipe may denote.

    ``parts`` lists the atomic summands; ``summand_coords`` holds the basis
    of their direct sum in the coordinates of ``lattice``.
    """

    genus: GenusDescriptor
    lattice: Lattice | None = None
    parts: list[tuple[str, int]] = field(default_factory=list)
    summand_coords: IntMatrix | None = None
    index: int = 1

    @property
    def label(self) -> str:
        return self.genus.name

    @property
    def rank(self) -> int:
        return self.genus.rank

    def part_offset(self, position: int) -> int:
        return sum(rank for _, rank in self.parts[:position])

    @classmethod
    def of_lattice(cls, lattice: Lattice, label: str | None = None) -> "Candidate":
        label = label or lattice.name
        named = Lattice(lattice.gram, label=label)
        return cls(
            genus_of(named),
            named,
            [(label, lattice.rank)],
            identity(lattice.rank),
        )


Resolver = Callable[[str, Values], Union[Lattice, GenusDescriptor, "list[Candidate]"]]


def _genus_sum(parts: Sequence[Candidate], label: str) -> GenusDescriptor:
    disc = TorsionQuadraticModule.trivial()
    pos = neg = 0
    for part in parts:
        disc = disc.direct_sum(part.genus.disc)
        pos += part.genus.signature[0]
        neg += part.genus.signature[1]
    return GenusDescriptor((pos, neg), disc, label=label)


def combine(parts: Sequence[Candidate], label: str | None = None) -> Candidate:
    """Direct sum of candidates, lattice-level when every part is."""
    label = label or " + ".join(p.label for p in parts)
    flat = [x for p in parts for x in p.parts]
    if all(p.lattice is not None for p in parts):
        lattice = direct_sum([p.lattice for p in parts], label=label)  # type: ignore[misc]
        coords = block_diagonal([p.summand_coords for p in parts])  # type: ignore[misc]
        index = 1
        for p in parts:
            index *= p.index
        return Candidate(genus_of(lattice), lattice, flat, coords, index)
    return Candidate(_genus_sum(parts, label), None, flat)


class RecipeEvaluator:
    """Evaluates recipe trees against a name resolver."""

    def __init__(self, resolve: Resolver, budget: int | None = None) -> None:
        self.resolve = resolve
        self.budget = MAX_GROUP_ORDER if budget is None else budget

    def evaluate(self, text: str, values: Values | None = None) -> list[Candidate]:
        tree = parse_recipe(text)
        values = dict(values or {})
        candidates = self._group(tree, values, label=text.strip())
        return _dedupe(candidates, self.budget)

    def _node(self, node: Node, values: Values) -> list[Candidate]:
        if isinstance(node, Name):
            found = self.resolve(node.name, values)
            if isinstance(found, list):
                return found
            if isinstance(found, GenusDescriptor):
                return [Candidate(found, None, [(node.name, found.rank)])]
            return [Candidate.of_lattice(found, node.name)]
        if isinstance(node, RankOne):
            n = evaluate_int(node.expr, values, "rank-one entry")
            return [Candidate.of_lattice(Lattice([[n]]), f"<{n}>")]
        if isinstance(node, Group):
            return self._group(node, values)
        if isinstance(node, Scaled):
            factor = evaluate_int(node.factor, values, "scale factor")
            out = []
            for c in self._node(node.node, values):
                if c.lattice is None:
                    raise LatticeError(f"{c.label} is known only by its genus and cannot be rescaled")
                label = f"{c.label}({factor})" if len(c.parts) == 1 else f"({c.label})({factor})"
                scaled = rescale(c.lattice, factor, label=label)
                out.append(Candidate(genus_of(scaled), scaled, [(label, scaled.rank)], identity(scaled.rank)))
            return out
        if isinstance(node, Repeated):
            if node.count < 1:
                raise LatticeError("repeat count must be positive")
            options = self._node(node.node, values)
            return [combine([c] * node.count) for c in options]
        if isinstance(node, Glued):
            return self._glued(node, values)
        raise LatticeError(f"unexpected recipe node {node!r}")

    def _group(self, group: Group, values: Values, label: str | None = None) -> list[Candidate]:
        options = [self._node(t, values) for t in group.terms]
        out = []
        for combo in itertools.product(*options):
            out.append(combo[0] if len(combo) == 1 and label is None else combine(combo, label))
        return out

    def _glued(self, node: Glued, values: Values) -> list[Candidate]:
        options = [self._node(t, values) for t in node.group.terms]
        mark = "'" if node.order == 2 else "*"
        out: list[Candidate] = []
        for combo in itertools.product(*options):
            inner = " + ".join(c.label for c in combo)
            out.extend(glue_candidates(list(combo), node.order, f"({inner}){mark}", self.budget))
        if not out:
            logger.info("no isotropic element of order %d glues %s", node.order, node.group)
        return _dedupe(out, self.budget)


def isotropic_glue_elements(
    discs: Sequence[TorsionQuadraticModule],
    order: int,
    budget: int | None = None,
) -> list[tuple[int, ...]]:
    """
    Isotropic elements of the given prime-power order in ``⊕ discs`` with a
    nonzero component in every summand.
    """
    total = TorsionQuadraticModule.trivial()
    for d in discs:
        total = total.direct_sum(d)
    p = int(sympy.primefactors(order)[0])
    part = total.primary_part(p)
    if part.rank == 0:
        return []
    found = elements_with(part, order, 0, budget)
    embedding = np.asarray(part.embedding, dtype=np.int64)
    orders = np.array(total.orders, dtype=np.int64)
    bounds = np.cumsum([0] + [d.rank for d in discs])
    out = []
    for x in found:
        coords = (np.asarray(x.coords, dtype=np.int64) @ embedding) % orders
        if all(coords[bounds[i] : bounds[i + 1]].any() for i in range(len(discs))):
            out.append(tuple(int(c) for c in coords))
    return out


def glue_candidates(
    parts: list[Candidate],
    order: int,
    label: str,
    budget: int | None = None,
) -> list[Candidate]:
    """Every overlattice of ``⊕ parts`` glued along one admissible element."""
    lattice_level = all(p.lattice is not None for p in parts)
    discs = [discriminant_module(p.lattice) if p.lattice is not None else p.genus.disc for p in parts]
    bounds = np.cumsum([0] + [d.rank for d in discs])
    total = TorsionQuadraticModule.trivial()
    for d in discs:
        total = total.direct_sum(d)
    base = combine(parts)
    out = []
    for x in isotropic_glue_elements(discs, order, budget):
        quotient = total.subquotient(total.orthogonal([x]), [x])
        pos, neg = base.genus.signature
        genus = GenusDescriptor((pos, neg), quotient, label=label)
        if not lattice_level:
            out.append(Candidate(genus, None, base.parts, index=base.index * order))
            continue
        vector = []
        for i, d in enumerate(discs):
            vector.extend(d.lift(x[bounds[i] : bounds[i + 1]]))
        spec = GlueSpec([p.lattice for p in parts], [vector], label=label)  # type: ignore[misc]
        over = spec.overlattice()
        coords = solve_rational(over.basis, base.summand_coords)  # type: ignore[arg-type]
        if coords is None:
            raise LatticeError(f"{label}: direct sum is not inside its overlattice")
        out.append(
            Candidate(genus, over, base.parts, int_matrix(to_rows(coords)), base.index * over.index)
        )
    return out


def _genus_key(genus: GenusDescriptor) -> tuple:
    try:
        return (genus.signature, value_fingerprint(genus.disc))
    except BudgetExceededError:
        return (genus.signature, tuple(genus.disc.invariant_factors()))


def _dedupe(candidates: list[Candidate], budget: int) -> list[Candidate]:
    """Keep one candidate per genus."""
    kept: list[Candidate] = []
    seen: dict[tuple, list[Candidate]] = {}
    for c in candidates:
        key = _genus_key(c.genus)
        bucket = seen.setdefault(key, [])
        duplicate = False
        for other in bucket:
            try:
                if same_genus(c.genus, other.genus, budget) is Outcome.PASS:
                    duplicate = True
                    break
            except BudgetExceededError:
                continue
        if not duplicate:
            bucket.append(c)
            kept.append(c)
    return kept


def family_gram(gram: Sequence[Sequence[int | str]], values: Values) -> list[list[int]]:
    return [[evaluate_int(x, values, "family entry") for x in row] for row in gram]


def bordered(rows: list[list[int]], corner: int) -> list[list[int]]:
    """Add a first generator of square ``corner`` pairing 2 with the old first one."""
    n = len(rows)
    out = [[corner, 2] + [0] * (n - 1)]
    for i, row in enumerate(rows):
        out.append([2 if i == 0 else 0] + list(row))
    return out


def single_lattice(candidates: list[Candidate], text: str) -> Lattice:
    if len(candidates) != 1 or candidates[0].lattice is None:
        raise CatalogError(text, f"recipe denotes {len(candidates)} candidates, expected one lattice")
    return candidates[0].lattice


__all__ = [
    "Candidate",
    "RecipeEvaluator",
    "bordered",
    "combine",
    "evaluate_int",
    "family_gram",
    "glue_candidates",
    "isotropic_glue_elements",
    "parse_recipe",
    "single_lattice",
]
