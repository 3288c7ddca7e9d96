"""
Search for primitive gluings ``a ⊕ b ⊂ M`` with ``M`` in a prescribed genus.

A gluing is an anti-isometry ``γ: H_a -> H_b`` between subgroups of the two
discriminant modules; the overlattice has discriminant form ``Γ^⊥/Γ`` where
``Γ`` is the graph of ``γ``. Everything splits over primes, so each primary
part is searched on its own.

``A_a/H_a`` is dual to ``H_a^⊥``, which embeds in ``Γ^⊥/Γ``; so ``H_a``
contains ``e·A_a`` for the exponent ``e`` of the target (same for ``b``).
The search builds ``Γ`` one generator pair at a time, placing those forced
elements first.
"""

from __future__ import annotations

import hashlib
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd, isqrt
from typing import Any, Iterator, Sequence

import numpy as np

from latcheck.constants import DEFAULT_BUDGET
from latcheck.errors import BudgetExceededError
from latcheck.genus.genus import GenusDescriptor, LatticeOrGenus, genus_of
from latcheck.lattice.core import GlueSpec, Lattice
from latcheck.torsion.isometry import Outcome, fqm_isomorphic
from latcheck.torsion.module import TorsionQuadraticModule

logger = logging.getLogger(__name__)

GluePair = tuple[tuple[int, ...], tuple[int, ...]]

# Decided prime-part searches, keyed by the three presentations.
_PRIME_CACHE: dict[tuple[Any, ...], tuple[Outcome, list[GluePair]]] = {}


@dataclass
class GlueResult:
    """Outcome of a glue search plus the witness when one was found."""

    outcome: Outcome
    glue_map: list[GluePair] = field(default_factory=list)
    spec: GlueSpec | None = None
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.PASS


class _Counter:
    def __init__(self, budget: int) -> None:
        self.budget = budget
        self.used = 0

    def tick(self, what: str) -> None:
        self.used += 1
        if self.used > self.budget:
            raise BudgetExceededError(what, self.budget)

    @property
    def remaining(self) -> int:
        return max(self.budget - self.used, 1)


def _presentation(module: TorsionQuadraticModule) -> tuple[Any, ...]:
    return module.orders, module.q_values, module.b_values


class _GlueSearch:
    """Depth-first enumeration of isotropic graphs ``Γ ⊂ a ⊕ b`` of order ``h``."""

    def __init__(
        self,
        a: TorsionQuadraticModule,
        b: TorsionQuadraticModule,
        h: int,
        exponent: int,
        counter: _Counter,
        factors: Sequence[int] | None = None,
    ) -> None:
        self.a, self.b, self.h = a, b, h
        self.counter = counter
        self.factors = sorted(factors) if factors is not None else None
        self.scale = a.exponent * b.exponent // gcd(a.exponent, b.exponent)
        self.orders = np.array(a.orders + b.orders, dtype=np.int64)
        self.qa = a.scaled_q_of(a.elements, self.scale)
        self.qb = b.scaled_q_of(b.elements, self.scale)
        self.need_a = _requirements(a, exponent)
        self.need_b = _requirements(b, exponent)
        self.seen: set[bytes] = set()

    def graphs(self) -> Iterator[list[GluePair]]:
        empty = np.zeros((1, self.a.rank + self.b.rank), dtype=np.int64)
        yield from self._search([], empty, [])

    # -- state helpers ---------------------------------------------------

    def _split(self, members: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        ra = self.a.rank
        ia = members[:, :ra] @ self.a.strides if ra else np.zeros(len(members), dtype=np.int64)
        ib = members[:, ra:] @ self.b.strides if self.b.rank else np.zeros(len(members), dtype=np.int64)
        return ia, ib

    def _extend(self, members: np.ndarray, ia: int, ib: int) -> np.ndarray | None:
        self.counter.tick(f"glue graphs {self.a.name} -> {self.b.name}")
        g = np.concatenate([self.a.elements[ia], self.b.elements[ib]])
        n = int(self.a.element_orders[ia])
        grown = (members[:, None, :] + np.arange(n)[None, :, None] * g) % self.orders
        grown = np.unique(grown.reshape(-1, len(self.orders)), axis=0)
        size = len(grown)
        if size > self.h or self.h % size:
            return None
        pa, pb = self._split(grown)
        if len(np.unique(pa)) != size or len(np.unique(pb)) != size:
            return None
        key = hashlib.blake2b(np.sort(pa * self.b.order + pb).tobytes(), digest_size=16).digest()
        if key in self.seen:
            return None
        self.seen.add(key)
        return grown

    def _images(self, x: int, rows: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
        """Elements of ``b`` that may pair with ``a``-element ``x``."""
        e = self.scale
        mask = (self.b.element_orders == self.a.element_orders[x]) & ((self.qb + self.qa[x]) % (2 * e) == 0)
        for ba, bb in rows:
            mask &= (bb + ba[x]) % e == 0
        return np.flatnonzero(mask)

    def _preimages(self, y: int, rows: list[tuple[np.ndarray, np.ndarray]]) -> np.ndarray:
        e = self.scale
        mask = (self.a.element_orders == self.b.element_orders[y]) & ((self.qa + self.qb[y]) % (2 * e) == 0)
        for ba, bb in rows:
            mask &= (ba + bb[y]) % e == 0
        return np.flatnonzero(mask)

    def _free(self, members: np.ndarray) -> np.ndarray:
        """One representative per coset of ``H_a`` whose order fits in ``h/|Γ|``."""
        a = self.a
        room = self.h // len(members)
        ha = members[:, : a.rank]
        held = np.unique(ha @ a.strides)
        orders_a = np.array(a.orders, dtype=np.int64)
        fits = np.isin(((room * a.elements) % orders_a) @ a.strides, held)
        first = np.arange(a.order)
        for shift in ha:
            first = np.minimum(first, ((a.elements + shift) % orders_a) @ a.strides)
        rep = first == np.arange(a.order)
        rep[held] = False
        return np.flatnonzero(rep & fits)

    # -- search ------------------------------------------------------------

    def _search(
        self,
        gens: list[GluePair],
        members: np.ndarray,
        rows: list[tuple[np.ndarray, np.ndarray]],
    ) -> Iterator[list[GluePair]]:
        if len(members) == self.h:
            if self._factors_hold(gens):
                yield list(gens)
            return
        pa, pb = self._split(members)
        held_a, held_b = set(pa.tolist()), set(pb.tolist())
        missing_a = [x for x in self.need_a if x not in held_a]
        missing_b = [y for y in self.need_b if y not in held_b]
        if missing_a:
            x = missing_a[0]
            steps = [(x, int(y)) for y in self._images(x, rows)]
        elif missing_b:
            y = missing_b[0]
            steps = [(int(x), y) for x in self._preimages(y, rows)]
        else:
            steps = [(int(x), int(y)) for x in self._free(members) for y in self._images(int(x), rows)]
        for x, y in steps:
            grown = self._extend(members, x, y)
            if grown is None:
                continue
            pair = (tuple(int(c) for c in self.a.elements[x]), tuple(int(c) for c in self.b.elements[y]))
            row = (self.a.scaled_b_with(pair[0], self.scale), self.b.scaled_b_with(pair[1], self.scale))
            yield from self._search(gens + [pair], grown, rows + [row])

    def _factors_hold(self, gens: list[GluePair]) -> bool:
        if self.factors is None:
            return True
        xs = [list(x) for x, _ in gens]
        found = sorted(self.a.subquotient(xs).invariant_factors()) if xs else []
        return found == self.factors


def _requirements(module: TorsionQuadraticModule, exponent: int) -> list[int]:
    """Indices of ``exponent·g_i`` for generators not killed by ``exponent``."""
    needed = []
    for i, n in enumerate(module.orders):
        if exponent % n:
            g = [0] * module.rank
            g[i] = exponent
            needed.append(module.index_of(g))
    return sorted(set(needed))


def _to_parent(part: TorsionQuadraticModule, rows: np.ndarray, parent: TorsionQuadraticModule) -> list[tuple[int, ...]]:
    """Map coordinates in ``part`` back through its embedding."""
    if part.embedding is None:
        return [tuple(int(x) for x in row) for row in rows]
    mapped = (np.asarray(rows, dtype=np.int64) @ part.embedding) % np.array(parent.orders, dtype=np.int64)
    return [tuple(int(x) for x in row) for row in mapped]


def _glue_order(a: TorsionQuadraticModule, b: TorsionQuadraticModule, target: TorsionQuadraticModule) -> int | None:
    square, rest = divmod(a.order * b.order, max(target.order, 1))
    h = isqrt(square)
    if rest or h * h != square:
        return None
    return h


def _matching_graphs(
    a: TorsionQuadraticModule,
    b: TorsionQuadraticModule,
    target: TorsionQuadraticModule,
    counter: _Counter,
    budget: int | None,
    factors: Sequence[int] | None = None,
) -> Iterator[tuple[Outcome, list[GluePair]]]:
    """Every candidate graph with the outcome of its ``Γ^⊥/Γ ≅ target`` test."""
    h = _glue_order(a, b, target)
    if h is None:
        return
    both = a.direct_sum(b)
    search = _GlueSearch(a, b, h, target.exponent, counter, factors)
    for pairs in search.graphs():
        gamma = [list(x) + list(y) for x, y in pairs]
        quotient = both.subquotient(both.orthogonal(gamma), gamma)
        yield fqm_isomorphic(quotient, target, budget), pairs


def _glue_prime(
    a: TorsionQuadraticModule,
    b: TorsionQuadraticModule,
    target: TorsionQuadraticModule,
    counter: _Counter,
    budget: int | None,
) -> tuple[Outcome, list[GluePair]]:
    key = (_presentation(a), _presentation(b), _presentation(target))
    if key in _PRIME_CACHE:
        return _PRIME_CACHE[key]
    undecided = False
    result: tuple[Outcome, list[GluePair]] | None = None
    for outcome, pairs in _matching_graphs(a, b, target, counter, budget):
        if outcome is Outcome.PASS:
            result = (Outcome.PASS, pairs)
            break
        undecided = undecided or outcome is Outcome.UNKNOWN
    if result is None:
        result = (Outcome.UNKNOWN if undecided else Outcome.FAIL), []
    if result[0] is not Outcome.UNKNOWN:
        _PRIME_CACHE[key] = result
    return result


def exists_glue_to_genus(
    a: LatticeOrGenus,
    b: LatticeOrGenus,
    target: LatticeOrGenus,
    budget: int | None = None,
) -> GlueResult:
    """Is there a primitive gluing of ``a`` and ``b`` in the genus ``target``?"""
    ga, gb, gt = genus_of(a), genus_of(b), genus_of(target)
    pos = ga.signature[0] + gb.signature[0]
    neg = ga.signature[1] + gb.signature[1]
    if (pos, neg) != gt.signature:
        return GlueResult(Outcome.FAIL, detail=f"signature ({pos}, {neg}) != {gt.signature}")
    counter = _Counter(DEFAULT_BUDGET if budget is None else budget)
    primes = sorted(set(ga.disc.primes()) | set(gb.disc.primes()) | set(gt.disc.primes()))
    glue_map: list[GluePair] = []
    outcomes = []
    try:
        for p in primes:
            ap, bp, tp = (g.disc.primary_part(p) for g in (ga, gb, gt))
            outcome, pairs = _glue_prime(ap, bp, tp, counter, budget)
            outcomes.append(outcome)
            if outcome is Outcome.FAIL:
                return GlueResult(Outcome.FAIL, detail=f"no gluing at p={p}")
            glue_map += [
                (_to_parent(ap, np.array([x]), ga.disc)[0], _to_parent(bp, np.array([y]), gb.disc)[0])
                for x, y in pairs
            ]
    except BudgetExceededError as exc:
        logger.warning("glue search undecided: %s", exc)
        return GlueResult(Outcome.UNKNOWN, detail=str(exc))
    outcome = Outcome.combine(outcomes)
    if outcome is not Outcome.PASS:
        return GlueResult(outcome, detail="isomorphism test undecided")
    logger.debug("glue found after %d search nodes", counter.used)
    spec = None
    if isinstance(a, Lattice) and isinstance(b, Lattice):
        spec = _glue_spec(a, b, ga.disc, gb.disc, glue_map)
    return GlueResult(Outcome.PASS, glue_map=glue_map, spec=spec, detail=f"{len(glue_map)} glue generators")


def iter_gluings(
    a: TorsionQuadraticModule,
    b: TorsionQuadraticModule,
    target: TorsionQuadraticModule,
    factors: Sequence[int] | None = None,
    budget: int | None = None,
) -> Iterator[list[GluePair]]:
    """
    Glue maps (generator pairs of ``Γ``) with ``Γ^⊥/Γ ≅ target``, optionally
    restricted to glue groups with the given invariant factors.
    Raises ``BudgetExceededError`` once ``budget`` search nodes are used.
    """
    counter = _Counter(DEFAULT_BUDGET if budget is None else budget)
    for outcome, pairs in _matching_graphs(a, b, target, counter, budget, factors):
        if outcome is Outcome.PASS:
            yield pairs


def _glue_spec(
    a: Lattice,
    b: Lattice,
    disc_a: TorsionQuadraticModule,
    disc_b: TorsionQuadraticModule,
    glue_map: list[GluePair],
) -> GlueSpec:
    vectors = []
    for x, y in glue_map:
        vector = disc_a.lift(x) + disc_b.lift(y)
        if any(Fraction(c).denominator != 1 for c in vector):
            vectors.append(vector)
    return GlueSpec([a, b], vectors)


def glue_spec_from_map(a: Lattice, b: Lattice, glue_map: list[GluePair]) -> GlueSpec:
    """Glue vectors of ``a ⊕ b`` lifting the graph of ``glue_map``."""
    return _glue_spec(a, b, genus_of(a).disc, genus_of(b).disc, glue_map)


__all__ = [
    "GenusDescriptor",
    "GlueResult",
    "exists_glue_to_genus",
    "glue_spec_from_map",
    "iter_gluings",
]
