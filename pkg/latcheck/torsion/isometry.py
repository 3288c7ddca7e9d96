"""Isometry search between finite quadratic modules."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from math import gcd
from typing import Iterable, Iterator, Sequence

import numpy as np
import sympy

from latcheck.constants import DEFAULT_BUDGET
from latcheck.errors import BudgetExceededError, DegenerateFormError
from latcheck.torsion.module import FqmElement, TorsionQuadraticModule, milgram_signature

logger = logging.getLogger(__name__)

Pair = tuple[Sequence[int], Sequence[int]]


class Outcome(str, Enum):
    """Result of a check that may run out of budget."""

    PASS = "pass"
    FAIL = "fail"
    UNKNOWN = "unknown"

    @classmethod
    def of(cls, ok: bool) -> "Outcome":
        return cls.PASS if ok else cls.FAIL

    @classmethod
    def combine(cls, outcomes: Iterable["Outcome"]) -> "Outcome":
        seen = set(outcomes)
        if cls.FAIL in seen:
            return cls.FAIL
        if cls.UNKNOWN in seen:
            return cls.UNKNOWN
        return cls.PASS


def _coords(x: FqmElement | Sequence[int]) -> tuple[int, ...]:
    return x.coords if isinstance(x, FqmElement) else tuple(int(c) for c in x)


def iter_isometries(
    source: TorsionQuadraticModule,
    target: TorsionQuadraticModule,
    prescribed: Sequence[Pair] = (),
    budget: int | None = None,
    injective: bool | None = None,
) -> Iterator[np.ndarray]:
    """
    Yield maps ``source -> target`` preserving orders, q and b, as arrays whose
    row ``i`` is the image of generator ``i``.

    Generators are assigned in decreasing order, those supporting a prescribed
    element first. For nondegenerate sources every such map is injective; for
    degenerate ones injectivity is checked on the whole source.
    Raises ``BudgetExceededError`` after ``budget`` candidate images.
    """
    limit = DEFAULT_BUDGET if budget is None else budget
    r = source.rank
    if injective is None:
        injective = source.is_degenerate
    if r == 0:
        yield np.zeros((0, target.rank), dtype=np.int64)
        return
    e = source.exponent * target.exponent // gcd(source.exponent, target.exponent)
    qa, ba = source.scaled_forms(e)
    elems = target.elements
    qb = target.scaled_q_of(elems, e)
    _, bsb = target.scaled_forms(e)
    orders_b = np.array(target.orders, dtype=np.int64)

    pairs = [(_coords(x), _coords(y)) for x, y in prescribed]
    support = {i for x, _ in pairs for i, c in enumerate(x) if c % source.orders[i]}
    order = sorted(range(r), key=lambda i: (i not in support, -source.orders[i], i))
    position = {g: k for k, g in enumerate(order)}
    # A prescribed pair is checked once its last supporting generator is placed.
    checks: dict[int, list[tuple[tuple[int, ...], tuple[int, ...]]]] = {}
    for x, y in pairs:
        used = [position[i] for i, c in enumerate(x) if c % source.orders[i]]
        checks.setdefault(max(used) if used else -1, []).append((x, y))
    if any(any(c % n for c, n in zip(y, target.orders)) for _, y in checks.get(-1, [])):
        return

    base = {i: (target.element_orders == source.orders[i]) & (qb == qa[i]) for i in range(r)}
    images = np.zeros((r, target.rank), dtype=np.int64)
    brows: dict[int, np.ndarray] = {}
    counter = 0
    source_elems = source.elements if injective else None

    def pairs_hold(k: int) -> bool:
        for x, y in checks.get(k, []):
            image = (np.asarray(x, dtype=np.int64) @ images) % orders_b
            if tuple(int(c) for c in image) != tuple(c % n for c, n in zip(y, target.orders)):
                return False
        return True

    def is_injective() -> bool:
        mapped = (source_elems @ images) % orders_b
        return len(np.unique(mapped @ target.strides)) == source.order

    def search(k: int) -> Iterator[np.ndarray]:
        nonlocal counter
        if k == r:
            if not injective or is_injective():
                yield images.copy()
            return
        i = order[k]
        mask = base[i].copy()
        for j in order[:k]:
            mask &= brows[j] == ba[i, j]
        for idx in np.flatnonzero(mask):
            counter += 1
            if counter > limit:
                raise BudgetExceededError(
                    f"isometry search {source.name} -> {target.name}", limit
                )
            images[i] = elems[idx]
            brows[i] = (elems @ (bsb @ elems[idx])) % e
            if pairs_hold(k):
                yield from search(k + 1)
        images[i] = 0
        brows.pop(i, None)

    yield from search(0)


def find_isometry(
    source: TorsionQuadraticModule,
    target: TorsionQuadraticModule,
    prescribed: Sequence[Pair] = (),
    budget: int | None = None,
) -> np.ndarray | None:
    return next(iter_isometries(source, target, prescribed, budget), None)


def value_fingerprint(module: TorsionQuadraticModule) -> tuple[tuple[int, Fraction, int], ...]:
    """Multiset of (element order, q value) pairs."""
    e = module.exponent
    keys = module.element_orders * (2 * e) + module.element_q
    values, counts = np.unique(keys, return_counts=True)
    return tuple(
        (int(v) // (2 * e), Fraction(int(v) % (2 * e), e), int(c)) for v, c in zip(values, counts)
    )


def fqm_isomorphic(
    a: TorsionQuadraticModule,
    b: TorsionQuadraticModule,
    budget: int | None = None,
) -> Outcome:
    """Decide ``a ≅ b`` by invariant pre-filters and a per-prime generator search."""
    if a.is_degenerate or b.is_degenerate:
        raise DegenerateFormError("isomorphism testing needs nondegenerate modules")
    if a.order != b.order or a.invariant_factors() != b.invariant_factors():
        return Outcome.FAIL
    if a.order == 1:
        return Outcome.PASS
    try:
        if milgram_signature(a) != milgram_signature(b):
            return Outcome.FAIL
        parts = [(a.primary_part(p), b.primary_part(p)) for p in a.primes()]
        for ap, bp in parts:
            if value_fingerprint(ap) != value_fingerprint(bp):
                return Outcome.FAIL
        for ap, bp in parts:
            # p-elementary forms are classified by their value counts.
            if sympy.isprime(ap.exponent):
                continue
            if find_isometry(ap, bp, budget=budget) is None:
                return Outcome.FAIL
    except BudgetExceededError as exc:
        logger.warning("isomorphism test undecided: %s", exc)
        return Outcome.UNKNOWN
    return Outcome.PASS


@dataclass
class OrbitPartition:
    """Orbits of the isometry group on a list of elements."""

    orbits: list[list[FqmElement]] = field(default_factory=list)
    unresolved: list[FqmElement] = field(default_factory=list)

    @property
    def outcome(self) -> Outcome:
        return Outcome.UNKNOWN if self.unresolved else Outcome.PASS

    def orbit_of(self, x: FqmElement) -> int:
        for k, orbit in enumerate(self.orbits):
            if x in orbit:
                return k
        raise KeyError(str(x))


def same_orbit(
    module: TorsionQuadraticModule,
    x: FqmElement,
    y: FqmElement,
    budget: int | None = None,
    split: bool = True,
) -> Outcome:
    """
    Is there an isometry of ``module`` sending ``x`` to ``y``?

    With ``split`` an element generating an orthogonal summand is decided by
    comparing complements; otherwise the isometry itself is searched for.
    """
    if x == y:
        return Outcome.PASS
    n = module.element_order(x)
    if n != module.element_order(y) or module.q(x) != module.q(y):
        return Outcome.FAIL
    if split and module.b(x, x).denominator == n:
        # <x> splits off orthogonally; compare the complements.
        xp = module.subquotient(module.orthogonal([x.coords]))
        yp = module.subquotient(module.orthogonal([y.coords]))
        return fqm_isomorphic(xp, yp, budget)
    try:
        found = find_isometry(module, module, prescribed=[(x.coords, y.coords)], budget=budget)
    except BudgetExceededError as exc:
        logger.warning("orbit test undecided: %s", exc)
        return Outcome.UNKNOWN
    return Outcome.of(found is not None)


def fqm_orbits(
    module: TorsionQuadraticModule,
    elems: Iterable[FqmElement],
    budget: int | None = None,
    split: bool = True,
) -> OrbitPartition:
    """Partition ``elems`` into orbits; undecided elements stay flagged."""
    partition = OrbitPartition()
    for x in elems:
        placed = False
        undecided = False
        for orbit in partition.orbits:
            outcome = same_orbit(module, orbit[0], x, budget, split)
            if outcome is Outcome.PASS:
                orbit.append(x)
                placed = True
                break
            if outcome is Outcome.UNKNOWN:
                undecided = True
        if not placed:
            partition.orbits.append([x])
            if undecided:
                partition.unresolved.append(x)
    logger.debug("%s: %d orbits", module.name, len(partition.orbits))
    return partition
