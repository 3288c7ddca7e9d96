"""
Search for polarization classes with a prescribed square, saturation index
and complement genus.

Host lattices carry a hyperbolic pair ``s1, s2`` and optionally the class
``mu`` of half the exceptional divisor; the part without ``mu`` sits
primitively in a unimodular lattice, so the coinvariant lattice glues to it
completely.
"""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from math import gcd
from typing import Sequence

import numpy as np

from latcheck.constants import (
    WITNESS_COEFFICIENTS,
    WITNESS_LEADING,
    WITNESS_LIMIT,
    WITNESS_PER_KEY,
)
from latcheck.errors import LatticeError
from latcheck.genus.genus import LatticeOrGenus, same_genus
from latcheck.lattice.core import EmbeddedSublattice, Lattice, divisibility, orthogonal_complement
from latcheck.linalg.exact import int_matrix, to_rows
from latcheck.torsion.isometry import Outcome

logger = logging.getLogger(__name__)

MU = "mu"


def saturation_index(vector: Sequence[int], host: Lattice, names: Sequence[str]) -> int:
    """
    Index of ``Ω ⊕ <v>`` in its saturation: the gcd of the divisibility of
    the ``mu``-free part of ``v`` and its ``mu`` coefficient.
    """
    mu = names.index(MU) if MU in names else None
    c = int(vector[mu]) if mu is not None else 0
    keep = [i for i in range(host.rank) if i != mu]
    part = [int(vector[i]) for i in keep]
    if not any(part):
        return abs(c)
    s = host.gram[np.ix_(keep, keep)]
    return gcd(divisibility(part, Lattice(s, allow_degenerate=True)), c)


def complement_of(vector: Sequence[int], host: Lattice) -> Lattice:
    sub = EmbeddedSublattice(host, int_matrix([list(vector)], host.rank))
    return orthogonal_complement(sub).lattice(label=f"{host.name} ∩ v⊥")


def complement_matches(complement: Lattice, targets: Sequence[LatticeOrGenus], budget: int | None) -> Outcome:
    """Best outcome of ``same_genus`` against any of ``targets``."""
    outcomes = [same_genus(complement, t, budget) for t in targets]
    if Outcome.PASS in outcomes:
        return Outcome.PASS
    return Outcome.UNKNOWN if Outcome.UNKNOWN in outcomes else Outcome.FAIL


@dataclass
class WitnessResult:
    outcome: Outcome
    vector: list[int] | None = None
    tested: int = 0
    keys: int = 0
    detail: str = ""

    @property
    def found(self) -> bool:
        return self.outcome is Outcome.PASS


def format_vector(vector: Sequence[int], names: Sequence[str]) -> str:
    terms = []
    for c, name in zip(vector, names):
        if c == 0:
            continue
        if c == 1:
            terms.append(f"+{name}")
        elif c == -1:
            terms.append(f"-{name}")
        else:
            terms.append(f"{c:+d}*{name}")
    text = "".join(terms).lstrip("+")
    return text or "0"


def _box(size: int, coefficients: Sequence[int]) -> np.ndarray:
    if size == 0:
        return np.zeros((1, 0), dtype=np.int64)
    idx = np.indices((len(coefficients),) * size).reshape(size, -1).T
    return np.asarray(coefficients, dtype=np.int64)[idx]


def find_witness(
    host: Lattice,
    names: Sequence[str],
    square: int,
    index: int,
    targets: Sequence[LatticeOrGenus],
    budget: int | None = None,
    leading: Sequence[int] = WITNESS_LEADING,
    coefficients: Sequence[int] = WITNESS_COEFFICIENTS,
    limit: int = WITNESS_LIMIT,
) -> WitnessResult:
    """
    Primitive ``v = a(s1 + k s2) + w`` with ``w`` in a coefficient box on the
    remaining basis vectors, ``v² = square``, saturation index ``index`` and
    complement in one of the ``targets`` genera.

    Candidates are grouped by cheap invariants (divisibility in the host and
    in the ``mu``-free part, ``mu`` coefficient mod 4); at most
    ``WITNESS_PER_KEY`` members of a group get the complement test. An empty
    search is UNKNOWN, never FAIL.
    """
    if "s1" not in names or "s2" not in names:
        raise LatticeError(f"{host.name}: witness search needs basis vectors s1 and s2")
    n = host.rank
    i1, i2 = names.index("s1"), names.index("s2")
    g = np.array(to_rows(host.gram), dtype=np.int64)
    if g[i1, i1] or g[i2, i2] or g[i1, i2] != 1:
        raise LatticeError(f"{host.name}: s1, s2 are not a hyperbolic pair")
    rest = [i for i in range(n) if i not in (i1, i2)]
    if g[np.ix_([i1, i2], rest)].any():
        raise LatticeError(f"{host.name}: s1, s2 do not split off")
    mu = names.index(MU) if MU in names else None
    keep = [i for i in range(n) if i != mu]

    box = _box(len(rest), coefficients)
    g_rest = g[np.ix_(rest, rest)]
    w_sq = np.einsum("ij,jk,ik->i", box, g_rest, box)

    groups: Counter[tuple[int, ...]] = Counter()
    tested = 0
    for a in leading:
        step = 2 * a * a
        numerator = square - w_sq
        ok = numerator % step == 0
        if not ok.any():
            continue
        m = int(ok.sum())
        v = np.zeros((m, n), dtype=np.int64)
        v[:, i1] = a
        v[:, i2] = a * (numerator[ok] // step)
        v[:, rest] = box[ok]
        primitive = np.gcd.reduce(np.abs(v), axis=1) == 1
        pairings = v[:, keep] @ g[np.ix_(keep, keep)]
        part_div = np.gcd.reduce(np.abs(pairings), axis=1)
        c = np.abs(v[:, mu]) if mu is not None else np.zeros(m, dtype=np.int64)
        found_index = np.gcd(part_div, c)
        host_div = np.gcd.reduce(np.abs(v @ g), axis=1)
        for row in np.flatnonzero(primitive & (found_index == index)):
            key = (a, int(host_div[row]), int(part_div[row]), int(c[row]) % 4)
            if groups[key] >= WITNESS_PER_KEY:
                continue
            if tested >= limit:
                logger.info("witness search on %s stopped after %d tests", host.name, tested)
                return WitnessResult(Outcome.UNKNOWN, tested=tested, keys=len(groups), detail="search limit reached")
            groups[key] += 1
            tested += 1
            vector = [int(x) for x in v[row]]
            complement = complement_of(vector, host)
            pos, neg, _ = complement.signature
            if (pos, neg) != (2, complement.rank - 2):
                continue
            if complement_matches(complement, targets, budget) is Outcome.PASS:
                logger.debug("witness %s after %d tests", vector, tested)
                return WitnessResult(Outcome.PASS, vector, tested, len(groups), f"found after {tested} complement tests")
    return WitnessResult(Outcome.UNKNOWN, tested=tested, keys=len(groups), detail=f"no witness among {tested} candidates")


__all__ = [
    "WitnessResult",
    "complement_matches",
    "complement_of",
    "find_witness",
    "format_vector",
    "saturation_index",
]
