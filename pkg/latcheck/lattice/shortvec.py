"""Fincke–Pohst enumeration of short vectors in negative definite lattices."""

from __future__ import annotations

import logging
from fractions import Fraction
from math import floor, isqrt

from latcheck.errors import BudgetExceededError, LatticeError
from latcheck.lattice.core import Lattice

logger = logging.getLogger(__name__)


def _completed_squares(gram: list[list[int]]) -> list[list[Fraction]]:
    """
    Exact decomposition ``Q(x) = sum_i q[i][i] (x_i + sum_{j>i} q[i][j] x_j)^2``
    of the positive definite form ``gram``.
    """
    n = len(gram)
    q = [[Fraction(x) for x in row] for row in gram]
    for i in range(n):
        for j in range(i + 1, n):
            q[j][i] = q[i][j]
            q[i][j] = q[i][j] / q[i][i]
        for k in range(i + 1, n):
            for m in range(k, n):
                q[k][m] -= q[k][i] * q[i][m]
    return q


def short_vectors(
    lattice: Lattice,
    bound: int,
    limit: int | None = None,
) -> list[tuple[int, ...]]:
    """
    All ``v`` with ``-bound <= v^2 < 0``, one per ``±v`` pair.

    The lattice must be negative definite. Results are sorted by ``-v^2`` then
    lexicographically; ``limit`` caps the number of vectors returned.
    """
    if not lattice.is_negative_definite:
        raise LatticeError(f"{lattice.name} is not negative definite")
    n = lattice.rank
    if n == 0 or bound <= 0:
        return []
    positive = [[-int(x) for x in row] for row in lattice.gram]
    q = _completed_squares(positive)
    found: list[tuple[int, tuple[int, ...]]] = []
    x = [0] * n

    def center(i: int) -> Fraction:
        return -sum((q[i][j] * x[j] for j in range(i + 1, n)), Fraction(0))

    def descend(i: int, remaining: Fraction) -> None:
        c = center(i)
        radius_sq = remaining / q[i][i]
        spread = isqrt(floor(radius_sq)) + 1
        lo = floor(c) - spread
        hi = floor(c) + spread + 1
        for value in range(lo, hi + 1):
            used = q[i][i] * (value - c) ** 2
            if used > remaining:
                continue
            x[i] = value
            if i == 0:
                if any(x):
                    norm = int(bound - (remaining - used))
                    found.append((norm, tuple(x)))
                    if limit is not None and len(found) > 2 * limit:
                        raise BudgetExceededError(
                            f"more than {limit} short vectors in {lattice.name}", limit
                        )
            else:
                descend(i - 1, remaining - used)
        x[i] = 0

    descend(n - 1, Fraction(bound))
    unique = {}
    for norm, vec in found:
        lead = next(v for v in vec if v != 0)
        if lead > 0:
            unique[vec] = norm
    result = sorted(unique, key=lambda v: (unique[v], v))
    if limit is not None and len(result) > limit:
        raise BudgetExceededError(f"more than {limit} short vectors in {lattice.name}", limit)
    logger.debug("%s: %d vectors with square >= -%d", lattice.name, len(result), bound)
    return result
