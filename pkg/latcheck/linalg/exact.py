"""
Exact integer and rational matrix kernel.

Matrices are numpy arrays with ``dtype=object`` so every entry is a Python
``int`` (or ``fractions.Fraction``) of unbounded size. Hot loops work on plain
lists of lists and convert at the boundary.
"""

from __future__ import annotations

import logging
from fractions import Fraction
from functools import reduce
from math import gcd
from typing import Iterable, Sequence

import numpy as np
import sympy

from latcheck.errors import RankDeficiencyError

logger = logging.getLogger(__name__)

IntMatrix = np.ndarray
RatMatrix = np.ndarray

Rows = list[list[int]]


def _as_int(value: object) -> int:
    if isinstance(value, Fraction):
        if value.denominator != 1:
            raise ValueError(f"non-integral entry {value}")
        return value.numerator
    if isinstance(value, (float, np.floating)):
        if not float(value).is_integer():
            raise ValueError(f"non-integral entry {value}")
        return int(value)
    return int(value)  # type: ignore[call-overload]


def _as_fraction(value: object) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value)
    if isinstance(value, sympy.Rational):
        return Fraction(int(value.p), int(value.q))
    return Fraction(_as_int(value))


def _fill(data: list[list[object]], cols: int | None) -> np.ndarray:
    if not data:
        return np.empty((0, cols or 0), dtype=object)
    width = len(data[0])
    arr = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        if len(row) != width:
            raise ValueError("ragged matrix rows")
        for j, value in enumerate(row):
            arr[i, j] = value
    return arr


def int_matrix(rows: Iterable[Iterable[object]] | np.ndarray, cols: int | None = None) -> IntMatrix:
    """Build an arbitrary-precision integer matrix."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2 and rows.shape[0] == 0:
        return np.empty((0, rows.shape[1] if cols is None else cols), dtype=object)
    data = [[_as_int(x) for x in row] for row in rows]
    return _fill(data, cols)  # type: ignore[arg-type]


def rat_matrix(rows: Iterable[Iterable[object]] | np.ndarray, cols: int | None = None) -> RatMatrix:
    """Build a rational matrix with entries in lowest terms."""
    if isinstance(rows, np.ndarray) and rows.ndim == 2 and rows.shape[0] == 0:
        return np.empty((0, rows.shape[1] if cols is None else cols), dtype=object)
    data = [[_as_fraction(x) for x in row] for row in rows]
    return _fill(data, cols)  # type: ignore[arg-type]


def int_vector(values: Iterable[object]) -> np.ndarray:
    items = [_as_int(x) for x in values]
    arr = np.empty(len(items), dtype=object)
    for i, value in enumerate(items):
        arr[i] = value
    return arr


def rat_vector(values: Iterable[object]) -> np.ndarray:
    items = [_as_fraction(x) for x in values]
    arr = np.empty(len(items), dtype=object)
    for i, value in enumerate(items):
        arr[i] = value
    return arr


def identity(n: int) -> IntMatrix:
    out = np.zeros((n, n), dtype=object)
    for i in range(n):
        out[i, i] = 1
    return out


def zeros(rows: int, cols: int) -> IntMatrix:
    return np.zeros((rows, cols), dtype=object)


def matmul(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact product; handles empty inner dimensions."""
    if a.ndim == 1 and b.ndim == 2:
        if a.shape[0] == 0:
            return np.zeros(b.shape[1], dtype=object)
        return np.dot(a, b)
    if a.ndim == 2 and b.ndim == 1:
        if a.shape[1] == 0:
            return np.zeros(a.shape[0], dtype=object)
        return np.dot(a, b)
    if a.shape[-1] == 0 or a.shape[0] == 0 or b.shape[-1] == 0:
        return np.zeros((a.shape[0], b.shape[-1]), dtype=object)
    return np.dot(a, b)


def to_rows(m: np.ndarray) -> Rows:
    return [[_as_int(x) for x in row] for row in m]


def block_diagonal(blocks: Sequence[np.ndarray]) -> IntMatrix:
    size = sum(b.shape[0] for b in blocks)
    out = zeros(size, size)
    offset = 0
    for block in blocks:
        n = block.shape[0]
        out[offset : offset + n, offset : offset + n] = block
        offset += n
    return out


def is_symmetric(m: np.ndarray) -> bool:
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        return False
    n = m.shape[0]
    return all(m[i, j] == m[j, i] for i in range(n) for j in range(i + 1, n))


def lcm_list(values: Iterable[int]) -> int:
    return reduce(lambda a, b: a * b // gcd(a, b) if a and b else max(a, b), values, 1)


def gcd_list(values: Iterable[int]) -> int:
    return reduce(gcd, (abs(int(v)) for v in values), 0)


def smith_normal_form(m: np.ndarray) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """
    Smith normal form with transforms.

    Returns ``(d, u, v)`` with ``u @ m @ v == d``, ``d`` diagonal with
    nonnegative entries and ``d[i] | d[i+1]``, ``u`` and ``v`` unimodular.
    """
    a = to_rows(m)
    r = len(a)
    c = m.shape[1] if m.ndim == 2 else 0
    u = [[int(i == j) for j in range(r)] for i in range(r)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def swap_rows(i: int, j: int) -> None:
        a[i], a[j] = a[j], a[i]
        u[i], u[j] = u[j], u[i]

    def swap_cols(i: int, j: int) -> None:
        for row in a:
            row[i], row[j] = row[j], row[i]
        for row in v:
            row[i], row[j] = row[j], row[i]

    t = 0
    while t < min(r, c):
        pivot = None
        for i in range(t, r):
            for j in range(t, c):
                if a[i][j] != 0 and (pivot is None or abs(a[i][j]) < abs(a[pivot[0]][pivot[1]])):
                    pivot = (i, j)
        if pivot is None:
            break
        swap_rows(t, pivot[0])
        swap_cols(t, pivot[1])
        while True:
            changed = False
            for i in range(t + 1, r):
                if a[i][t] != 0:
                    q = a[i][t] // a[t][t]
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    if a[i][t] != 0:
                        swap_rows(t, i)
                        changed = True
            for j in range(t + 1, c):
                if a[t][j] != 0:
                    q = a[t][j] // a[t][t]
                    for row in a:
                        row[j] -= q * row[t]
                    for row in v:
                        row[j] -= q * row[t]
                    if a[t][j] != 0:
                        swap_cols(t, j)
                        changed = True
            if changed:
                continue
            if any(a[i][t] for i in range(t + 1, r)) or any(a[t][j] for j in range(t + 1, c)):
                continue
            bad = next(
                (i for i in range(t + 1, r) for j in range(t + 1, c) if a[i][j] % a[t][t]),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
        t += 1
    return int_matrix(a, c), int_matrix(u, r), int_matrix(v, c)


def invariant_factors(m: np.ndarray) -> list[int]:
    """Diagonal of the Smith normal form, zeros included."""
    d, _, _ = smith_normal_form(m)
    return [int(d[i, i]) for i in range(min(d.shape))]


def hermite_normal_form(rows: np.ndarray) -> IntMatrix:
    """Row-style Hermite normal form of the row lattice; zero rows dropped."""
    a = to_rows(rows)
    k = len(a)
    n = rows.shape[1]
    pivot_row = 0
    for col in range(n):
        if pivot_row == k:
            break
        found = False
        while True:
            nonzero = [i for i in range(pivot_row, k) if a[i][col] != 0]
            if not nonzero:
                break
            found = True
            best = min(nonzero, key=lambda i: abs(a[i][col]))
            a[pivot_row], a[best] = a[best], a[pivot_row]
            clean = True
            for i in range(pivot_row + 1, k):
                if a[i][col] != 0:
                    q = a[i][col] // a[pivot_row][col]
                    a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
                    if a[i][col] != 0:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if a[pivot_row][col] < 0:
            a[pivot_row] = [-x for x in a[pivot_row]]
        p = a[pivot_row][col]
        for i in range(pivot_row):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pivot_row])]
        pivot_row += 1
    return int_matrix(a[:pivot_row], n)


def _fraction_rows(m: np.ndarray) -> list[list[Fraction]]:
    return [[_as_fraction(x) for x in row] for row in m]


def rank(m: np.ndarray) -> int:
    if m.shape[0] == 0 or m.shape[1] == 0:
        return 0
    a = _fraction_rows(m)
    rows, cols = len(a), len(a[0])
    r = 0
    for col in range(cols):
        pivot = next((i for i in range(r, rows) if a[i][col] != 0), None)
        if pivot is None:
            continue
        a[r], a[pivot] = a[pivot], a[r]
        for i in range(r + 1, rows):
            if a[i][col] != 0:
                f = a[i][col] / a[r][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        r += 1
        if r == rows:
            break
    return r


def determinant(m: np.ndarray) -> int:
    """Bareiss fraction-free determinant of an integer matrix."""
    n = m.shape[0]
    if n == 0:
        return 1
    a = to_rows(m)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            swap = next((i for i in range(k + 1, n) if a[i][k] != 0), None)
            if swap is None:
                return 0
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def rational_inverse(m: np.ndarray) -> RatMatrix:
    n = m.shape[0]
    a = _fraction_rows(m)
    inv = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if a[i][col] != 0), None)
        if pivot is None:
            raise RankDeficiencyError("matrix is singular")
        a[col], a[pivot] = a[pivot], a[col]
        inv[col], inv[pivot] = inv[pivot], inv[col]
        p = a[col][col]
        a[col] = [x / p for x in a[col]]
        inv[col] = [x / p for x in inv[col]]
        for i in range(n):
            if i != col and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                inv[i] = [x - f * y for x, y in zip(inv[i], inv[col])]
    return rat_matrix(inv, n)


def unimodular_inverse(m: np.ndarray) -> IntMatrix:
    inv = rational_inverse(m)
    return int_matrix(inv, m.shape[0])


def is_unimodular(m: np.ndarray) -> bool:
    return m.shape[0] == m.shape[1] and abs(determinant(m)) == 1


def solve_rational(a: np.ndarray, b: np.ndarray) -> RatMatrix | None:
    """
    Solve ``x @ a == b`` for rational ``x`` when the rows of ``a`` are
    independent. ``b`` may be a single vector. Returns ``None`` if some row of
    ``b`` is outside the rational row span of ``a``.
    """
    single = b.ndim == 1
    bb = b.reshape(1, -1) if single else b
    k, n = a.shape
    # Transposed system a^T x^T = b^T, reduced to row echelon form.
    aug = [
        [_as_fraction(a[i, j]) for i in range(k)] + [_as_fraction(bb[r, j]) for r in range(bb.shape[0])]
        for j in range(n)
    ]
    width = k + bb.shape[0]
    pivots: list[int] = []
    row = 0
    for col in range(k):
        pivot = next((i for i in range(row, n) if aug[i][col] != 0), None)
        if pivot is None:
            raise RankDeficiencyError("rows of the coefficient matrix are dependent")
        aug[row], aug[pivot] = aug[pivot], aug[row]
        p = aug[row][col]
        aug[row] = [x / p for x in aug[row]]
        for i in range(n):
            if i != row and aug[i][col] != 0:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append(col)
        row += 1
    for i in range(row, n):
        if any(aug[i][j] != 0 for j in range(k, width)):
            return None
    x = [[aug[i][k + r] for i in range(k)] for r in range(bb.shape[0])]
    out = rat_matrix(x, k)
    return out[0] if single else out


def row_span_contains(basis: np.ndarray, vector: np.ndarray) -> bool:
    """True if ``vector`` is an integer combination of the rows of ``basis``."""
    if basis.shape[0] == 0:
        return all(x == 0 for x in vector)
    coeffs = solve_rational(basis, vector)
    return coeffs is not None and all(c.denominator == 1 for c in coeffs)


def kernel_basis(m: np.ndarray) -> IntMatrix:
    """Rows form a saturated basis of ``{x : m @ x == 0}``."""
    c = m.shape[1]
    if m.shape[0] == 0:
        return identity(c)
    d, _, v = smith_normal_form(m)
    r = sum(1 for i in range(min(d.shape)) if d[i, i] != 0)
    return int_matrix(v[:, r:].T, c)


def saturate(rows: np.ndarray) -> IntMatrix:
    """Basis (in Hermite form) of the primitive closure of the row span."""
    k, n = rows.shape
    if k == 0:
        return int_matrix([], n)
    d, _, v = smith_normal_form(rows)
    r = sum(1 for i in range(min(d.shape)) if d[i, i] != 0)
    if r < k:
        raise RankDeficiencyError(f"{k} rows span a rank-{r} lattice")
    v_inv = unimodular_inverse(v)
    return hermite_normal_form(v_inv[:k])


def lattice_index(sub: np.ndarray, sup: np.ndarray) -> int:
    """Index of the row lattice ``sub`` in ``sup`` (same rank, ``sub`` inside ``sup``)."""
    coords = solve_rational(sup, sub)
    if coords is None or any(x.denominator != 1 for x in coords.flat):
        raise ValueError("first lattice is not contained in the second")
    return abs(determinant(int_matrix(coords)))


def _charpoly_inertia(block: list[list[Fraction]]) -> tuple[int, int, int]:
    n = len(block)
    mat = sympy.Matrix(n, n, lambda i, j: sympy.Rational(block[i][j].numerator, block[i][j].denominator))
    coeffs = [sympy.Rational(c) for c in mat.charpoly().all_coeffs()]
    # all_coeffs is highest degree first; trailing zeros are the zero eigenvalues
    zero = 0
    while zero < len(coeffs) - 1 and coeffs[-1 - zero] == 0:
        zero += 1
    trimmed = coeffs[: len(coeffs) - zero]

    def sign_changes(values: list[sympy.Rational]) -> int:
        signs = [1 if x > 0 else -1 for x in values if x != 0]
        return sum(1 for s, t in zip(signs, signs[1:]) if s != t)

    pos = sign_changes(trimmed)
    degree = len(trimmed) - 1
    flipped = [c * (-1) ** (degree - i) for i, c in enumerate(trimmed)]
    neg = sign_changes(flipped)
    return pos, neg, zero


def exact_signature(g: np.ndarray) -> tuple[int, int, int]:
    """
    Inertia ``(pos, neg, zero)`` of a symmetric matrix.

    Symmetric rational elimination on nonzero diagonal pivots; the remaining
    block with zero diagonal is settled by Descartes' rule on its
    characteristic polynomial.
    """
    a = _fraction_rows(g)
    active = list(range(len(a)))
    pos = neg = 0
    while active:
        pivot = next((i for i in active if a[i][i] != 0), None)
        if pivot is None:
            block = [[a[i][j] for j in active] for i in active]
            if any(x != 0 for row in block for x in row):
                logger.debug("signature: charpoly fallback on a %d-block", len(active))
                p, n, z = _charpoly_inertia(block)
                return pos + p, neg + n, z
            return pos, neg, len(active)
        p = a[pivot][pivot]
        if p > 0:
            pos += 1
        else:
            neg += 1
        rest = [i for i in active if i != pivot]
        for i in rest:
            if a[i][pivot] != 0:
                f = a[i][pivot] / p
                for j in rest:
                    a[i][j] -= f * a[pivot][j]
        active = rest
    return pos, neg, 0
