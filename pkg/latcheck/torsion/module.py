"""
Finite quadratic modules (discriminant forms).

A module is a product of cyclic groups ``Z/n_i`` with generators ``g_i``,
``q(g_i)`` in Q/2Z and ``b(g_i, g_j)`` in Q/Z. Internally every value is
scaled by the exponent ``e``: ``q·e`` lives in Z/2e and ``b·e`` in Z/e, so
whole-group enumeration runs on int64 numpy arrays.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd, prod
from typing import Any, Iterable, Mapping, Sequence

import numpy as np
import sympy
from sympy.ntheory import legendre_symbol

from latcheck.constants import MAX_GROUP_ORDER
from latcheck.errors import BudgetExceededError, DegenerateFormError
from latcheck.linalg.exact import (
    hermite_normal_form,
    int_matrix,
    invariant_factors,
    kernel_basis,
    lcm_list,
    matmul,
    rational_inverse,
    smith_normal_form,
    to_rows,
    unimodular_inverse,
)

logger = logging.getLogger(__name__)


def _frac(value: Any) -> Fraction:
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def _mod(value: Fraction, modulus: int) -> Fraction:
    return value - modulus * (value // modulus)


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class FqmElement:
    """Element of a finite quadratic module in canonical residues."""

    coords: tuple[int, ...]
    orders: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coords) != len(self.orders):
            raise ValueError("coordinate count does not match generator count")
        object.__setattr__(
            self, "coords", tuple(int(c) % n for c, n in zip(self.coords, self.orders))
        )

    def __add__(self, other: "FqmElement") -> "FqmElement":
        return FqmElement(tuple(a + b for a, b in zip(self.coords, other.coords)), self.orders)

    def __mul__(self, k: int) -> "FqmElement":
        return FqmElement(tuple(k * a for a in self.coords), self.orders)

    __rmul__ = __mul__

    @property
    def is_zero(self) -> bool:
        return not any(self.coords)

    def __str__(self) -> str:
        return "(" + ", ".join(str(c) for c in self.coords) + ")"


@dataclass(eq=False)
class TorsionQuadraticModule:
    """Finite abelian group with a Q/2Z-valued quadratic form."""

    orders: tuple[int, ...]
    q_values: tuple[Fraction, ...]
    b_values: tuple[tuple[Fraction, ...], ...]
    label: str | None = None
    # Rows: coordinates of each generator in the module this one was cut from.
    embedding: np.ndarray | None = field(default=None, repr=False)
    # Dual-lattice data set by discriminant_module.
    dual_projection: np.ndarray | None = field(default=None, repr=False)
    dual_lifts: np.ndarray | None = field(default=None, repr=False)
    dual_gram: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        self.orders = tuple(int(n) for n in self.orders)
        r = len(self.orders)
        if any(n < 2 for n in self.orders):
            raise ValueError(f"generator orders must be >= 2, got {self.orders}")
        if len(self.q_values) != r or len(self.b_values) != r:
            raise ValueError("q/b values do not match the number of generators")
        self.q_values = tuple(_mod(_frac(x), 2) for x in self.q_values)
        self.b_values = tuple(
            tuple(_mod(_frac(x), 1) for x in row) for row in self.b_values
        )
        for i, n in enumerate(self.orders):
            q = self.q_values[i]
            if len(self.b_values[i]) != r:
                raise ValueError("bilinear matrix must be square")
            if (n * q).denominator != 1 or (n * n * q) % 2 != 0:
                raise DegenerateFormError(f"q(g{i}) = {q} is not well defined on Z/{n}")
            if _mod(q - self.b_values[i][i], 1) != 0:
                raise DegenerateFormError(f"q(g{i}) and b(g{i}, g{i}) disagree")
            for j in range(r):
                b = self.b_values[i][j]
                if b != self.b_values[j][i]:
                    raise DegenerateFormError(f"b is not symmetric at ({i}, {j})")
                if (n * b).denominator != 1:
                    raise DegenerateFormError(f"b(g{i}, g{j}) = {b} is not well defined")

    # -- construction -------------------------------------------------

    @classmethod
    def from_form(
        cls, orders: Sequence[int], matrix: Sequence[Sequence[Any]], label: str | None = None
    ) -> "TorsionQuadraticModule":
        """Diagonal of ``matrix`` is q, off-diagonal entries are b."""
        r = len(orders)
        values = [[_frac(x) for x in row] for row in matrix]
        q = tuple(values[i][i] for i in range(r))
        b = tuple(
            tuple(values[i][i] if i == j else values[i][j] for j in range(r)) for i in range(r)
        )
        return cls(tuple(orders), q, b, label=label)

    @classmethod
    def trivial(cls) -> "TorsionQuadraticModule":
        return cls((), (), (), label="0")

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "TorsionQuadraticModule":
        orders = [int(n) for n in data["orders"]]
        q = tuple(_frac(x) for x in data["q"])
        b = tuple(tuple(_frac(x) for x in row) for row in data["b"])
        return cls(tuple(orders), q, b, label=data.get("label"))

    def to_dict(self) -> dict[str, Any]:
        return {
            "orders": list(self.orders),
            "q": [format_fraction(x) for x in self.q_values],
            "b": [[format_fraction(x) for x in row] for row in self.b_values],
        }

    # -- basic invariants ---------------------------------------------

    @property
    def rank(self) -> int:
        return len(self.orders)

    @property
    def order(self) -> int:
        return prod(self.orders)

    @property
    def exponent(self) -> int:
        return lcm_list(self.orders)

    @property
    def name(self) -> str:
        return self.label or f"module of order {self.order}"

    def invariant_factors(self) -> list[int]:
        if not self.orders:
            return []
        diag = [[n if i == j else 0 for j, _ in enumerate(self.orders)] for i, n in enumerate(self.orders)]
        return [d for d in invariant_factors(int_matrix(diag)) if d > 1]

    def scaled_forms(self, scale: int | None = None) -> tuple[np.ndarray, np.ndarray]:
        """``(q·scale mod 2·scale, b·scale mod scale)`` as int64 arrays."""
        e = scale or self.exponent
        r = self.rank
        qs = np.array([int(q * e) % (2 * e) for q in self.q_values], dtype=np.int64)
        bs = np.array(
            [[int(self.b_values[i][j] * e) % e for j in range(r)] for i in range(r)],
            dtype=np.int64,
        ).reshape(r, r)
        return qs, bs

    # -- element arithmetic -------------------------------------------

    def element(self, coords: Sequence[int]) -> FqmElement:
        return FqmElement(tuple(int(c) for c in coords), self.orders)

    def q(self, x: FqmElement | Sequence[int]) -> Fraction:
        c = x.coords if isinstance(x, FqmElement) else tuple(int(v) for v in x)
        total = Fraction(0)
        for i, ci in enumerate(c):
            if ci:
                total += ci * ci * self.q_values[i]
                for j in range(i + 1, self.rank):
                    if c[j]:
                        total += 2 * ci * c[j] * self.b_values[i][j]
        return _mod(total, 2)

    def b(self, x: FqmElement | Sequence[int], y: FqmElement | Sequence[int]) -> Fraction:
        cx = x.coords if isinstance(x, FqmElement) else tuple(x)
        cy = y.coords if isinstance(y, FqmElement) else tuple(y)
        total = Fraction(0)
        for i, a in enumerate(cx):
            if a:
                for j, c in enumerate(cy):
                    if c:
                        total += a * c * self.b_values[i][j]
        return _mod(total, 1)

    def element_order(self, x: FqmElement | Sequence[int]) -> int:
        c = x.coords if isinstance(x, FqmElement) else tuple(x)
        return lcm_list(n // gcd(int(a) % n, n) for a, n in zip(c, self.orders))

    # -- whole-group arrays -------------------------------------------

    def require_enumerable(self, budget: int | None = None) -> None:
        limit = MAX_GROUP_ORDER if budget is None else budget
        if self.order > limit:
            raise BudgetExceededError(
                f"{self.name} has {self.order} elements", limit
            )

    @cached_property
    def strides(self) -> np.ndarray:
        strides = [1] * self.rank
        for i in range(self.rank - 2, -1, -1):
            strides[i] = strides[i + 1] * self.orders[i + 1]
        return np.array(strides, dtype=np.int64)

    @cached_property
    def elements(self) -> np.ndarray:
        """All elements as rows, in mixed-radix order (index = coords · strides)."""
        self.require_enumerable()
        if self.rank == 0:
            return np.zeros((1, 0), dtype=np.int64)
        grid = np.indices(self.orders, dtype=np.int64)
        return grid.reshape(self.rank, -1).T.copy()

    @cached_property
    def element_orders(self) -> np.ndarray:
        elems = self.elements
        if self.rank == 0:
            return np.ones(1, dtype=np.int64)
        orders = np.array(self.orders, dtype=np.int64)
        per_coord = orders // np.gcd(elems, orders)
        return np.lcm.reduce(per_coord, axis=1)

    @cached_property
    def element_q(self) -> np.ndarray:
        """Scaled squares ``q(x)·e mod 2e`` of every element."""
        return self.scaled_q_of(self.elements, self.exponent)

    def scaled_q_of(self, elems: np.ndarray, scale: int) -> np.ndarray:
        if self.rank == 0:
            return np.zeros(elems.shape[0], dtype=np.int64)
        qs, bs = self.scaled_forms(scale)
        upper = np.triu(2 * bs, 1) + np.diag(qs)
        return np.einsum("ni,ij,nj->n", elems, upper, elems) % (2 * scale)

    def scaled_b_with(self, vector: Sequence[int], scale: int | None = None) -> np.ndarray:
        """``b(x, vector)·scale mod scale`` for every element ``x``."""
        e = scale or self.exponent
        if self.rank == 0:
            return np.zeros(1, dtype=np.int64)
        _, bs = self.scaled_forms(e)
        column = bs @ np.asarray(vector, dtype=np.int64)
        return (self.elements @ column) % e

    def index_of(self, coords: Sequence[int]) -> int:
        c = np.asarray(coords, dtype=np.int64) % np.array(self.orders, dtype=np.int64)
        return int(c @ self.strides) if self.rank else 0

    def reduce(self, rows: np.ndarray) -> np.ndarray:
        if self.rank == 0:
            return np.zeros((rows.shape[0], 0), dtype=np.int64)
        return np.asarray(rows, dtype=np.int64) % np.array(self.orders, dtype=np.int64)

    def subgroup_elements(self, generators: Iterable[Sequence[int]]) -> np.ndarray:
        """Sorted element indices of the subgroup generated by ``generators``."""
        self.require_enumerable()
        members = np.zeros(1, dtype=np.int64)
        orders = np.array(self.orders, dtype=np.int64)
        for gen in generators:
            g = np.asarray(gen, dtype=np.int64) % orders
            if not g.any():
                continue
            coords = self.elements[members]
            n = self.element_order(tuple(int(x) for x in g))
            shifted = (coords[:, None, :] + np.arange(n)[None, :, None] * g) % orders
            members = np.unique(shifted.reshape(-1, self.rank) @ self.strides)
        return members

    # -- structure ------------------------------------------------------

    def direct_sum(self, other: "TorsionQuadraticModule") -> "TorsionQuadraticModule":
        r, s = self.rank, other.rank
        zero = Fraction(0)
        b = [list(row) + [zero] * s for row in self.b_values]
        b += [[zero] * r + list(row) for row in other.b_values]
        return TorsionQuadraticModule(
            self.orders + other.orders,
            self.q_values + other.q_values,
            tuple(tuple(row) for row in b),
            label=f"{self.name} + {other.name}",
        )

    def negated(self) -> "TorsionQuadraticModule":
        return TorsionQuadraticModule(
            self.orders,
            tuple(-q for q in self.q_values),
            tuple(tuple(-b for b in row) for row in self.b_values),
            label=f"-({self.name})",
            embedding=self.embedding,
        )

    def on_generators(
        self, generators: Sequence[Sequence[int]], orders: Sequence[int], label: str | None = None
    ) -> "TorsionQuadraticModule":
        """Module on the given elements, assumed to generate a direct product."""
        gens = [tuple(int(x) for x in g) for g in generators]
        q = tuple(self.q(g) for g in gens)
        b = tuple(tuple(self.q(g) if i == j else self.b(g, h) for j, h in enumerate(gens)) for i, g in enumerate(gens))
        emb = np.array(gens, dtype=np.int64).reshape(len(gens), self.rank)
        return TorsionQuadraticModule(tuple(orders), q, b, label=label, embedding=emb)

    def primary_part(self, p: int) -> "TorsionQuadraticModule":
        gens, orders = [], []
        for i, n in enumerate(self.orders):
            pp = 1
            while n % p == 0:
                n //= p
                pp *= p
            if pp > 1:
                g = [0] * self.rank
                g[i] = n
                gens.append(g)
                orders.append(pp)
        return self.on_generators(gens, orders, label=f"{self.name}_{p}")

    def primes(self) -> list[int]:
        return sorted({int(p) for n in self.orders for p in sympy.primefactors(n)})

    def _preimage_basis(self, generators: Iterable[Sequence[int]]) -> np.ndarray:
        rows = [[n if i == j else 0 for j in range(self.rank)] for i, n in enumerate(self.orders)]
        rows += [[int(x) for x in g] for g in generators]
        return hermite_normal_form(int_matrix(rows, self.rank))

    def subquotient(
        self,
        sub_generators: Iterable[Sequence[int]],
        quotient_generators: Iterable[Sequence[int]] = (),
        label: str | None = None,
    ) -> "TorsionQuadraticModule":
        """
        ``S/N`` for subgroups ``N <= S``; N must be isotropic and inside the
        orthogonal of S for the form to descend.
        """
        sub_generators = [list(g) for g in sub_generators]
        quotient_generators = [list(g) for g in quotient_generators]
        s_basis = self._preimage_basis(sub_generators)
        n_basis = self._preimage_basis(quotient_generators)
        if self.rank == 0:
            return TorsionQuadraticModule.trivial()
        x = matmul(n_basis, rational_inverse(s_basis))
        x = int_matrix(x, self.rank)
        d, _, v = smith_normal_form(x)
        new_basis = matmul(unimodular_inverse(v), s_basis)
        gens, orders = [], []
        for i in range(self.rank):
            if d[i, i] > 1:
                gens.append([int(c) for c in new_basis[i]])
                orders.append(int(d[i, i]))
        for g in quotient_generators:
            if self.q(g) != 0:
                raise DegenerateFormError(f"quotient generator {g} is not isotropic")
            for h in gens:
                if self.b(g, h) != 0:
                    raise DegenerateFormError(f"quotient generator {g} is not orthogonal to the subgroup")
        return self.on_generators(gens, orders, label=label)

    def orthogonal(self, generators: Iterable[Sequence[int]]) -> list[list[int]]:
        """Generators of ``{x : b(x, g) = 0 for all g}``."""
        gens = [[int(x) for x in g] for g in generators]
        r = self.rank
        if r == 0:
            return []
        if not gens:
            return [[int(i == j) for j in range(r)] for i in range(r)]
        e = self.exponent
        _, bs = self.scaled_forms(e)
        conditions = (bs @ np.array(gens, dtype=np.int64).T) % e
        m = len(gens)
        rows = [[int(conditions[i, k]) for i in range(r)] + [e if j == k else 0 for j in range(m)] for k in range(m)]
        kernel = kernel_basis(int_matrix(rows, r + m))
        projected = [[int(row[i]) % self.orders[i] for i in range(r)] for row in kernel]
        reduced = hermite_normal_form(int_matrix(projected + [[0] * r], r)) if projected else int_matrix([], r)
        return [[int(x) % n for x, n in zip(row, self.orders)] for row in to_rows(reduced)]

    def is_isotropic(self, generators: Iterable[Sequence[int]]) -> bool:
        gens = [list(g) for g in generators]
        return all(self.q(g) == 0 for g in gens) and all(
            self.b(g, h) == 0 for i, g in enumerate(gens) for h in gens[:i]
        )

    @cached_property
    def is_degenerate(self) -> bool:
        radical = self.orthogonal([[int(i == j) for j in range(self.rank)] for i in range(self.rank)])
        return any(any(x % n for x, n in zip(row, self.orders)) for row in radical)

    def element_from_dual_vector(self, vector: Sequence[Any]) -> FqmElement:
        """Class of a dual-lattice vector given in lattice coordinates."""
        if self.dual_projection is None or self.dual_lifts is None:
            raise ValueError(f"{self.name} was not built from a lattice")
        n = self.dual_projection.shape[0]
        gram_row = _frac_row_times(vector, self.dual_gram)
        if any(x.denominator != 1 for x in gram_row):
            raise ValueError("vector is not in the dual lattice")
        y = [int(x) for x in gram_row]
        coords = [sum(y[k] * int(self.dual_projection[k, j]) for k in range(n)) for j in range(self.rank)]
        return self.element(coords)

    def lift(self, x: FqmElement | Sequence[int]) -> list[Fraction]:
        """A dual-lattice representative of ``x`` in lattice coordinates."""
        if self.dual_lifts is None:
            raise ValueError(f"{self.name} was not built from a lattice")
        c = x.coords if isinstance(x, FqmElement) else tuple(x)
        n = self.dual_lifts.shape[1]
        return [sum((int(c[j]) * self.dual_lifts[j, k] for j in range(self.rank)), Fraction(0)) for k in range(n)]

    def __repr__(self) -> str:
        return f"TorsionQuadraticModule({self.name}, orders={list(self.orders)})"


def _frac_row_times(vector: Sequence[Any], gram: np.ndarray) -> list[Fraction]:
    n = gram.shape[0]
    return [sum((Fraction(vector[i]) * int(gram[i, j]) for i in range(n)), Fraction(0)) for j in range(n)]


def discriminant_module(lattice: Any, label: str | None = None) -> TorsionQuadraticModule:
    """``L*/L`` with its discriminant form, via the Smith form of the Gram matrix."""
    gram = lattice.gram
    n = gram.shape[0]
    if n == 0:
        return TorsionQuadraticModule.trivial()
    d, _, v = smith_normal_form(gram)
    if any(d[i, i] == 0 for i in range(n)):
        raise DegenerateFormError(f"{getattr(lattice, 'name', 'lattice')} is degenerate")
    idx = [i for i in range(n) if d[i, i] > 1]
    orders = tuple(int(d[i, i]) for i in idx)
    v_inv = unimodular_inverse(v)
    ginv = rational_inverse(gram)
    dual_rows = v_inv[idx, :] if idx else int_matrix([], n)
    lifts = matmul(dual_rows, ginv) if idx else np.empty((0, n), dtype=object)
    products = matmul(lifts, dual_rows.T) if idx else np.empty((0, 0), dtype=object)
    r = len(idx)
    q = tuple(Fraction(products[i, i]) for i in range(r))
    b = tuple(tuple(Fraction(products[i, j]) for j in range(r)) for i in range(r))
    return TorsionQuadraticModule(
        orders,
        q,
        b,
        label=label or f"A({getattr(lattice, 'name', 'L')})",
        dual_projection=v[:, idx] if idx else np.empty((n, 0), dtype=object),
        dual_lifts=lifts,
        dual_gram=gram,
    )


def milgram_signature(module: TorsionQuadraticModule) -> int:
    """
    Argument of the Gauss sum as a residue mod 8 (sum over primary parts).

    Each part's Gauss sum ``Σ exp(πi q(x))`` is compared with ``√|A_p|·ζ_8^σ``
    exactly, in the cyclotomic field of the ``2e``-th and 8th roots of unity.
    """
    total = 0
    for p in module.primes():
        part = module.primary_part(p)
        e = part.exponent
        m = lcm_list([2 * e, 8])
        phi = _cyclotomic(m)
        counts = np.bincount(part.element_q, minlength=2 * e)
        step = m // (2 * e)
        gauss = sympy.Poly.from_dict({(k * step,): int(c) for k, c in enumerate(counts) if c}, _X)
        root = _square_root(part.order, m)
        for sigma in range(8):
            if (gauss - root * _unit(sigma * m // 8)).rem(phi).is_zero:
                total += sigma
                break
        else:
            raise DegenerateFormError(f"{module.name}: Gauss sum of the {p}-part is not √|A|·ζ_8^σ")
    return total % 8


_X = sympy.Symbol("x")


@lru_cache(maxsize=None)
def _cyclotomic(m: int) -> sympy.Poly:
    return sympy.cyclotomic_poly(m, _X, polys=True)


def _unit(k: int) -> sympy.Poly:
    return sympy.Poly(_X**k, _X, domain="ZZ")


def _square_root(n: int, m: int) -> sympy.Poly:
    """Positive square root of a prime power ``n`` as a polynomial in ``ζ_m``."""
    ((p, k),) = sympy.factorint(n).items()
    half, odd = divmod(k, 2)
    root = sympy.Poly(p**half, _X, domain="ZZ")
    if not odd:
        return root
    if p == 2:
        # ζ_8 + ζ_8^-1
        return root * (_unit(m // 8) + _unit(7 * m // 8))
    gauss = sum((legendre_symbol(a, p) * _unit(a * m // p) for a in range(1, p)), sympy.Poly(0, _X, domain="ZZ"))
    if p % 4 == 3:
        # the quadratic Gauss sum is i·√p here
        gauss = -_unit(m // 4) * gauss
    return (root * gauss).rem(_cyclotomic(m))


def elements_with(
    module: TorsionQuadraticModule,
    order: int,
    square: Any,
    budget: int | None = None,
) -> list[FqmElement]:
    """Every element of the given order and square (mod 2)."""
    limit = MAX_GROUP_ORDER if budget is None else budget
    if module.order > limit:
        raise BudgetExceededError(f"{module.name} has {module.order} elements", limit)
    target = _mod(_frac(square), 2)
    e = module.exponent
    scaled = target * e
    if scaled.denominator != 1:
        return []
    mask = (module.element_orders == order) & (module.element_q == int(scaled) % (2 * e))
    return [module.element(row) for row in module.elements[mask]]
