"""Exterior algebra model of the cohomology ring of an abelian variety.

H^i of an n-dimensional abelian variety is Λ^i H^1 with H^1 of rank 2n.  The
basis of H^1 is ``a_1, b_1, ..., a_n, b_n`` stored as the indices
``1, 2, ..., 2n`` (``a_j = 2j - 1``, ``b_j = 2j``).  A basis of H^i is the
lexicographically ordered list of i-element index subsets, and the orientation
``a_1∧b_1∧...∧a_n∧b_n`` integrates to 1.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from itertools import combinations
from math import comb
from typing import Mapping

from ._linalg import QQ, DomainMatrix, column, column_entries, frac, matrix, qq
from .errors import InputError, NotIsogenyError

MAX_DIMENSION = 4

BasisIndex = tuple[int, ...]


@lru_cache(maxsize=None)
def basis(rank: int, degree: int) -> tuple[BasisIndex, ...]:
    """Lexicographically ordered basis of Λ^degree of a rank-``rank`` space."""
    return tuple(combinations(range(1, rank + 1), degree))


@lru_cache(maxsize=None)
def _positions(rank: int, degree: int) -> dict[BasisIndex, int]:
    return {s: k for k, s in enumerate(basis(rank, degree))}


def _merge_sign(left: BasisIndex, right: BasisIndex) -> int:
    # parity of the shuffle sorting left + right
    inversions = sum(1 for x in left for y in right if x > y)
    return -1 if inversions % 2 else 1


@lru_cache(maxsize=None)
def _product_table(rank: int, p: int, q: int) -> dict[tuple[int, int], tuple[int, int]]:
    """(position in Λ^p, position in Λ^q) -> (position in Λ^{p+q}, sign)."""
    target = _positions(rank, p + q)
    table = {}
    for i, left in enumerate(basis(rank, p)):
        for j, right in enumerate(basis(rank, q)):
            if set(left) & set(right):
                continue
            merged = tuple(sorted(left + right))
            table[(i, j)] = (target[merged], _merge_sign(left, right))
    return table


@dataclass(frozen=True)
class GradedClass:
    """A cohomology class as exact coefficient vectors per degree.

    Degrees missing from ``parts`` are zero.
    """

    rank: int
    parts: Mapping[int, tuple[Fraction, ...]]

    def __post_init__(self):
        clean = {}
        for deg, vec in self.parts.items():
            if not 0 <= deg <= self.rank:
                raise InputError(f"degree {deg} outside [0, {self.rank}]")
            vec = tuple(Fraction(v) for v in vec)
            if len(vec) != comb(self.rank, deg):
                raise InputError(
                    f"degree {deg} vector has length {len(vec)}, expected {comb(self.rank, deg)}"
                )
            if any(vec):
                clean[deg] = vec
        object.__setattr__(self, "parts", dict(sorted(clean.items())))

    def __hash__(self):
        return hash((self.rank, tuple(self.parts.items())))

    @classmethod
    def zero(cls, rank: int) -> "GradedClass":
        return cls(rank, {})

    @classmethod
    def monomial(cls, rank: int, indices, coefficient=1) -> "GradedClass":
        """Coefficient times e_{i_1}∧...∧e_{i_k}; indices need not be sorted."""
        indices = tuple(indices)
        if any(not 1 <= i <= rank for i in indices):
            raise InputError(f"basis index out of range in {indices}")
        if len(set(indices)) < len(indices):
            return cls.zero(rank)
        order = sorted(range(len(indices)), key=lambda k: indices[k])
        inversions = sum(
            1 for x in range(len(order)) for y in range(x + 1, len(order)) if order[x] > order[y]
        )
        sign = -1 if inversions % 2 else 1
        key = tuple(sorted(indices))
        deg = len(key)
        vec = [Fraction(0)] * comb(rank, deg)
        vec[_positions(rank, deg)[key]] = sign * Fraction(coefficient)
        return cls(rank, {deg: tuple(vec)})

    @classmethod
    def from_vector(cls, rank: int, degree: int, values) -> "GradedClass":
        return cls(rank, {degree: tuple(values)})

    def component(self, degree: int) -> tuple[Fraction, ...]:
        return self.parts.get(degree, (Fraction(0),) * comb(self.rank, degree))

    @property
    def degrees(self) -> tuple[int, ...]:
        return tuple(self.parts)

    def is_homogeneous(self) -> bool:
        return len(self.parts) <= 1

    def _check(self, other: "GradedClass"):
        if not isinstance(other, GradedClass):
            return NotImplemented
        if other.rank != self.rank:
            raise InputError(f"classes from models of rank {self.rank} and {other.rank}")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        parts = dict(self.parts)
        for deg, vec in other.parts.items():
            mine = parts.get(deg)
            parts[deg] = vec if mine is None else tuple(x + y for x, y in zip(mine, vec))
        return GradedClass(self.rank, parts)

    def __neg__(self):
        return GradedClass(self.rank, {d: tuple(-x for x in v) for d, v in self.parts.items()})

    def __sub__(self, other):
        return self + (-other)

    def __rmul__(self, scalar):
        scalar = Fraction(scalar)
        return GradedClass(self.rank, {d: tuple(scalar * x for x in v) for d, v in self.parts.items()})

    def __xor__(self, other):
        return wedge(self, other)

    def __repr__(self):
        terms = []
        for deg, vec in self.parts.items():
            for idx, c in zip(basis(self.rank, deg), vec):
                if c:
                    terms.append(f"{c}*e{list(idx)}")
        return "GradedClass(" + (" + ".join(terms) or "0") + ")"


def wedge(a: GradedClass, b: GradedClass) -> GradedClass:
    """Cup product of two classes in the exterior algebra."""
    if a.rank != b.rank:
        raise InputError(f"cannot wedge classes of rank {a.rank} and {b.rank}")
    rank = a.rank
    out: dict[int, list[Fraction]] = {}
    for p, u in a.parts.items():
        for q, v in b.parts.items():
            if p + q > rank:
                continue
            table = _product_table(rank, p, q)
            acc = out.setdefault(p + q, [Fraction(0)] * comb(rank, p + q))
            for i, x in enumerate(u):
                if not x:
                    continue
                for j, y in enumerate(v):
                    if not y:
                        continue
                    hit = table.get((i, j))
                    if hit is not None:
                        k, sign = hit
                        acc[k] += sign * x * y
    return GradedClass(rank, {d: tuple(v) for d, v in out.items()})


def integrate(a: GradedClass) -> Fraction:
    """Coefficient of the oriented top class ``a_1∧b_1∧...∧a_n∧b_n``."""
    top = a.parts.get(a.rank)
    return top[0] if top else Fraction(0)


def poincare_pairing(a: GradedClass, b: GradedClass) -> Fraction:
    if not (a.is_homogeneous() and b.is_homogeneous()):
        raise InputError("Poincaré pairing needs homogeneous classes")
    da = a.degrees[0] if a.degrees else None
    db = b.degrees[0] if b.degrees else None
    if da is not None and db is not None and da + db != a.rank:
        raise InputError(f"degrees {da} and {db} are not complementary in rank {a.rank}")
    return integrate(wedge(a, b))


def poincare_gram(rank: int, degree: int) -> DomainMatrix:
    """Gram matrix of the monomial bases of Λ^degree × Λ^(rank - degree)."""
    comp = rank - degree
    left = basis(rank, degree)
    right = _positions(rank, comp)
    size = len(left)
    rows = [[0] * len(right) for _ in range(size)]
    full = tuple(range(1, rank + 1))
    for i, idx in enumerate(left):
        rest = tuple(x for x in full if x not in idx)
        rows[i][right[rest]] = _merge_sign(idx, rest)
    return matrix(rows) if size else matrix([[]])


def exterior_power_matrix(m: DomainMatrix, degree: int) -> DomainMatrix:
    """The degree-th compound matrix: entry (I, J) is the minor on rows I, cols J."""
    rows, cols = m.shape
    if rows != cols:
        raise InputError("exterior power of a non-square matrix")
    if not 0 <= degree <= rows:
        raise InputError(f"degree {degree} outside [0, {rows}]")
    entries = m.to_list()
    minors: dict[tuple[BasisIndex, BasisIndex], object] = {((), ()): QQ(1)}
    # Laplace expansion along the first row of each minor, built up by size
    for size in range(1, degree + 1):
        row_sets = list(combinations(range(rows), size))
        col_sets = list(combinations(range(cols), size))
        fresh = {}
        for rs in row_sets:
            r0, rest = rs[0], rs[1:]
            for cs in col_sets:
                total = QQ(0)
                for t, c in enumerate(cs):
                    x = entries[r0][c]
                    if not x:
                        continue
                    sub = minors[(rest, cs[:t] + cs[t + 1:])]
                    if t % 2:
                        total -= x * sub
                    else:
                        total += x * sub
                fresh[(rs, cs)] = total
        minors = fresh
    row_sets = list(combinations(range(rows), degree))
    out = [[minors[(rs, cs)] for cs in row_sets] for rs in row_sets]
    return DomainMatrix(out, (len(row_sets), len(row_sets)), QQ)


def pushforward_matrix(m: DomainMatrix, degree: int) -> DomainMatrix:
    """Action of f_* on H^degree for an isogeny with f^*|H^1 = m.

    Equal to det(m) * (Λ^degree m)^{-1}, so f_* f^* = deg(f) on every degree.
    """
    det = m.det()
    if not det:
        raise NotIsogenyError("not an isogeny: H^1 action is singular")
    return exterior_power_matrix(m.inv(), degree) * det


class CohomologyModel:
    """H^•(X) for an n-dimensional abelian variety X.

    ``theta`` is the ample class ``Σ a_j∧b_j``; ``∫θ^n = n!``.
    """

    def __init__(self, n: int, *, allow_large: bool = False):
        if n < 1:
            raise InputError("dimension must be at least 1")
        if n > MAX_DIMENSION and not allow_large:
            raise InputError(f"dimension {n} exceeds {MAX_DIMENSION}; pass allow_large=True")
        self.n = n
        self.rank = 2 * n

    def __repr__(self):
        return f"CohomologyModel(n={self.n})"

    def __eq__(self, other):
        return isinstance(other, CohomologyModel) and other.n == self.n

    def __hash__(self):
        return hash(("CohomologyModel", self.n))

    def basis(self, degree: int) -> tuple[BasisIndex, ...]:
        return basis(self.rank, degree)

    def dim(self, degree: int) -> int:
        return comb(self.rank, degree)

    @property
    def betti(self) -> tuple[int, ...]:
        return tuple(self.dim(i) for i in range(self.rank + 1))

    def monomial(self, *indices, coefficient=1) -> GradedClass:
        return GradedClass.monomial(self.rank, indices, coefficient)

    def a(self, j: int) -> GradedClass:
        return self.monomial(2 * j - 1)

    def b(self, j: int) -> GradedClass:
        return self.monomial(2 * j)

    def one(self) -> GradedClass:
        return GradedClass(self.rank, {0: (Fraction(1),)})

    @cached_property
    def orientation(self) -> GradedClass:
        return self.monomial(*range(1, self.rank + 1))

    @cached_property
    def theta(self) -> GradedClass:
        total = GradedClass.zero(self.rank)
        for j in range(1, self.n + 1):
            total = total + self.monomial(2 * j - 1, 2 * j)
        return total

    @lru_cache(maxsize=None)
    def theta_power(self, k: int) -> GradedClass:
        if k == 0:
            return self.one()
        return wedge(self.theta_power(k - 1), self.theta)

    def gram(self, degree: int) -> DomainMatrix:
        return poincare_gram(self.rank, degree)

    def apply(self, m: DomainMatrix, cls: GradedClass, degree: int) -> GradedClass:
        """Apply a matrix acting on Λ^degree to the degree component of ``cls``."""
        image = m.matmul(column(cls.component(degree)))
        return GradedClass.from_vector(self.rank, degree, column_entries(image))

    def pairing_vector(self, cls: GradedClass, degree: int) -> tuple[Fraction, ...]:
        """Values ⟨e_I, cls⟩ for the monomial basis e_I of Λ^degree."""
        comp = self.rank - degree
        g = self.gram(degree).to_list()
        vec = cls.component(comp)
        return tuple(sum((frac(g[i][j]) * vec[j] for j in range(len(vec)) if vec[j]), Fraction(0))
                     for i in range(len(g)))
