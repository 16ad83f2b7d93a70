"""Products of elliptic curves with imaginary quadratic (or trivial) CM.

An endomorphism is an n×n matrix over the endomorphism orders, block-diagonal
across distinct curves.  Its pullback on H^1 is the 2n×2n rational matrix built
from the 2×2 regular representation ``u + v*ω -> u*I + v*C`` of each entry,
where ``C`` is the companion matrix of ``x^2 - t*x + d``.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional, Sequence

from ._linalg import DomainMatrix, frac, matrix
from .errors import InputError
from .exterior import CohomologyModel, exterior_power_matrix

Element = tuple[int, int]


@dataclass(frozen=True)
class EndOrder:
    """``Z`` when ``quadratic`` is False, else ``Z[ω]`` with ``ω^2 = tω - d``."""

    quadratic: bool = False
    t: int = 0
    d: int = 0

    def __post_init__(self):
        if self.quadratic and self.t * self.t - 4 * self.d >= 0:
            raise InputError(
                f"order with t={self.t}, d={self.d} is not imaginary quadratic "
                f"(t^2 - 4d = {self.t * self.t - 4 * self.d} >= 0)"
            )

    @classmethod
    def integers(cls) -> "EndOrder":
        return cls()

    @classmethod
    def cm(cls, t: int, d: int) -> "EndOrder":
        return cls(True, t, d)

    @property
    def rank(self) -> int:
        return 2 if self.quadratic else 1

    def multiply(self, x: Element, y: Element) -> Element:
        u1, v1 = x
        u2, v2 = y
        return (u1 * u2 - self.d * v1 * v2, u1 * v2 + u2 * v1 + self.t * v1 * v2)

    def norm(self, x: Element) -> int:
        u, v = x
        return u * u + self.t * u * v + self.d * v * v

    def trace(self, x: Element) -> int:
        u, v = x
        return 2 * u + self.t * v

    def representation(self, x: Element) -> list[list[int]]:
        """2×2 integer matrix of multiplication by ``x`` on H^1 of the curve."""
        u, v = x
        if v and not self.quadratic:
            raise InputError(f"element {u}+{v}ω used on a curve with End = Z")
        return [[u, -self.d * v], [v, u + self.t * v]]

    def __str__(self):
        return f"Z[ω], ω²={self.t}ω-{self.d}" if self.quadratic else "Z"


@dataclass(frozen=True)
class Factor:
    curve_id: str
    multiplicity: int
    order: EndOrder = EndOrder()

    def __post_init__(self):
        if self.multiplicity < 1:
            raise InputError(f"multiplicity of {self.curve_id!r} must be positive")


@dataclass(frozen=True)
class AbelianVariety:
    """Product of powers of pairwise non-isogenous elliptic curves."""

    factors: tuple[Factor, ...]

    def __post_init__(self):
        factors = tuple(self.factors)
        if not factors:
            raise InputError("an abelian variety needs at least one factor")
        ids = [f.curve_id for f in factors]
        if len(set(ids)) != len(ids):
            raise InputError(f"duplicate curve ids in {ids}")
        object.__setattr__(self, "factors", factors)

    @classmethod
    def power(cls, multiplicity: int, order: EndOrder = EndOrder(), curve_id: str = "E"):
        return cls((Factor(curve_id, multiplicity, order),))

    @property
    def n(self) -> int:
        return sum(f.multiplicity for f in self.factors)

    @cached_property
    def coordinates(self) -> tuple[int, ...]:
        """Factor index of every coordinate, in order."""
        return tuple(k for k, f in enumerate(self.factors) for _ in range(f.multiplicity))

    def order_of(self, coordinate: int) -> EndOrder:
        return self.factors[self.coordinates[coordinate]].order

    def same_curve(self, p: int, q: int) -> bool:
        return self.coordinates[p] == self.coordinates[q]

    @cached_property
    def cohomology(self) -> CohomologyModel:
        return CohomologyModel(self.n, allow_large=True)

    def describe(self) -> str:
        return " × ".join(
            f"{f.curve_id}^{f.multiplicity}" if f.multiplicity > 1 else f.curve_id
            for f in self.factors
        )


@dataclass(frozen=True)
class Endomorphism:
    """An endomorphism of ``variety`` as a matrix of order elements ``(u, v)``.

    Coordinate ``i`` of the image is ``Σ_j entries[i][j] · x_j``.
    """

    variety: AbelianVariety
    entries: tuple[tuple[Element, ...], ...]

    def __post_init__(self):
        n = self.variety.n
        rows = tuple(tuple((int(u), int(v)) for u, v in row) for row in self.entries)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise InputError(f"endomorphism matrix must be {n}×{n}")
        for i in range(n):
            for j in range(n):
                u, v = rows[i][j]
                if not self.variety.same_curve(i, j):
                    if u or v:
                        raise InputError(
                            f"entry ({i}, {j}) links non-isogenous curves but is nonzero"
                        )
                elif v and not self.variety.order_of(i).quadratic:
                    raise InputError(f"entry ({i}, {j}) has ω-part on a curve with End = Z")
        object.__setattr__(self, "entries", rows)

    @classmethod
    def identity(cls, variety: AbelianVariety) -> "Endomorphism":
        return multiplication_map(1, variety)

    @classmethod
    def diagonal(cls, variety: AbelianVariety, elements: Sequence[Element]) -> "Endomorphism":
        n = variety.n
        return cls(variety, tuple(
            tuple(tuple(elements[i]) if i == j else (0, 0) for j in range(n)) for i in range(n)
        ))

    @classmethod
    def from_integers(cls, variety: AbelianVariety, rows: Iterable[Iterable[int]]):
        return cls(variety, tuple(tuple((x, 0) for x in row) for row in rows))

    def __matmul__(self, other: "Endomorphism") -> "Endomorphism":
        """Composition ``self ∘ other`` (apply ``other`` first)."""
        if other.variety != self.variety:
            raise InputError("cannot compose endomorphisms of different varieties")
        n = self.variety.n
        out = []
        for i in range(n):
            order = self.variety.order_of(i)
            row = []
            for j in range(n):
                u = v = 0
                if self.variety.same_curve(i, j):
                    for k in range(n):
                        if self.variety.same_curve(i, k):
                            pu, pv = order.multiply(self.entries[i][k], other.entries[k][j])
                            u += pu
                            v += pv
                row.append((u, v))
            out.append(tuple(row))
        return Endomorphism(self.variety, tuple(out))

    def __pow__(self, m: int) -> "Endomorphism":
        if m < 0:
            raise InputError("negative powers are not endomorphisms")
        result = Endomorphism.identity(self.variety)
        for _ in range(m):
            result = self @ result
        return result

    @property
    def is_identity(self) -> bool:
        return self == Endomorphism.identity(self.variety)

    @cached_property
    def pullback(self) -> DomainMatrix:
        return _realize(self)

    @cached_property
    def degree(self) -> Fraction:
        return frac(self.pullback.det())

    @property
    def is_isogeny(self) -> bool:
        return self.degree != 0

    def __repr__(self):
        def fmt(x):
            u, v = x
            return str(u) if not v else f"{u}{v:+d}ω"
        body = "; ".join(", ".join(fmt(x) for x in row) for row in self.entries)
        return f"Endomorphism([{body}])"


def _realize(f: Endomorphism) -> DomainMatrix:
    n = f.variety.n
    rows = [[0] * (2 * n) for _ in range(2 * n)]
    for i in range(n):
        order = f.variety.order_of(i)
        for j in range(n):
            x = f.entries[i][j]
            if x == (0, 0):
                continue
            block = order.representation(x)
            # block transpose: pr_i^* pulls back to Σ_j pr_j^* ∘ (f_ij)^*
            for r in range(2):
                for c in range(2):
                    rows[2 * j + r][2 * i + c] = block[r][c]
    return matrix(rows)


def realize_pullback(f: Endomorphism) -> DomainMatrix:
    """The 2n×2n rational matrix of f^* on H^1; ``realize(f∘g) = realize(g)·realize(f)``."""
    return f.pullback


def multiplication_map(m: int, variety: AbelianVariety) -> Endomorphism:
    return Endomorphism.diagonal(variety, [(m, 0)] * variety.n)


def isogeny_degree(f: Endomorphism) -> Fraction:
    return f.degree


def is_polarized(f: Endomorphism) -> Optional[Fraction]:
    """Return q with f^*θ = qθ, or None if θ is not an eigenvector."""
    model = f.variety.cohomology
    image = model.apply(exterior_power_matrix(f.pullback, 2), model.theta, 2)
    theta = model.theta.component(2)
    vec = image.component(2)
    q = vec[theta.index(1)]
    if all(x == q * y for x, y in zip(vec, theta)):
        return q
    return None
