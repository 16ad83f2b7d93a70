"""Divisor-generated model of the numerical groups N^k and the alg ⊕ tr split.

N^k is modelled as the span of k-fold products of the classical divisor
generators of a product of elliptic curves (fibre classes and graph divisors
``{x_p = φ(x_q)}``), modulo the kernel of the cup pairing against the
complementary products.  On a general abelian variety this can miss exotic
algebraic classes; when a pullback image leaves the span it is appended and
the event is logged.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations_with_replacement
from typing import Sequence

from ._linalg import DomainMatrix, column, column_entries, frac, independent_rows, matrix, solve_left
from .abelian import AbelianVariety
from .correspondence import Correspondence, GradedAction, graded_action
from .errors import InputError
from .exterior import GradedClass, integrate, wedge

logger = logging.getLogger(__name__)


def _kernel_divisor(variety: AbelianVariety, p: int, q: int, phi) -> GradedClass:
    """Class of {x : x_p = φ(x_q)} as s^*[pt] for s = pr_p - φ∘pr_q."""
    model = variety.cohomology
    rep = variety.order_of(q).representation(phi)
    pulled = []
    for r in range(2):
        # s^*e_r = pr_p^* e_r - pr_q^*(φ^* e_r)
        cls = model.monomial(2 * p + r + 1)
        for s in range(2):
            if rep[s][r]:
                cls = cls - rep[s][r] * model.monomial(2 * q + s + 1)
        pulled.append(cls)
    return wedge(pulled[0], pulled[1])


@lru_cache(maxsize=None)
def divisor_generators(variety: AbelianVariety) -> tuple[GradedClass, ...]:
    """Fibre classes of every coordinate, then graph divisors of 1 and ω between
    ordered pairs of distinct coordinates on the same curve."""
    model = variety.cohomology
    gens = [model.monomial(2 * j + 1, 2 * j + 2) for j in range(variety.n)]
    for p in range(variety.n):
        for q in range(variety.n):
            if p == q or not variety.same_curve(p, q):
                continue
            elements = [(1, 0)]
            if variety.order_of(q).quadratic:
                elements.append((0, 1))
            for phi in elements:
                gens.append(_kernel_divisor(variety, p, q, phi))
    return tuple(gens)


def _span_basis(classes: Sequence[GradedClass], degree: int) -> list[GradedClass]:
    keep = independent_rows([c.component(degree) for c in classes])
    return [classes[i] for i in keep]


@lru_cache(maxsize=None)
def _products(variety: AbelianVariety, k: int) -> tuple[GradedClass, ...]:
    model = variety.cohomology
    if k == 0:
        return (model.one(),)
    gens = _span_basis(divisor_generators(variety), 2)
    out = []
    for combo in combinations_with_replacement(range(len(gens)), k):
        cls = gens[combo[0]]
        for idx in combo[1:]:
            cls = wedge(cls, gens[idx])
        out.append(cls)
    return tuple(_span_basis(out, 2 * k))


@dataclass(frozen=True)
class NumericalLattice:
    """Model of N^k: spanning classes in H^2k paired against classes in H^(2n-2k)."""

    variety: AbelianVariety
    k: int
    spanning_classes: tuple[GradedClass, ...]
    dual_classes: tuple[GradedClass, ...]
    gram: DomainMatrix
    quotient_basis: tuple[int, ...]
    saturation_events: tuple[str, ...] = field(default=())

    @property
    def dimension(self) -> int:
        return len(self.quotient_basis)

    @property
    def basis_classes(self) -> tuple[GradedClass, ...]:
        return tuple(self.spanning_classes[i] for i in self.quotient_basis)

    @property
    def quotient_gram(self) -> DomainMatrix:
        rows = self.gram.to_list()
        return DomainMatrix([rows[i] for i in self.quotient_basis], (self.dimension, self.gram.shape[1]), self.gram.domain)

    def pairing_row(self, cls: GradedClass) -> DomainMatrix:
        return matrix([[integrate(wedge(cls, d)) for d in self.dual_classes]])

    def coordinates(self, cls: GradedClass):
        """Coordinates of ``cls`` in the quotient basis, or None if outside the span."""
        x = solve_left(self.quotient_gram, self.pairing_row(cls))
        return None if x is None else tuple(frac(v) for v in x.to_list()[0])


def _assemble(variety, k, spanning, dual, events=()) -> NumericalLattice:
    model = variety.cohomology
    gram_rows = [[integrate(wedge(s, d)) for d in dual] for s in spanning]
    if not dual:
        gram_rows = [[] for _ in spanning]
    basis = tuple(independent_rows(gram_rows)) if dual else ()
    gram = matrix(gram_rows) if dual else DomainMatrix.zeros((len(spanning), 0), model.gram(0).domain)
    return NumericalLattice(variety, k, tuple(spanning), tuple(dual), gram, basis, tuple(events))


def build_Nk(variety: AbelianVariety, k: int) -> NumericalLattice:
    if not 0 <= k <= variety.n:
        raise InputError(f"k={k} outside [0, {variety.n}]")
    return _assemble(variety, k, _products(variety, k), _products(variety, variety.n - k))


@dataclass(frozen=True)
class InducedAction:
    matrix: DomainMatrix
    lattice: NumericalLattice

    @property
    def saturation_events(self) -> tuple[str, ...]:
        return self.lattice.saturation_events


def induced_action(c: Correspondence | GradedAction, lattice: NumericalLattice) -> InducedAction:
    """Matrix of c^* on the lattice's quotient basis, columns = images.

    Images that leave the span are appended to the spanning set (in basis
    order) and the quotient rebuilt; each such event is recorded.
    """
    action = c if isinstance(c, GradedAction) else graded_action(c)
    degree = 2 * lattice.k
    model = action.model
    block = action[degree]
    events = list(lattice.saturation_events)
    while True:
        images = [model.apply(block, e, degree) for e in lattice.basis_classes]
        missing = [img for img in images if lattice.coordinates(img) is None]
        if not missing:
            break
        spanning = list(lattice.spanning_classes)
        for img in missing:
            spanning.append(img)
            events.append(f"N^{lattice.k}: pullback image outside divisor-generated span; "
                          f"span grown to {len(spanning)} classes")
            logger.info(events[-1])
        lattice = _assemble(lattice.variety, lattice.k, spanning, lattice.dual_classes, events)
    cols = [lattice.coordinates(img) for img in images]
    dim = lattice.dimension
    rows = [[cols[j][i] for j in range(dim)] for i in range(dim)]
    mat = matrix(rows) if dim else DomainMatrix.zeros((0, 0), block.domain)
    return InducedAction(mat, lattice)


def lattice_degree(action: GradedAction, lattice: NumericalLattice) -> Fraction:
    """deg_k computed inside the lattice: ⟨N·[θ^k], θ^(n-k)⟩."""
    model = action.model
    k = lattice.k
    induced = induced_action(action, lattice)
    lat = induced.lattice
    theta_k = lat.coordinates(model.theta_power(k))
    image = column_entries(induced.matrix.matmul(column(theta_k)))
    pairings = [integrate(wedge(e, model.theta_power(model.n - k))) for e in lat.basis_classes]
    return sum((x * y for x, y in zip(image, pairings)), Fraction(0))


@dataclass(frozen=True)
class AlgTrSplit:
    k: int
    algebraic_subspace: tuple[tuple[Fraction, ...], ...]
    transcendental_subspace: tuple[tuple[Fraction, ...], ...]
    ambient_dimension: int
    direct: bool

    @property
    def succeeded(self) -> bool:
        return self.direct and (
            len(self.algebraic_subspace) + len(self.transcendental_subspace) == self.ambient_dimension
        )


def alg_tr_split(variety: AbelianVariety, k: int) -> AlgTrSplit:
    """H^2k = H^2k_alg ⊕ (H^(2n-2k)_alg)^⊥, checked exactly."""
    model = variety.cohomology
    degree = 2 * k
    alg = [c.component(degree) for c in build_Nk(variety, k).spanning_classes]
    comp = build_Nk(variety, variety.n - k).spanning_classes
    if comp:
        pair = matrix([model.pairing_vector(c, degree) for c in comp])
        kernel = pair.nullspace().to_list()
    else:
        kernel = []
    tr = [tuple(frac(v) for v in row) for row in kernel]
    ambient = model.dim(degree)
    stacked = [list(v) for v in alg] + [list(v) for v in tr]
    rank = len(independent_rows(stacked)) if stacked else 0
    return AlgTrSplit(k, tuple(tuple(v) for v in alg), tuple(tr), ambient, rank == len(alg) + len(tr))
