"""Effective finite correspondences as nonnegative combinations of words.

A word ``(A_1, ..., A_m)`` stands for the composite correspondence
``A_1 ∘ ... ∘ A_m``; ``A_m`` is applied first.  Atoms are graphs ``Γ_f`` of
endomorphisms and transposed graphs ``Γ_g^T`` of isogenies.  Words are kept in
a canonical form:

* ``Γ_ψ ∘ Γ_φ`` fuses to ``Γ_{ψ∘φ}``;
* ``Γ_g^T ∘ Γ_g`` collapses to ``deg(g) · Δ``;
* identity graphs are dropped from longer words, and ``Γ_1^T = Δ``.

Everything numerical factors through the graded pullback action, so no cycle is
ever materialised.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from ._linalg import (
    DomainMatrix,
    frac,
    identity,
    matrix,
    qq,
    scalar_matrix,
    trace,
    zeros,
)
from .abelian import AbelianVariety, Endomorphism, multiplication_map
from .errors import InputError, NotIsogenyError
from .exterior import CohomologyModel, GradedClass, exterior_power_matrix, integrate, pushforward_matrix, wedge

GRAPH = "graph"
TRANSPOSE = "transpose"


@dataclass(frozen=True)
class Atom:
    kind: str
    endo: Endomorphism

    def __post_init__(self):
        if self.kind not in (GRAPH, TRANSPOSE):
            raise InputError(f"unknown atom kind {self.kind!r}")
        if self.kind == TRANSPOSE:
            if not self.endo.is_isogeny:
                raise NotIsogenyError("not a finite correspondence: transposed graph of a non-isogeny")
            if self.endo.is_identity:
                object.__setattr__(self, "kind", GRAPH)

    @property
    def sort_key(self):
        return (self.kind, self.endo.entries)

    def transposed(self) -> "Atom":
        if self.kind == GRAPH:
            if not self.endo.is_isogeny:
                raise NotIsogenyError("transpose not finite: graph of a non-isogeny")
            return Atom(TRANSPOSE, self.endo)
        return Atom(GRAPH, self.endo)

    def action(self, degree: int) -> DomainMatrix:
        return _atom_action(self, degree)

    def __repr__(self):
        return f"Γ({self.endo!r})" if self.kind == GRAPH else f"Γᵀ({self.endo!r})"


@lru_cache(maxsize=4096)
def _atom_action(atom: Atom, degree: int) -> DomainMatrix:
    m = atom.endo.pullback
    if atom.kind == GRAPH:
        return exterior_power_matrix(m, degree)
    return pushforward_matrix(m, degree)


Word = tuple[Atom, ...]


def canonical_word(atoms: Sequence[Atom], variety: AbelianVariety) -> tuple[Fraction, Word]:
    """Apply the fusion rules; return the accumulated scalar and reduced word."""
    scalar = Fraction(1)
    stack: list[Atom] = []
    for atom in atoms:
        if atom.kind == GRAPH and atom.endo.is_identity:
            continue
        stack.append(atom)
        while len(stack) >= 2:
            left, right = stack[-2], stack[-1]
            if left.kind == GRAPH and right.kind == GRAPH:
                fused = left.endo @ right.endo
                stack[-2:] = [] if fused.is_identity else [Atom(GRAPH, fused)]
            elif left.kind == TRANSPOSE and right.kind == GRAPH and left.endo == right.endo:
                scalar *= left.endo.degree
                stack[-2:] = []
            else:
                break
    if not stack:
        stack = [Atom(GRAPH, Endomorphism.identity(variety))]
    return scalar, tuple(stack)


@lru_cache(maxsize=4096)
def _word_action(word: Word, degree: int) -> DomainMatrix:
    # (A_1 ∘ ... ∘ A_m)^* = A_m^* ∘ ... ∘ A_1^*
    result = word[0].action(degree)
    for atom in word[1:]:
        result = atom.action(degree).matmul(result)
    return result


class GradedAction:
    """One square matrix per cohomological degree 0..2n, acting on column vectors."""

    __slots__ = ("model", "matrices")

    def __init__(self, model: CohomologyModel, matrices: Sequence[DomainMatrix]):
        if len(matrices) != model.rank + 1:
            raise InputError(f"expected {model.rank + 1} degree blocks, got {len(matrices)}")
        for i, m in enumerate(matrices):
            if m.shape != (model.dim(i), model.dim(i)):
                raise InputError(f"degree {i} block has shape {m.shape}")
        self.model = model
        self.matrices = tuple(matrices)

    @classmethod
    def identity(cls, model: CohomologyModel) -> "GradedAction":
        return cls(model, [identity(model.dim(i)) for i in range(model.rank + 1)])

    @classmethod
    def scaling(cls, model: CohomologyModel, r) -> "GradedAction":
        """γ_r: multiplication by r^i on H^i."""
        r = Fraction(r)
        return cls(model, [scalar_matrix(r**i, model.dim(i)) for i in range(model.rank + 1)])

    @classmethod
    def zero(cls, model: CohomologyModel) -> "GradedAction":
        return cls(model, [zeros(model.dim(i), model.dim(i)) for i in range(model.rank + 1)])

    def __getitem__(self, degree: int) -> DomainMatrix:
        return self.matrices[degree]

    def __len__(self):
        return len(self.matrices)

    def __eq__(self, other):
        if not isinstance(other, GradedAction):
            return NotImplemented
        return self.model == other.model and self.matrices == other.matrices

    def __hash__(self):
        return hash(tuple(str(m.to_list()) for m in self.matrices))

    def __add__(self, other: "GradedAction") -> "GradedAction":
        return GradedAction(self.model, [a + b for a, b in zip(self.matrices, other.matrices)])

    def __sub__(self, other: "GradedAction") -> "GradedAction":
        return GradedAction(self.model, [a - b for a, b in zip(self.matrices, other.matrices)])

    def __rmul__(self, scalar) -> "GradedAction":
        s = qq(Fraction(scalar))
        return GradedAction(self.model, [m * s for m in self.matrices])

    def __matmul__(self, other: "GradedAction") -> "GradedAction":
        """Degreewise matrix product ``self[i] · other[i]``."""
        return GradedAction(self.model, [a.matmul(b) for a, b in zip(self.matrices, other.matrices)])

    def trace(self, degree: int) -> Fraction:
        return trace(self.matrices[degree])

    def traces(self) -> tuple[Fraction, ...]:
        return tuple(trace(m) for m in self.matrices)

    def power(self, m: int) -> "GradedAction":
        return GradedAction(self.model, [a**m for a in self.matrices])

    def apply(self, cls: GradedClass) -> GradedClass:
        total = GradedClass.zero(self.model.rank)
        for deg in cls.degrees:
            total = total + self.model.apply(self.matrices[deg], cls, deg)
        return total

    def poincare_adjoint(self) -> "GradedAction":
        """The action of the transposed correspondence, via Poincaré duality.

        On H^i it is the adjoint of the H^(2n-i) block under the cup pairing.
        """
        model = self.model
        out = []
        for i in range(model.rank + 1):
            g = model.gram(i)
            a = self.matrices[model.rank - i]
            out.append(g.transpose().inv().matmul(a.transpose()).matmul(g.transpose()))
        return GradedAction(model, out)

    def __repr__(self):
        return f"GradedAction(n={self.model.n}, dims={[m.shape[0] for m in self.matrices]})"


class Correspondence:
    """A nonnegative rational combination of canonical words."""

    __slots__ = ("variety", "terms")

    def __init__(self, variety: AbelianVariety, terms: Mapping[Sequence[Atom], Fraction] | Iterable = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        merged: dict[Word, Fraction] = {}
        for atoms, coeff in items:
            coeff = Fraction(coeff)
            if coeff < 0:
                raise InputError("effective correspondences need nonnegative coefficients")
            for atom in atoms:
                if atom.endo.variety != variety:
                    raise InputError("atom belongs to a different variety")
            scalar, word = canonical_word(tuple(atoms), variety)
            merged[word] = merged.get(word, Fraction(0)) + scalar * coeff
        self.variety = variety
        self.terms: tuple[tuple[Word, Fraction], ...] = tuple(
            sorted(((w, c) for w, c in merged.items() if c), key=lambda t: [a.sort_key for a in t[0]])
        )

    @property
    def model(self) -> CohomologyModel:
        return self.variety.cohomology

    def __eq__(self, other):
        if not isinstance(other, Correspondence):
            return NotImplemented
        return self.variety == other.variety and self.terms == other.terms

    def __hash__(self):
        return hash((self.variety, self.terms))

    def __add__(self, other: "Correspondence") -> "Correspondence":
        if other.variety != self.variety:
            raise InputError("cannot add correspondences on different varieties")
        return Correspondence(self.variety, list(self.terms) + list(other.terms))

    def __rmul__(self, scalar) -> "Correspondence":
        scalar = Fraction(scalar)
        return Correspondence(self.variety, [(w, scalar * c) for w, c in self.terms])

    def __matmul__(self, other: "Correspondence") -> "Correspondence":
        return compose(self, other)

    @property
    def T(self) -> "Correspondence":
        return transpose(self)

    @property
    def is_single_word(self) -> bool:
        return len(self.terms) == 1

    @property
    def is_transposable(self) -> bool:
        return all(a.kind == TRANSPOSE or a.endo.is_isogeny for w, _ in self.terms for a in w)

    def __repr__(self):
        parts = []
        for word, c in self.terms:
            body = "∘".join(repr(a) for a in word)
            parts.append(body if c == 1 else f"{c}·{body}")
        return " + ".join(parts) or "0"


def graph(f: Endomorphism) -> Correspondence:
    return Correspondence(f.variety, [((Atom(GRAPH, f),), 1)])


def transpose_graph(g: Endomorphism) -> Correspondence:
    return Correspondence(g.variety, [((Atom(TRANSPOSE, g),), 1)])


def delta(variety: AbelianVariety) -> Correspondence:
    return graph(Endomorphism.identity(variety))


def compose(g: Correspondence, f: Correspondence) -> Correspondence:
    """``g ∘ f``: apply f, then g.  Also the dynamical composition for finite correspondences."""
    if g.variety != f.variety:
        raise InputError("cannot compose correspondences on different varieties")
    terms = [(wg + wf, cg * cf) for wg, cg in g.terms for wf, cf in f.terms]
    return Correspondence(g.variety, terms)


def power(c: Correspondence, m: int) -> Correspondence:
    if m < 0:
        raise InputError("power needs m >= 0")
    result = delta(c.variety)
    for _ in range(m):
        result = compose(c, result)
    return result


def transpose(c: Correspondence) -> Correspondence:
    terms = [(tuple(a.transposed() for a in reversed(w)), coeff) for w, coeff in c.terms]
    return Correspondence(c.variety, terms)


def graded_action(c: Correspondence) -> GradedAction:
    model = c.model
    blocks = []
    for i in range(model.rank + 1):
        total = zeros(model.dim(i), model.dim(i))
        for word, coeff in c.terms:
            total = total + _word_action(word, i) * qq(coeff)
        blocks.append(total)
    return GradedAction(model, blocks)


def degrees_of_action(action: GradedAction) -> tuple[Fraction, ...]:
    """deg_i = ∫ f^*(θ^i) ∧ θ^(n-i) for i = 0..n."""
    model = action.model
    out = []
    for i in range(model.n + 1):
        pulled = model.apply(action[2 * i], model.theta_power(i), 2 * i)
        out.append(integrate(wedge(pulled, model.theta_power(model.n - i))))
    return tuple(out)


def degree_sequence(c: Correspondence) -> tuple[Fraction, ...]:
    return degrees_of_action(graded_action(c))


def total_degree(c: Correspondence) -> Fraction:
    n = c.variety.n
    return sum((comb(n, i) * d for i, d in enumerate(degree_sequence(c))), Fraction(0))


def supertrace(action: GradedAction) -> Fraction:
    return sum(((-1) ** i * action.trace(i) for i in range(len(action))), Fraction(0))


def lefschetz_number(c: Correspondence) -> Fraction:
    """c · Δ = Σ (-1)^i Tr(c^*|H^i)."""
    return supertrace(graded_action(c))


def intersect(f: Correspondence, g: Correspondence) -> Fraction:
    """f · g = Σ (-1)^i Tr((g^T ∘ f)^*|H^i); g must be transposable."""
    return lefschetz_number(compose(transpose(g), f))


def _split_ratio(r) -> tuple[int, int]:
    r = Fraction(r)
    if r <= 0:
        raise InputError(f"G_r needs r > 0, got {r}")
    return r.numerator, r.denominator


def gr_correspondence(variety: AbelianVariety, r) -> Correspondence:
    """G_r = n₂^(-2n) · Γ_[n₁] ∘ Γ_[n₂]^T for r = n₁/n₂ in lowest terms."""
    n1, n2 = _split_ratio(r)
    word = (Atom(GRAPH, multiplication_map(n1, variety)), Atom(TRANSPOSE, multiplication_map(n2, variety)))
    return Correspondence(variety, [(word, Fraction(1, n2 ** (2 * variety.n)))])


def apply_Gr(c: Correspondence, r) -> GradedAction:
    return graded_action(compose(gr_correspondence(c.variety, r), c))


def kunneth_projectors(variety: AbelianVariety, sample_radii: Sequence) -> list[GradedAction]:
    """Künneth projectors π_0..π_2n as rational combinations of the G_r actions."""
    model = variety.cohomology
    size = model.rank + 1
    radii = [Fraction(r) for r in sample_radii]
    if len(radii) != size:
        raise InputError(f"need exactly {size} radii, got {len(radii)}")
    if len(set(radii)) != size:
        raise InputError("singular Vandermonde system: radii must be pairwise distinct")
    for r in radii:
        _split_ratio(r)
    vander = matrix([[r**l for r in radii] for l in range(size)])
    # column i of V^{-1} holds the weights of γ_{r_j} in π_i
    weights = vander.inv().to_list()
    scalings = [graded_action(gr_correspondence(variety, r)) for r in radii]
    projectors = []
    for i in range(size):
        total = GradedAction.zero(model)
        for j in range(size):
            total = total + frac(weights[j][i]) * scalings[j]
        projectors.append(total)
    return projectors


def lieberman_pushforward(phi: Endomorphism, psi: Endomorphism, f: Correspondence) -> Correspondence:
    """(φ×ψ)_*(f) = Γ_ψ ∘ f ∘ Γ_φ^T."""
    return compose(graph(psi), compose(f, transpose_graph(phi)))
