"""Seeded generators for endomorphisms and effective finite correspondences.

Every sample draws from its own ``random.Random`` keyed by (seed, family,
index), so a sample does not depend on which other samples were drawn or in
what order.  Suites that share a family (ddc and dinh, for instance) see the
same correspondences.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Optional

from ..abelian import AbelianVariety, Endomorphism, is_polarized, multiplication_map
from ..correspondence import Atom, Correspondence, GRAPH, TRANSPOSE, graph
from ..errors import InputError

MAX_REJECTIONS = 1000


@dataclass(frozen=True)
class SuiteParams:
    samples: int = 100
    entry_bound: int = 3
    word_len: int = 2
    terms: int = 2
    coeff_set: tuple[Fraction, ...] = (Fraction(1), Fraction(2), Fraction(1, 2))
    m_max: int = 40
    tol: Fraction = Fraction(1, 10**9)
    rel_tol: Fraction = Fraction(1, 10**6)
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "coeff_set", tuple(Fraction(c) for c in self.coeff_set))
        object.__setattr__(self, "tol", Fraction(self.tol))
        object.__setattr__(self, "rel_tol", Fraction(self.rel_tol))
        checks = [
            (0 <= self.samples <= 100_000, "samples must be in [0, 100000]"),
            (1 <= self.entry_bound <= 20, "entry_bound must be in [1, 20]"),
            (1 <= self.word_len <= 6, "word_len must be in [1, 6]"),
            (1 <= self.terms <= 6, "terms must be in [1, 6]"),
            (bool(self.coeff_set) and all(c > 0 for c in self.coeff_set),
             "coeff_set must be non-empty and positive"),
            (8 <= self.m_max <= 400, "m_max must be in [8, 400]"),
            (0 < self.tol < 1, "tol must be in (0, 1)"),
            (0 < self.rel_tol < 1, "rel_tol must be in (0, 1)"),
            (1 <= self.workers <= 256, "workers must be in [1, 256]"),
        ]
        for ok, msg in checks:
            if not ok:
                raise InputError(f"parameter out of range: {msg}")

    def as_dict(self) -> dict:
        out = {}
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "workers":
                continue  # does not affect results
            if isinstance(value, tuple):
                value = [str(v) for v in value]
            elif isinstance(value, Fraction):
                value = str(value)
            out[f.name] = value
        return out


def sample_rng(seed: int, family: str, index: int) -> random.Random:
    return random.Random(f"{seed}/{family}/{index}")


def _element(rng: random.Random, order, bound: int):
    u = rng.randint(-bound, bound)
    v = rng.randint(-bound, bound) if order.quadratic else 0
    return (u, v)


def random_endomorphism(variety: AbelianVariety, rng: random.Random, bound: int,
                        isogeny: bool = True) -> Endomorphism:
    n = variety.n
    for _ in range(MAX_REJECTIONS):
        rows = []
        for i in range(n):
            order = variety.order_of(i)
            rows.append(tuple(
                _element(rng, order, bound) if variety.same_curve(i, j) else (0, 0) for j in range(n)
            ))
        f = Endomorphism(variety, tuple(rows))
        if not isogeny or f.is_isogeny:
            return f
    raise InputError(f"no isogeny found after {MAX_REJECTIONS} draws")


def random_word(variety: AbelianVariety, rng: random.Random, params: SuiteParams) -> tuple[Atom, ...]:
    length = rng.randint(1, params.word_len)
    return tuple(
        Atom(rng.choice((GRAPH, TRANSPOSE)), random_endomorphism(variety, rng, params.entry_bound))
        for _ in range(length)
    )


def random_single_word(variety: AbelianVariety, rng: random.Random, params: SuiteParams) -> Correspondence:
    return Correspondence(variety, [(random_word(variety, rng, params), Fraction(1))])


def random_correspondence(variety: AbelianVariety, rng: random.Random, params: SuiteParams) -> Correspondence:
    count = rng.randint(1, params.terms)
    terms = [(random_word(variety, rng, params), rng.choice(params.coeff_set)) for _ in range(count)]
    return Correspondence(variety, terms)


def _elements_by_norm(order, bound: int) -> dict[int, list]:
    out: dict[int, list] = {}
    vs = range(-bound, bound + 1) if order.quadratic else (0,)
    for u in range(-bound, bound + 1):
        for v in vs:
            out.setdefault(order.norm((u, v)), []).append((u, v))
    return out


def random_polarized(variety: AbelianVariety, rng: random.Random, bound: int) -> tuple[Endomorphism, Fraction]:
    """A signed permutation times a diagonal of equal-norm elements.

    f*θ = qθ exactly when the matrix M satisfies M^† M = q·I, which holds for
    these shapes with q the common norm.  The result is re-verified.
    """
    tables = [_elements_by_norm(f.order, bound) for f in variety.factors]
    norms = sorted(set.intersection(*(set(t) for t in tables)) - {0, 1})
    if not norms:
        raise InputError("no common norm >= 2 within entry_bound")
    for _ in range(MAX_REJECTIONS):
        q = rng.choice(norms)
        n = variety.n
        rows = [[(0, 0)] * n for _ in range(n)]
        start = 0
        for factor, table in zip(variety.factors, tables):
            idx = list(range(start, start + factor.multiplicity))
            perm = idx[:]
            rng.shuffle(perm)
            for i, j in zip(idx, perm):
                rows[i][j] = rng.choice(table[q])
            start += factor.multiplicity
        f = Endomorphism(variety, tuple(tuple(r) for r in rows))
        got = is_polarized(f)
        if got is not None and got >= 2:
            return f, got
    raise InputError(f"no polarized endomorphism found after {MAX_REJECTIONS} draws")


def unipotent_control(variety: AbelianVariety) -> Optional[Endomorphism]:
    """f(x, y) = (x + y, y) on the first curve with multiplicity >= 2."""
    n = variety.n
    for p in range(n - 1):
        if variety.same_curve(p, p + 1):
            rows = [[(1, 0) if i == j else (0, 0) for j in range(n)] for i in range(n)]
            rows[p][p + 1] = (1, 0)
            return Endomorphism(variety, tuple(tuple(r) for r in rows))
    return None


def negative_log_concave_control(variety: AbelianVariety) -> Optional[Correspondence]:
    """Γ_[1] + Γ_[2], a reducible correspondence whose degrees need not be log-concave."""
    if variety.n < 2:
        return None
    return graph(multiplication_map(1, variety)) + graph(multiplication_map(2, variety))
