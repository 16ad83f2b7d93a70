"""Exact characteristic and minimal polynomials over QQ."""
from __future__ import annotations

from sympy import Poly, QQ, Symbol

from .._linalg import DomainMatrix, independent_rows
from ..errors import InputError

x = Symbol("x")


def _square(m: DomainMatrix) -> DomainMatrix:
    rows, cols = m.shape
    if rows != cols:
        raise InputError(f"expected a square matrix, got shape {m.shape}")
    return m.convert_to(QQ)


def char_poly(m: DomainMatrix) -> Poly:
    m = _square(m)
    if m.shape[0] == 0:
        return Poly(1, x, domain=QQ)
    return Poly(m.charpoly(), x, domain=QQ)


def min_poly(m: DomainMatrix) -> Poly:
    """First linear dependency among I, M, M^2, ... (exact Krylov search)."""
    m = _square(m)
    size = m.shape[0]
    if size == 0:
        return Poly(1, x, domain=QQ)
    powers = [DomainMatrix.eye(size, QQ).to_dense()]
    flats = [powers[0].to_list_flat()]
    while True:
        powers.append(powers[-1].matmul(m))
        flats.append(powers[-1].to_list_flat())
        if len(independent_rows(flats)) < len(flats):
            break
    # the newest power is dependent on the earlier ones: solve for the combination
    system = DomainMatrix([list(row) for row in flats], (len(flats), size * size), QQ).transpose()
    kernel = system.nullspace().to_list()
    coeffs = kernel[0]
    lead = coeffs[-1]
    monic = [c / lead for c in reversed(coeffs)]
    return Poly(monic, x, domain=QQ)


def is_squarefree(p: Poly) -> bool:
    return p.gcd(p.diff(x)).degree() == 0


def is_semisimple(m: DomainMatrix) -> bool:
    """Diagonalisable over the algebraic closure ⟺ squarefree minimal polynomial."""
    return is_squarefree(min_poly(m))
