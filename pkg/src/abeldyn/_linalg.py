"""Thin helpers around sympy's DomainMatrix over QQ.

Every matrix in the package is a ``DomainMatrix`` with domain ``QQ``; scalars
cross the public API as :class:`fractions.Fraction`.
"""
from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

__all__ = [
    "DomainMatrix",
    "QQ",
    "qq",
    "frac",
    "matrix",
    "identity",
    "zeros",
    "scalar_matrix",
    "column",
    "column_entries",
    "trace",
    "max_abs_entry",
    "independent_rows",
    "solve_left",
]


def qq(x) -> "QQ.dtype":
    """Convert an int, Fraction or QQ element to a QQ element."""
    if isinstance(x, int):
        return QQ(x)
    if isinstance(x, Fraction):
        return QQ(x.numerator, x.denominator)
    return QQ.convert(x)


def frac(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    return Fraction(int(x.numerator), int(x.denominator))


def matrix(rows: Sequence[Sequence]) -> DomainMatrix:
    rows = [[qq(v) for v in row] for row in rows]
    ncols = len(rows[0]) if rows else 0
    return DomainMatrix(rows, (len(rows), ncols), QQ)


def identity(n: int) -> DomainMatrix:
    return DomainMatrix.eye(n, QQ).to_dense()


def zeros(m: int, n: int) -> DomainMatrix:
    return DomainMatrix.zeros((m, n), QQ).to_dense()


def scalar_matrix(c, n: int) -> DomainMatrix:
    return identity(n) * qq(c)


def column(values: Iterable) -> DomainMatrix:
    return matrix([[v] for v in values])


def column_entries(col: DomainMatrix) -> tuple[Fraction, ...]:
    return tuple(frac(row[0]) for row in col.to_list())


def trace(m: DomainMatrix) -> Fraction:
    rows = m.to_list()
    return sum((frac(rows[i][i]) for i in range(len(rows))), Fraction(0))


def max_abs_entry(m: DomainMatrix) -> Fraction:
    return max((abs(frac(v)) for row in m.to_list() for v in row), default=Fraction(0))


def independent_rows(rows: Sequence[Sequence]) -> list[int]:
    """Indices of a greedy maximal independent subset of ``rows``, in order."""
    if not rows:
        return []
    # pivots of rref(M^T) are the first independent columns of M^T
    _, pivots = matrix(rows).transpose().rref()
    return list(pivots)


def solve_left(basis_rows: DomainMatrix, target_row: DomainMatrix):
    """Return x with ``x * basis_rows == target_row`` or None if unsolvable.

    ``basis_rows`` must have independent rows.
    """
    a = basis_rows.transpose()
    b = target_row.transpose()
    aug = a.hstack(b)
    reduced, pivots = aug.rref()
    ncols = a.shape[1]
    if ncols in pivots:
        return None
    sol = [QQ(0)] * ncols
    red = reduced.to_list()
    for r, p in enumerate(pivots):
        sol[p] = red[r][ncols]
    return DomainMatrix([sol], (1, ncols), QQ)
