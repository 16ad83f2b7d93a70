"""Minimal linear recurrences over QQ (Berlekamp–Massey)."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from sympy import Poly, QQ

from ..errors import RecurrenceError
from .polys import x


def berlekamp_massey(seq: Sequence) -> tuple[Fraction, ...]:
    """Shortest ``a_1..a_L`` with ``s_n = Σ a_j s_{n-j}`` for all n >= L."""
    s = [Fraction(v) for v in seq]
    c = [Fraction(1)]  # connection polynomial C(z) = 1 + c_1 z + ...
    b = [Fraction(1)]
    length = 0
    shift = 1
    last = Fraction(1)
    for n, value in enumerate(s):
        disc = value + sum(c[i] * s[n - i] for i in range(1, length + 1))
        if disc == 0:
            shift += 1
            continue
        coef = disc / last
        prev = list(c)
        if len(c) < len(b) + shift:
            c.extend([Fraction(0)] * (len(b) + shift - len(c)))
        for i, bi in enumerate(b):
            c[i + shift] -= coef * bi
        if 2 * length <= n:
            length = n + 1 - length
            b = prev
            last = disc
            shift = 1
        else:
            shift += 1
    c.extend([Fraction(0)] * (length + 1 - len(c)))
    return tuple(-c[i] for i in range(1, length + 1))


@dataclass(frozen=True)
class MinimalRecurrence:
    coefficients: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.coefficients)

    def characteristic_polynomial(self) -> Poly:
        """x^L - a_1 x^(L-1) - ... - a_L."""
        return Poly([Fraction(1)] + [-a for a in self.coefficients], x, domain=QQ)

    def extend(self, seed: Sequence, count: int) -> list[Fraction]:
        """Run the recurrence forward from ``seed`` (its first ``order`` terms)."""
        out = [Fraction(v) for v in seed[: self.order]]
        while len(out) < count:
            out.append(sum((a * out[-1 - j] for j, a in enumerate(self.coefficients)), Fraction(0)))
        return out[:count]

    def reproduces(self, seq: Sequence) -> bool:
        seq = [Fraction(v) for v in seq]
        return self.extend(seq, len(seq)) == seq


def minimal_recurrence(seq: Sequence, margin: int = 2) -> MinimalRecurrence:
    """Minimal recurrence, required to be confirmed by ``margin`` extra terms.

    Berlekamp–Massey is only guaranteed once the sequence has at least twice
    the recurrence order in terms; anything shorter is reported as unstable.
    """
    seq = list(seq)
    rec = MinimalRecurrence(berlekamp_massey(seq))
    if 2 * rec.order + margin > len(seq):
        raise RecurrenceError(
            f"recurrence of order {rec.order} not confirmed by {len(seq)} terms; increase m_max"
        )
    if not rec.reproduces(seq):
        raise RecurrenceError("recurrence does not reproduce the sequence; increase m_max")
    return rec
