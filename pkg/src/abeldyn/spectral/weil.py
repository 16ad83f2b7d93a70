"""q-Weil number certification for the eigenvalues of a pullback action."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .._linalg import DomainMatrix, frac
from ..errors import InputError
from .polys import char_poly
from .roots import DEFAULT_TOL, Interval, root_moduli, sqrt_interval


@dataclass(frozen=True)
class WeilVerdict:
    q: Fraction
    weight: int
    functional_equation_ok: bool
    moduli_ok: bool
    sign: Optional[int]
    moduli: tuple[Interval, ...]

    @property
    def passed(self) -> bool:
        return self.functional_equation_ok and self.moduli_ok


def functional_equation(coeffs: list[Fraction], c: Fraction):
    """Sign s if x^b P(c/x) = s·c^(b/2)·P(x) for monic P, else None.

    ``coeffs`` are lowest-degree first.  The constant ``s·c^(b/2)`` is read off
    the constant term and its square is compared with c^b, so the check stays
    in QQ even when c^(b/2) is irrational.
    """
    b = len(coeffs) - 1
    k = coeffs[0]  # must equal s·c^(b/2)
    if k * k != c**b:
        return None
    for j in range(b + 1):
        if coeffs[j] * c**j != k * coeffs[b - j]:
            return None
    return 1 if k > 0 else -1


def weil_check(m: DomainMatrix, q, weight: int, tol=DEFAULT_TOL) -> WeilVerdict:
    q = Fraction(q)
    if q <= 0:
        raise InputError(f"q must be positive, got {q}")
    tol = Fraction(tol)
    p = char_poly(m)
    coeffs = [frac(v) for v in reversed(p.all_coeffs())]
    sign = functional_equation(coeffs, q**weight)
    target = sqrt_interval(q**weight, 96)
    moduli = tuple(r.modulus for r in root_moduli(p, tol))
    moduli_ok = all(mod.overlaps(target, tol) for mod in moduli)
    return WeilVerdict(q, weight, sign is not None, moduli_ok, sign, moduli)
