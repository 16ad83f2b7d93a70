"""Certified moduli of polynomial roots.

Each irreducible factor over QQ is handled separately.  Linear factors are
exact, quadratics use closed forms with rational square-root brackets, and
higher degrees use Weierstrass inclusion disks: for a monic g of degree d with
distinct approximations z_j, the roots of g are the eigenvalues of
``diag(z) - W 1^T`` where ``W_j = g(z_j) / Π_{k≠j}(z_j - z_k)``, so by
Gerschgorin each root lies in a disk around z_j of radius ``d|W_j|`` once those
disks are pairwise disjoint.  All disk arithmetic is exact rational.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from decimal import ROUND_CEILING, ROUND_FLOOR, Decimal, localcontext
from fractions import Fraction
from typing import Iterable

import mpmath
from mpmath.libmp import to_rational
from sympy import Poly

from .._linalg import DomainMatrix, frac
from ..errors import InputError, PrecisionError
from .polys import char_poly

DEFAULT_TOL = Fraction(1, 10**9)
PRECISION_CAP = 4096


@dataclass(frozen=True)
class Interval:
    """Closed interval with rational endpoints."""

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval [{self.lo}, {self.hi}]")

    @classmethod
    def exact(cls, value) -> "Interval":
        return cls(value, value)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    @property
    def is_exact(self) -> bool:
        return self.lo == self.hi

    def contains(self, value) -> bool:
        return self.lo <= value <= self.hi

    def overlaps(self, other: "Interval", slack=0) -> bool:
        return self.lo <= other.hi + slack and other.lo <= self.hi + slack

    def agrees(self, other: "Interval", rel) -> bool:
        """Overlap within ``rel`` times the larger magnitude (or absolute below 1)."""
        scale = max(Fraction(1), abs(self.hi), abs(other.hi))
        return self.overlaps(other, Fraction(rel) * scale)

    def __mul__(self, other: "Interval") -> "Interval":
        # nonnegative intervals only
        return Interval(self.lo * other.lo, self.hi * other.hi)

    def __float__(self):
        return float(self.mid)

    def as_strings(self, digits: int = 20) -> list[str]:
        return [_decimal(self.lo, digits, ROUND_FLOOR), _decimal(self.hi, digits, ROUND_CEILING)]

    def __repr__(self):
        if self.is_exact:
            return f"Interval({self.lo})"
        lo, hi = self.as_strings(15)
        return f"Interval[{lo}, {hi}]"


def _decimal(value: Fraction, digits: int, rounding) -> str:
    with localcontext() as ctx:
        ctx.prec = digits
        ctx.rounding = rounding
        out = Decimal(value.numerator) / Decimal(value.denominator)
    return str(out)


def _isqrt_fraction(value: Fraction):
    """Exact square root of a nonnegative rational, or None."""
    num, den = value.numerator, value.denominator
    rn, rd = math.isqrt(num), math.isqrt(den)
    if rn * rn == num and rd * rd == den:
        return Fraction(rn, rd)
    return None


def sqrt_interval(value, bits: int = 64) -> Interval:
    """Bracket of sqrt(value) with width at most 2^-bits (exact when rational)."""
    value = Fraction(value)
    if value < 0:
        raise InputError("square root of a negative number")
    exact = _isqrt_fraction(value)
    if exact is not None:
        return Interval.exact(exact)
    scale = 1 << bits
    floor_scaled = (value * scale * scale).numerator // (value * scale * scale).denominator
    lo = Fraction(math.isqrt(floor_scaled), scale)
    return Interval(lo, lo + Fraction(1, scale))


@dataclass(frozen=True)
class RootModulus:
    modulus: Interval
    multiplicity: int
    degree_of_factor: int


def _bits_for(tol: Fraction) -> int:
    # ceil(log2(1/tol)) up to one bit, without going through floats
    return max(32, tol.denominator.bit_length() - tol.numerator.bit_length() + 9)


def _linear_moduli(coeffs: list[Fraction]) -> list[Interval]:
    a, b = coeffs
    return [Interval.exact(abs(-b / a))]


def _quadratic_moduli(coeffs: list[Fraction], tol: Fraction) -> list[Interval]:
    a, b, c = coeffs
    disc = b * b - 4 * a * c
    if disc < 0:
        return [_refine(lambda bits: sqrt_interval(c / a, bits), tol)] * 2

    def real_roots(bits):
        s = sqrt_interval(disc, bits)
        out = []
        for sign in (1, -1):
            ends = sorted(((-b + sign * s.lo) / (2 * a), (-b + sign * s.hi) / (2 * a)))
            lo, hi = ends
            if lo <= 0 <= hi:
                out.append(Interval(0, max(-lo, hi)))
            else:
                out.append(Interval(min(abs(lo), abs(hi)), max(abs(lo), abs(hi))))
        return out

    bits = _bits_for(tol)
    while True:
        got = real_roots(bits)
        if all(iv.width <= tol for iv in got):
            return got
        bits *= 2
        if bits > PRECISION_CAP:
            raise PrecisionError("quadratic root bracket did not converge")


def _refine(fn, tol: Fraction) -> Interval:
    bits = _bits_for(tol)
    while True:
        iv = fn(bits)
        if iv.width <= tol:
            return iv
        bits *= 2
        if bits > PRECISION_CAP:
            raise PrecisionError("square-root bracket did not converge")


class _Gauss:
    """Exact Gaussian rational arithmetic for the inclusion test."""

    __slots__ = ("re", "im")

    def __init__(self, re: Fraction, im: Fraction):
        self.re = re
        self.im = im

    def __sub__(self, o):
        return _Gauss(self.re - o.re, self.im - o.im)

    def __mul__(self, o):
        return _Gauss(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im


def _horner(coeffs: list[Fraction], z: _Gauss) -> _Gauss:
    acc = _Gauss(Fraction(0), Fraction(0))
    for c in coeffs:
        acc = acc * z
        acc = _Gauss(acc.re + c, acc.im)
    return acc


def _to_fraction(v: mpmath.mpf) -> Fraction:
    p, q = to_rational(v._mpf_)
    return Fraction(int(p), int(q))


def _inclusion_moduli(coeffs: list[Fraction], tol: Fraction) -> list[Interval]:
    lead = coeffs[0]
    monic = [c / lead for c in coeffs]
    d = len(monic) - 1
    magnitude = max(1, max(abs(c) for c in monic))
    prec = max(64, _bits_for(tol) + math.ceil(math.log2(float(magnitude) + 1)) + 16)
    while prec <= PRECISION_CAP:
        result = _try_inclusion(monic, d, prec, tol)
        if result is not None:
            return result
        prec *= 2
    raise PrecisionError(f"root moduli not certified within {tol} below {PRECISION_CAP} bits")


def _try_inclusion(monic: list[Fraction], d: int, prec: int, tol: Fraction):
    with mpmath.workprec(prec):
        try:
            approx = mpmath.polyroots(
                [mpmath.mpf(c.numerator) / c.denominator for c in monic],
                maxsteps=50 + 10 * d,
                extraprec=prec,
            )
        except mpmath.libmp.NoConvergence:
            return None
        zs = [_Gauss(_to_fraction(mpmath.re(z)), _to_fraction(mpmath.im(z))) for z in approx]
    radii = []
    bits = prec // 2
    for j, z in enumerate(zs):
        denom = Fraction(1)
        for k, w in enumerate(zs):
            if k != j:
                denom *= (z - w).abs2()
        if denom == 0:
            return None
        w2 = _horner(monic, z).abs2() / denom
        radii.append(sqrt_interval(d * d * w2, bits).hi)
    for j in range(d):
        for k in range(j + 1, d):
            gap2 = (zs[j] - zs[k]).abs2()
            if gap2 <= (radii[j] + radii[k]) ** 2:
                return None
    out = []
    for z, r in zip(zs, radii):
        m = sqrt_interval(z.abs2(), bits)
        iv = Interval(max(Fraction(0), m.lo - r), m.hi + r)
        if iv.width > tol:
            return None
        out.append(iv)
    return out


def root_moduli(p: Poly, tol=DEFAULT_TOL) -> list[RootModulus]:
    """Certified modulus interval of every root of ``p``, with multiplicities."""
    tol = Fraction(tol)
    if tol <= 0:
        raise InputError("tolerance must be positive")
    if _bits_for(tol) > PRECISION_CAP:
        raise PrecisionError(f"tolerance needs about {_bits_for(tol)} bits, above the {PRECISION_CAP}-bit cap")
    if p.degree() <= 0:
        return []
    _, factors = p.factor_list()
    out = []
    for g, mult in factors:
        coeffs = [frac(c) for c in g.all_coeffs()]
        deg = len(coeffs) - 1
        if deg == 1:
            moduli = _linear_moduli(coeffs)
        elif deg == 2:
            moduli = _quadratic_moduli(coeffs, tol)
        else:
            moduli = _inclusion_moduli(coeffs, tol)
        out.extend(RootModulus(iv, mult, deg) for iv in moduli)
    return out


def max_modulus(moduli: Iterable[RootModulus]) -> Interval:
    moduli = list(moduli)
    if not moduli:
        return Interval.exact(0)
    return Interval(max(m.modulus.lo for m in moduli), max(m.modulus.hi for m in moduli))


def poly_radius(p: Poly, tol=DEFAULT_TOL) -> Interval:
    return max_modulus(root_moduli(p, tol))


def spectral_radius(m: DomainMatrix, tol=DEFAULT_TOL) -> Interval:
    """Certified bracket of the largest eigenvalue modulus, width <= tol."""
    return poly_radius(char_poly(m), tol)
