"""Bounds for sequences dominated by a scaled log-concave envelope.

Given a positive log-concave ``a_0..a_n`` and nonnegative ``b_0..b_2n`` with
``r^i b_i <= max_j r^(2j) a_j`` for every r > 0, evaluating at
``r_k^2 = a_k / a_(k+1)`` gives ``b_2k <= a_k`` and ``b_(2k+1) <= sqrt(a_k a_(k+1))``.

Odd-indexed bounds are irrational in general, so they are carried as squares
and every comparison is made exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from ..errors import InputError


def check_log_concave(a: Sequence[Fraction]) -> None:
    for k in range(1, len(a) - 1):
        if a[k] * a[k] < a[k - 1] * a[k + 1]:
            raise InputError(
                f"sequence is not log-concave at index {k}: "
                f"a_{k}^2 = {a[k] * a[k]} < a_{k - 1}·a_{k + 1} = {a[k - 1] * a[k + 1]}"
            )


def is_log_concave(a: Sequence) -> bool:
    a = [Fraction(v) for v in a]
    return all(a[k] * a[k] >= a[k - 1] * a[k + 1] for k in range(1, len(a) - 1))


@dataclass(frozen=True)
class LogConcaveBounds:
    a: tuple[Fraction, ...]
    witnesses_squared: tuple[Fraction, ...]  # r_k^2 = a_k / a_(k+1)
    bounds_squared: tuple[Fraction, ...]  # b̂_i^2 for i = 0..2n

    @property
    def bounds(self) -> tuple[float, ...]:
        return tuple(float(v) ** 0.5 for v in self.bounds_squared)

    def dominates(self, b: Sequence) -> bool:
        """b_i <= b̂_i for every i (exact, via squares of nonnegative values)."""
        b = [Fraction(v) for v in b]
        return all(v >= 0 and v * v <= bound for v, bound in zip(b, self.bounds_squared))


def log_concave_bounds(a: Iterable) -> LogConcaveBounds:
    a = tuple(Fraction(v) for v in a)
    if not a:
        raise InputError("empty sequence")
    if any(v <= 0 for v in a):
        raise InputError("sequence must be strictly positive")
    check_log_concave(a)
    n = len(a) - 1
    witnesses = tuple(a[k] / a[k + 1] for k in range(n))
    bounds = []
    for k in range(n + 1):
        bounds.append(a[k] * a[k])
        if k < n:
            bounds.append(a[k] * a[k + 1])
    return LogConcaveBounds(a, witnesses, tuple(bounds))


def dyadic_grid(lo_exp: int = -10, hi_exp: int = 10) -> tuple[Fraction, ...]:
    return tuple(Fraction(2) ** e for e in range(lo_exp, hi_exp + 1))


def _envelope(a: Sequence[Fraction], r_squared: Fraction) -> Fraction:
    return max(r_squared**j * v for j, v in enumerate(a))


def premise_holds(a: Sequence[Fraction], b: Sequence[Fraction], r_squared: Fraction) -> bool:
    """r^i b_i <= max_j r^(2j) a_j for all i, given r^2 (r may be irrational)."""
    env = _envelope(a, r_squared)
    for i, v in enumerate(b):
        if i % 2 == 0:
            if r_squared ** (i // 2) * v > env:
                return False
        # r^i v <= env  ⟺  r^(2i) v^2 <= env^2 for nonnegative sides
        elif r_squared**i * v * v > env * env:
            return False
    return True


def grid_bounds_squared(a: Sequence[Fraction], grid: Sequence[Fraction], length: int) -> tuple[Fraction, ...]:
    """Tightest squared bound on each b_i implied by the premise on a finite r-grid."""
    out = []
    for i in range(length):
        best = None
        for r in grid:
            r2 = r * r
            value = _envelope(a, r2) ** 2 / r2**i
            best = value if best is None or value < best else best
        out.append(best)
    return tuple(out)


@dataclass(frozen=True)
class ReductionVerdict:
    premise_on_grid: bool
    premise_at_witnesses: bool
    conclusions: bool
    grid_bounds_squared: tuple[Fraction, ...]
    witness_bounds_squared: tuple[Fraction, ...]

    @property
    def passed(self) -> bool:
        return self.premise_on_grid and self.premise_at_witnesses and self.conclusions

    @property
    def grid_matches_witnesses(self) -> bool:
        return self.grid_bounds_squared == self.witness_bounds_squared


def reduction_oracle(a: Iterable, b: Iterable, r_grid: Sequence | None = None) -> ReductionVerdict:
    """Check the premise on the grid and at the witness radii, then the conclusions."""
    bounds = log_concave_bounds(a)
    a = bounds.a
    b = tuple(Fraction(v) for v in b)
    if len(b) != 2 * len(a) - 1:
        raise InputError(f"b must have length {2 * len(a) - 1}, got {len(b)}")
    if any(v < 0 for v in b):
        raise InputError("b must be nonnegative")
    grid = dyadic_grid() if r_grid is None else tuple(Fraction(r) for r in r_grid)
    on_grid = all(premise_holds(a, b, r * r) for r in grid)
    at_witness = all(premise_holds(a, b, w) for w in bounds.witnesses_squared)
    return ReductionVerdict(
        premise_on_grid=on_grid,
        premise_at_witnesses=at_witness,
        conclusions=bounds.dominates(b),
        grid_bounds_squared=grid_bounds_squared(a, grid, len(b)),
        witness_bounds_squared=bounds.bounds_squared,
    )
