"""Dynamical degrees of correspondences and the checks built on them.

For an effective finite correspondence, iteration is composition and the
pullback is functorial, so χ_i is the spectral radius of the H^i action and
λ_k is both the spectral radius on N^k and the growth rate of
``deg_k(c^m)``.  All three are computed independently and compared through
certified intervals.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

from .._linalg import column, column_entries, max_abs_entry
from ..correspondence import Correspondence, GradedAction, degrees_of_action, graded_action
from ..errors import DegenerateError, InputError
from ..exterior import integrate, wedge
from ..numerical import build_Nk, induced_action
from .recurrence import MinimalRecurrence, minimal_recurrence
from .roots import DEFAULT_TOL, Interval, poly_radius, spectral_radius, sqrt_interval

DDC_RELATIVE_TOL = Fraction(1, 10**6)


def _action(c) -> GradedAction:
    return c if isinstance(c, GradedAction) else graded_action(c)


def chi(c, i: int, tol=DEFAULT_TOL) -> Interval:
    """χ_i: spectral radius of the pullback on H^i."""
    action = _action(c)
    if not 0 <= i < len(action):
        raise InputError(f"degree {i} outside [0, {len(action) - 1}]")
    return spectral_radius(action[i], tol)


def iterate_degrees(c, k: int, m_max: int) -> list[Fraction]:
    """deg_k(c^m) for m = 1..m_max via powers of the H^2k block."""
    action = _action(c)
    model = action.model
    block = action[2 * k]
    current = column(model.theta_power(k).component(2 * k))
    dual = model.theta_power(model.n - k)
    out = []
    for _ in range(m_max):
        current = block.matmul(current)
        cls = type(dual).from_vector(model.rank, 2 * k, column_entries(current))
        out.append(integrate(wedge(cls, dual)))
    return out


@dataclass(frozen=True)
class GrowthEstimate:
    sequence: tuple[Fraction, ...]
    recurrence: Optional[MinimalRecurrence]
    dominant_modulus: Interval
    degenerate: bool = False
    agrees_with: Optional[Interval] = None

    def ratio(self, m: int) -> Fraction:
        """deg_k(c^(m+1)) / deg_k(c^m), 1-based m."""
        return self.sequence[m] / self.sequence[m - 1]


def lambda_growth(c, k: int, m_max: int = 40, tol=DEFAULT_TOL) -> GrowthEstimate:
    if m_max < 4:
        raise InputError("m_max must be at least 4")
    seq = tuple(iterate_degrees(c, k, m_max))
    if not any(seq):
        return GrowthEstimate(seq, None, Interval.exact(0), degenerate=True)
    rec = minimal_recurrence(seq)
    return GrowthEstimate(seq, rec, poly_radius(rec.characteristic_polynomial(), tol))


@dataclass(frozen=True)
class NumericalDegree:
    value: Interval
    lattice_dimension: int
    saturation_events: tuple[str, ...] = field(default=())


def lambda_numerical(c, k: int, tol=DEFAULT_TOL) -> NumericalDegree:
    action = _action(c)
    variety = c.variety if isinstance(c, Correspondence) else None
    if variety is None:
        raise InputError("lambda_numerical needs a Correspondence (the lattice depends on the variety)")
    induced = induced_action(action, build_Nk(variety, k))
    return NumericalDegree(
        spectral_radius(induced.matrix, tol), induced.lattice.dimension, induced.saturation_events
    )


@dataclass(frozen=True)
class DDCVerdict:
    k: int
    chi: Interval
    lambda_numerical: Interval
    lambda_growth: Interval
    easy_direction: bool
    agree: bool
    saturation_events: tuple[str, ...]

    @property
    def verdict(self) -> str:
        if self.agree and self.easy_direction:
            return "pass"
        return "inconclusive" if self.saturation_events else "fail"


def ddc_check(c: Correspondence, k: int, tol=DEFAULT_TOL, m_max: int = 40,
              rel=DDC_RELATIVE_TOL) -> DDCVerdict:
    """χ_2k versus λ_k computed on N^k and from degree growth."""
    action = graded_action(c)
    x = chi(action, 2 * k, tol)
    num = lambda_numerical(c, k, tol)
    growth = lambda_growth(action, k, m_max, tol).dominant_modulus
    agree = x.agrees(num.value, rel) and x.agrees(growth, rel) and num.value.agrees(growth, rel)
    easy = num.value.lo <= x.hi + Fraction(tol)
    return DDCVerdict(k, x, num.value, growth, easy, agree, num.saturation_events)


@dataclass(frozen=True)
class DinhVerdict:
    k: int
    chi_odd: Interval
    bound: Interval  # sqrt(λ_k λ_(k+1))
    slack: Fraction  # bound.hi - chi_odd.lo

    @property
    def passed(self) -> bool:
        return self.slack >= -DEFAULT_TOL


def dinh_check(c: Correspondence, k: int, tol=DEFAULT_TOL) -> DinhVerdict:
    n = c.variety.n
    if not 0 <= k <= n - 1:
        raise InputError(f"k={k} outside [0, {n - 1}]")
    action = graded_action(c)
    odd = chi(action, 2 * k + 1, tol)
    lk = lambda_numerical(c, k, tol).value
    lk1 = lambda_numerical(c, k + 1, tol).value
    prod = lk * lk1
    bound = Interval(sqrt_interval(prod.lo, 96).lo, sqrt_interval(prod.hi, 96).hi)
    return DinhVerdict(k, odd, bound, bound.hi - odd.lo)


@dataclass(frozen=True)
class TraceRatios:
    """|Tr on H^2k| / deg_k and (|Tr on H^(2k+1)|)^2 / (deg_k deg_(k+1))."""

    even: tuple[Fraction, ...]
    odd_squared: tuple[Fraction, ...]

    @property
    def odd(self) -> tuple[float, ...]:
        return tuple(float(v) ** 0.5 for v in self.odd_squared)


def trace_bound_ratios(c) -> TraceRatios:
    action = _action(c)
    degs = degrees_of_action(action)
    if any(d <= 0 for d in degs):
        raise DegenerateError(f"degenerate: ratio undefined for degree sequence {degs}")
    n = len(degs) - 1
    even = tuple(abs(action.trace(2 * k)) / degs[k] for k in range(n + 1))
    odd = tuple(action.trace(2 * k + 1) ** 2 / (degs[k] * degs[k + 1]) for k in range(n))
    return TraceRatios(even, odd)


@dataclass(frozen=True)
class NormRatios:
    even: Optional[Fraction]
    odd_squared: Optional[Fraction]

    @property
    def degenerate(self) -> bool:
        return self.even is None or self.odd_squared is None


def norm_comparison_ratios(c: Correspondence, k: int) -> NormRatios:
    """Max-entry norm ratios ‖H^2k‖/‖N^k‖ and ‖H^(2k+1)‖^2/(‖N^k‖‖N^(k+1)‖).

    The odd ratio is only defined for k < n; for k = n it is reported as None.
    """
    action = graded_action(c)
    n = c.variety.n
    nk = max_abs_entry(induced_action(action, build_Nk(c.variety, k)).matrix)
    even = max_abs_entry(action[2 * k]) / nk if nk else None
    odd = None
    if k < n:
        nk1 = max_abs_entry(induced_action(action, build_Nk(c.variety, k + 1)).matrix)
        if nk and nk1:
            odd = max_abs_entry(action[2 * k + 1]) ** 2 / (nk * nk1)
    return NormRatios(even, odd)
