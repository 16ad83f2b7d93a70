"""Exact polynomials, certified spectra and the dynamical-degree checks."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

from sympy import Poly

from .._linalg import DomainMatrix
from .dynamics import (
    DDCVerdict,
    DinhVerdict,
    GrowthEstimate,
    NormRatios,
    NumericalDegree,
    TraceRatios,
    chi,
    ddc_check,
    dinh_check,
    iterate_degrees,
    lambda_growth,
    lambda_numerical,
    norm_comparison_ratios,
    trace_bound_ratios,
)
from .logconcave import LogConcaveBounds, ReductionVerdict, log_concave_bounds, reduction_oracle
from .polys import char_poly, is_semisimple, is_squarefree, min_poly
from .recurrence import MinimalRecurrence, berlekamp_massey, minimal_recurrence
from .roots import DEFAULT_TOL, Interval, root_moduli, spectral_radius
from .weil import WeilVerdict, weil_check


@dataclass(frozen=True)
class SpectralReport:
    char_poly: Poly
    min_poly: Poly
    radius: Interval
    semisimple: bool
    weil: Optional[WeilVerdict] = None


def spectral_report(m: DomainMatrix, tol=DEFAULT_TOL, q=None, weight: Optional[int] = None) -> SpectralReport:
    mp = min_poly(m)
    weil = weil_check(m, q, weight, tol) if q is not None else None
    return SpectralReport(char_poly(m), mp, spectral_radius(m, tol), is_squarefree(mp), weil)


__all__ = [
    "DDCVerdict", "DinhVerdict", "GrowthEstimate", "Interval", "LogConcaveBounds",
    "MinimalRecurrence", "NormRatios", "NumericalDegree", "ReductionVerdict", "SpectralReport",
    "TraceRatios", "WeilVerdict", "berlekamp_massey", "char_poly", "chi", "ddc_check",
    "dinh_check", "is_semisimple", "iterate_degrees", "lambda_growth", "lambda_numerical",
    "log_concave_bounds", "min_poly", "minimal_recurrence", "norm_comparison_ratios",
    "reduction_oracle", "root_moduli", "spectral_radius", "spectral_report",
    "trace_bound_ratios", "weil_check",
]
