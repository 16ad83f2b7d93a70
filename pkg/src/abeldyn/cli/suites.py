"""Seeded stress suites over a configured variety.

Each suite maps a sample index to a list of records; controls are appended
after the random samples.  Records are ordered by sample id regardless of the
order in which workers finish.
"""
from __future__ import annotations

import time
from concurrent.futures import ProcessPoolExecutor
from fractions import Fraction
from math import comb

from .. import __version__
from ..correspondence import (
    GradedAction,
    compose,
    degree_sequence,
    degrees_of_action,
    gr_correspondence,
    graded_action,
    graph,
    apply_Gr,
    intersect,
    lieberman_pushforward,
    total_degree,
    transpose_graph,
)
from ..errors import DegenerateError, InputError
from ..spectral import (
    ddc_check,
    dinh_check,
    is_semisimple,
    norm_comparison_ratios,
    trace_bound_ratios,
    weil_check,
)
from ..spectral.logconcave import is_log_concave
from ..spectral.roots import sqrt_interval
from .config import VarietyConfig, parse_config
from .report import decimal_string, make_record, unexpected
from .sampling import (
    SuiteParams,
    negative_log_concave_control,
    random_correspondence,
    random_endomorphism,
    random_polarized,
    random_single_word,
    sample_rng,
    unipotent_control,
)

GR_RADII = (Fraction(1, 2), Fraction(2), Fraction(3, 5))
TRACE_EARLY = range(1, 16)
TRACE_LATE = range(15, 31)
TRACE_WINDOW_FACTOR = 10


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.ms = (time.perf_counter() - self.start) * 1000


def _corr(ctx, family, i):
    config, params, seed = ctx
    return random_correspondence(config.variety, sample_rng(seed, family, i), params)


def _ddc(ctx, i):
    config, params, _ = ctx
    c = _corr(ctx, "correspondence", i)
    out = []
    for k in range(config.variety.n + 1):
        with _Timer() as t:
            v = ddc_check(c, k, params.tol, params.m_max, params.rel_tol)
        out.append(make_record(
            "ddc", i, k, v.verdict, {"correspondence": repr(c)},
            certified_values={"chi": v.chi, "lambda_numerical": v.lambda_numerical,
                              "lambda_growth": v.lambda_growth},
            ratios={"chi_over_lambda_numerical": v.chi.mid / v.lambda_numerical.mid
                    if v.lambda_numerical.mid else None},
            saturation_events=v.saturation_events, runtime_ms=t.ms,
        ))
    return out


def _dinh(ctx, i):
    config, params, _ = ctx
    c = _corr(ctx, "correspondence", i)
    out = []
    for k in range(config.variety.n):
        with _Timer() as t:
            v = dinh_check(c, k, params.tol)
        out.append(make_record(
            "dinh", i, k, "pass" if v.passed else "fail", {"correspondence": repr(c)},
            certified_values={"chi_odd": v.chi_odd, "bound": v.bound},
            ratios={"slack": v.slack}, runtime_ms=t.ms,
        ))
    return out


def _polarized(ctx, i):
    config, params, seed = ctx
    return random_polarized(config.variety, sample_rng(seed, "polarized", i), params.entry_bound)


def _gwrh(ctx, i):
    config, params, _ = ctx
    f, q = _polarized(ctx, i)
    action = graded_action(graph(f))
    out = []
    for deg in range(len(action)):
        with _Timer() as t:
            v = weil_check(action[deg], q, deg, params.tol)
        target = sqrt_interval(q**deg, 96)
        out.append(make_record(
            "gwrh", i, deg, "pass" if v.passed else "fail",
            {"endomorphism": repr(f), "q": str(q)},
            certified_values={"target_modulus": target, "moduli": [m.as_strings() for m in v.moduli]},
            runtime_ms=t.ms,
        ))
    return out


def _semisimple_records(f, sample, action, expected_for):
    out = []
    for deg in range(len(action)):
        with _Timer() as t:
            ok = is_semisimple(action[deg])
        out.append(make_record(
            "semisimple", sample, deg, "pass" if ok else "fail", {"endomorphism": repr(f)},
            expected=expected_for(deg), runtime_ms=t.ms,
        ))
    return out


def _semisimple(ctx, i):
    f, _ = _polarized(ctx, i)
    return _semisimple_records(f, i, graded_action(graph(f)), lambda deg: "pass")


def _semisimple_controls(ctx):
    config = ctx[0]
    f = unipotent_control(config.variety)
    if f is None:
        return []
    top = 2 * config.variety.n
    records = _semisimple_records(
        f, "control-unipotent", graded_action(graph(f)),
        lambda deg: "pass" if deg in (0, top) else "fail",
    )
    for r in records:
        r["inputs"]["polarized"] = False
    return records


def _logconcave_record(c, sample, expected, runtime_start):
    degs = degree_sequence(c)
    ok = is_log_concave(degs)
    margins = [degs[k] ** 2 / (degs[k - 1] * degs[k + 1]) for k in range(1, len(degs) - 1)]
    return make_record(
        "logconcave", sample, None, "pass" if ok else "fail",
        {"correspondence": repr(c), "degrees": [str(d) for d in degs]}, expected=expected,
        ratios={"min_log_concavity_ratio": min(margins) if margins else None},
        runtime_ms=(time.perf_counter() - runtime_start) * 1000,
    )


def _logconcave(ctx, i):
    config, params, seed = ctx
    start = time.perf_counter()
    c = random_single_word(config.variety, sample_rng(seed, "word", i), params)
    return [_logconcave_record(c, i, "pass", start)]


def _logconcave_controls(ctx):
    c = negative_log_concave_control(ctx[0].variety)
    if c is None:
        return []
    return [_logconcave_record(c, "control-reducible", "fail", time.perf_counter())]


def _gr_identity(ctx, i):
    config, _, _ = ctx
    c = _corr(ctx, "correspondence", i)
    n = config.variety.n
    base = graded_action(c)
    degs = degrees_of_action(base)
    out = []
    for r in GR_RADII:
        with _Timer() as t:
            scaled = GradedAction.scaling(base.model, r) @ base
            action_ok = apply_Gr(c, r) == scaled
            lhs = total_degree(compose(gr_correspondence(config.variety, r), c))
            rhs = sum((comb(n, j) * r ** (2 * j) * degs[j] for j in range(n + 1)), Fraction(0))
        out.append(make_record(
            "gr_identity", i, None, "pass" if action_ok and lhs == rhs else "fail",
            {"correspondence": repr(c), "r": str(r)},
            ratios={"total_degree": lhs, "expected_total_degree": rhs}, runtime_ms=t.ms,
        ))
    return out


def _window(values_by_m, factor):
    early = max(values_by_m[m] for m in TRACE_EARLY)
    late = max(values_by_m[m] for m in TRACE_LATE)
    return early, late, late <= factor * early


def _trace_bounds(ctx, i):
    config, _, _ = ctx
    c = _corr(ctx, "correspondence", i)
    n = config.variety.n
    with _Timer() as t:
        action = graded_action(c)
        power = action
        ratios = {}
        failure = None
        for m in range(1, TRACE_LATE.stop):
            try:
                ratios[m] = trace_bound_ratios(power)
            except DegenerateError as exc:
                failure = str(exc)
                break
            power = power @ action
    out = []
    share = t.ms / (2 * n + 1)
    for k in range(n + 1):
        for parity in ("even", "odd"):
            if parity == "odd" and k == n:
                continue
            if failure:
                out.append(make_record(f"trace_{parity}", i, k, "fail",
                                       {"correspondence": repr(c), "error": failure}, runtime_ms=share))
                continue
            if parity == "even":
                series = {m: r.even[k] for m, r in ratios.items()}
                factor = TRACE_WINDOW_FACTOR
            else:
                # odd ratios are carried squared, so the window factor is squared too
                series = {m: r.odd_squared[k] for m, r in ratios.items()}
                factor = TRACE_WINDOW_FACTOR**2
            early, late, ok = _window(series, factor)
            out.append(make_record(
                f"trace_{parity}", i, k, "pass" if ok else "fail", {"correspondence": repr(c)},
                ratios={"max_m_1_15": early, "max_m_15_30": late} if parity == "even" else
                {"max_m_1_15_squared": early, "max_m_15_30_squared": late},
                runtime_ms=share,
            ))
    return out


def _boundedness(ctx, i):
    config, _, _ = ctx
    f = _corr(ctx, "pair-f", i)
    g = _corr(ctx, "pair-g", i)
    n = config.variety.n
    with _Timer() as t:
        value = intersect(f, g)
        df, dg = degree_sequence(f), degree_sequence(g)
        denom = sum((df[j] * dg[n - j] for j in range(n + 1)), Fraction(0))
    ratio = abs(value) / denom if denom > 0 else None
    return [make_record(
        "boundedness", i, None, "pass" if ratio is not None else "fail",
        {"f": repr(f), "g": repr(g)},
        ratios={"intersection": value, "ratio": ratio}, runtime_ms=t.ms,
    )]


def _lieberman(ctx, i):
    config, params, seed = ctx
    rng = sample_rng(seed, "triple", i)
    phi = random_endomorphism(config.variety, rng, params.entry_bound)
    psi = random_endomorphism(config.variety, rng, params.entry_bound)
    f = random_correspondence(config.variety, rng, params)
    g = random_correspondence(config.variety, rng, params)
    inputs = {"phi": repr(phi), "psi": repr(psi), "f": repr(f), "g": repr(g)}
    with _Timer() as t1:
        af = graded_action(f)
        push = graded_action(transpose_graph(phi))
        pull = graded_action(graph(psi))
        lieberman_ok = graded_action(lieberman_pushforward(phi, psi, f)) == push @ af @ pull
    with _Timer() as t2:
        functorial_ok = graded_action(compose(g, f)) == af @ graded_action(g)
    return [
        make_record("lieberman", i, None, "pass" if lieberman_ok else "fail", inputs, runtime_ms=t1.ms),
        make_record("functoriality", i, None, "pass" if functorial_ok else "fail", inputs, runtime_ms=t2.ms),
    ]


def _castelnuovo_severi(ctx, i):
    c = _corr(ctx, "correspondence", i)
    with _Timer() as t:
        self_int = intersect(c, c)
        d0, d1 = degree_sequence(c)
        bound = 2 * d0 * d1
    return [make_record(
        "castelnuovo_severi", i, None, "pass" if self_int <= bound else "fail",
        {"correspondence": repr(c)},
        ratios={"self_intersection": self_int, "bound": bound,
                "ratio": self_int / bound if bound else None},
        runtime_ms=t.ms,
    )]


def _norm_ratios(ctx, i):
    config, _, _ = ctx
    c = _corr(ctx, "correspondence", i)
    out = []
    for k in range(config.variety.n + 1):
        with _Timer() as t:
            v = norm_comparison_ratios(c, k)
        odd = None
        if v.odd_squared is not None:
            odd = sqrt_interval(v.odd_squared, 64).mid
        out.append(make_record(
            "norm_ratios", i, k,
            "fail" if v.even is None or (k < config.variety.n and v.odd_squared is None) else "pass",
            {"correspondence": repr(c)},
            ratios={"even": v.even, "odd": odd}, runtime_ms=t.ms,
        ))
    return out


def _require_curve(ctx):
    if ctx[0].variety.n != 1:
        raise InputError("castelnuovo_severi needs a single elliptic curve (n = 1)")


SUITES = {
    "ddc": (_ddc, None, None),
    "gwrh": (_gwrh, None, None),
    "semisimple": (_semisimple, _semisimple_controls, None),
    "dinh": (_dinh, None, None),
    "logconcave": (_logconcave, _logconcave_controls, None),
    "gr_identity": (_gr_identity, None, None),
    "trace_bounds": (_trace_bounds, None, None),
    "boundedness": (_boundedness, None, None),
    "lieberman": (_lieberman, None, None),
    "castelnuovo_severi": (_castelnuovo_severi, None, _require_curve),
    "norm_ratios": (_norm_ratios, None, None),
}

SUPREMUM_KEYS = {
    "boundedness": ("ratio",),
    "norm_ratios": ("even", "odd"),
    "trace_bounds": ("max_m_1_15", "max_m_15_30", "max_m_1_15_squared", "max_m_15_30_squared"),
    "castelnuovo_severi": ("ratio",),
}


def _worker(args):
    text, suite_id, seed, params, index = args
    return SUITES[suite_id][0]((parse_config(text), params, seed), index)


def _summary(suite_id, records) -> dict:
    verdicts: dict[str, int] = {}
    for r in records:
        verdicts[r["verdict"]] = verdicts.get(r["verdict"], 0) + 1
    suprema = {}
    for key in SUPREMUM_KEYS.get(suite_id, ()):
        values = [Fraction(r["ratios"][key]) for r in records
                  if r["ratios"].get(key) is not None]
        if values:
            suprema[key] = decimal_string(max(values))
    return {
        "records": len(records),
        "verdicts": dict(sorted(verdicts.items())),
        "unexpected": sum(1 for r in records if unexpected(r)),
        "suprema": suprema,
    }


def run_suite(config: VarietyConfig, suite_id: str, seed: int, params: SuiteParams | None = None,
              config_text: str | None = None) -> dict:
    if suite_id not in SUITES:
        raise InputError(f"unknown suite {suite_id!r}; choose from {', '.join(SUITES)}")
    params = params or SuiteParams()
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise InputError("seed must be an integer")
    sample_fn, controls_fn, precondition = SUITES[suite_id]
    ctx = (config, params, seed)
    if precondition:
        precondition(ctx)
    start = time.perf_counter()
    if params.workers > 1 and params.samples > 1 and config_text is not None:
        jobs = [(config_text, suite_id, seed, params, i) for i in range(params.samples)]
        with ProcessPoolExecutor(max_workers=params.workers) as pool:
            batches = list(pool.map(_worker, jobs))
    else:
        batches = [sample_fn(ctx, i) for i in range(params.samples)]
    records = [r for batch in batches for r in batch]
    if controls_fn:
        records.extend(controls_fn(ctx))
    return {
        "schema_version": 1,
        "tool_version": __version__,
        "config_digest": config.digest,
        "seed": seed,
        "suite": suite_id,
        "variety": config.variety.describe(),
        "params": params.as_dict(),
        "records": records,
        "summary": _summary(suite_id, records),
        "runtime_ms": round((time.perf_counter() - start) * 1000, 3),
    }
