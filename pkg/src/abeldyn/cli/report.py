"""Suite reports: records, JSON/CSV emission and schema validation."""
from __future__ import annotations

import csv
import io
import json
from decimal import Decimal, localcontext
from fractions import Fraction
from functools import lru_cache
from importlib import resources

import jsonschema

from ..spectral.roots import Interval

SCHEMA_VERSION = 1
VERDICTS = ("pass", "fail", "inconclusive")
CSV_COLUMNS = ("suite", "check_id", "sample", "k", "verdict", "expected",
               "certified_values", "ratios", "saturation_events", "runtime_ms")


def decimal_string(value, digits: int = 17) -> str:
    value = Fraction(value)
    with localcontext() as ctx:
        ctx.prec = digits
        return str(Decimal(value.numerator) / Decimal(value.denominator))


def interval_strings(value: Interval) -> list[str]:
    return value.as_strings()


def make_record(check_id: str, sample, k, verdict: str, inputs: dict, *, expected: str = "pass",
                certified_values: dict | None = None, ratios: dict | None = None,
                saturation_events=(), runtime_ms: float = 0.0) -> dict:
    if verdict not in VERDICTS:
        raise ValueError(f"bad verdict {verdict!r}")
    return {
        "check_id": check_id,
        "sample": str(sample),
        "k": k,
        "inputs": inputs,
        "verdict": verdict,
        "expected": expected,
        "certified_values": {
            name: interval_strings(v) if isinstance(v, Interval) else v
            for name, v in (certified_values or {}).items()
        },
        "ratios": {
            name: None if v is None else decimal_string(v) for name, v in (ratios or {}).items()
        },
        "saturation_events": list(saturation_events),
        "runtime_ms": round(runtime_ms, 3),
    }


def unexpected(record: dict) -> bool:
    return record["verdict"] != "inconclusive" and record["verdict"] != record["expected"]


def exit_code(report: dict) -> int:
    return 1 if any(unexpected(r) for r in report["records"]) else 0


@lru_cache(maxsize=1)
def schema() -> dict:
    text = resources.files(__package__).joinpath("report.schema.json").read_text(encoding="utf-8")
    return json.loads(text)


def validate(report: dict) -> None:
    jsonschema.validate(report, schema())


def strip_timing(report: dict) -> dict:
    """Copy of ``report`` without runtime fields, for determinism comparisons."""
    out = json.loads(json.dumps(report))
    out.pop("runtime_ms", None)
    for record in out["records"]:
        record.pop("runtime_ms", None)
    return out


def emit(report: dict, fmt: str = "json") -> bytes:
    if fmt == "json":
        validate(report)
        return (json.dumps(report, indent=2, sort_keys=True, ensure_ascii=False) + "\n").encode("utf-8")
    if fmt == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in report["records"]:
            writer.writerow([
                report["suite"], r["check_id"], r["sample"], "" if r["k"] is None else r["k"],
                r["verdict"], r["expected"],
                json.dumps(r["certified_values"], sort_keys=True, separators=(",", ":")),
                json.dumps(r["ratios"], sort_keys=True, separators=(",", ":")),
                ";".join(r["saturation_events"]), r["runtime_ms"],
            ])
        return buf.getvalue().encode("utf-8")
    raise ValueError(f"unknown format {fmt!r}; expected json or csv")
