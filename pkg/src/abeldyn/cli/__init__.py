"""Config ingestion, the expression language, stress suites and reports."""
from .config import ConfigError, VarietyConfig, load_config, parse_config
from .expr import ExpressionError, parse_expression
from .report import emit, exit_code, strip_timing, validate
from .sampling import SuiteParams
from .suites import SUITES, run_suite

__all__ = [
    "ConfigError", "ExpressionError", "SUITES", "SuiteParams", "VarietyConfig", "emit",
    "exit_code", "load_config", "parse_config", "parse_expression", "run_suite",
    "strip_timing", "validate",
]
