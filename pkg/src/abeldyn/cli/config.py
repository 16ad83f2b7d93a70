"""YAML variety configs, format version 1.

    version: 1
    factors:
      - {curve_id: E, multiplicity: 2, order: Z}
      - {curve_id: F, multiplicity: 1, order: {t: 0, d: 1}}
    endomorphisms:
      phi: [[[1, 1], [0, 0], [0, 0]], ...]   # n×n matrix of [u, v] pairs, u + vω
    correspondences:
      c: graph(phi) + 1/2*transpose(2)

Endomorphism entries may also be bare integers (v = 0).  Correspondences may
refer to those defined above them.  All problems found are reported together,
each with its 1-based line number.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field

import yaml

from ..abelian import AbelianVariety, EndOrder, Endomorphism, Factor
from ..correspondence import Correspondence
from ..errors import InputError
from .expr import parse_expression

FORMAT_VERSION = 1
_CURVE_ID = re.compile(r"[A-Za-z][A-Za-z0-9_']*")


class ConfigError(InputError):
    def __init__(self, errors: list[tuple[int | None, str]]):
        self.errors = errors
        super().__init__("\n".join(f"line {ln}: {msg}" if ln else msg for ln, msg in errors))


@dataclass
class VarietyConfig:
    variety: AbelianVariety
    endomorphisms: dict[str, Endomorphism] = field(default_factory=dict)
    correspondences: dict[str, Correspondence] = field(default_factory=dict)
    expressions: dict[str, str] = field(default_factory=dict)
    digest: str = ""

    def correspondence(self, text: str) -> Correspondence:
        """A configured name or an inline expression."""
        if text in self.correspondences:
            return self.correspondences[text]
        return parse_expression(text, self.variety, self.endomorphisms, self.correspondences)


def _line(node) -> int:
    return node.start_mark.line + 1


def _mapping(node) -> dict:
    """Key string -> (key node, value node) for a YAML mapping node."""
    return {k.value: (k, v) for k, v in node.value}


class _Parser:
    def __init__(self):
        self.errors: list[tuple[int | None, str]] = []

    def fail(self, node, msg):
        self.errors.append((_line(node) if node is not None else None, msg))

    def scalar(self, node, kind, what):
        if not isinstance(node, yaml.ScalarNode):
            self.fail(node, f"{what} must be a scalar")
            return None
        if kind is not int:
            return node.value
        try:
            value = yaml.safe_load(node.value)
        except yaml.YAMLError:
            value = None
        if not isinstance(value, int) or isinstance(value, bool):
            self.fail(node, f"{what} must be an integer, got {node.value!r}")
            return None
        return value

    def order(self, node):
        if isinstance(node, yaml.ScalarNode):
            if node.value == "Z":
                return EndOrder.integers()
            self.fail(node, f"order must be 'Z' or {{t, d}}, got {node.value!r}")
            return None
        if not isinstance(node, yaml.MappingNode):
            self.fail(node, "order must be 'Z' or {t, d}")
            return None
        fields = _mapping(node)
        unknown = set(fields) - {"t", "d"}
        for key in sorted(unknown):
            self.fail(fields[key][0], f"unknown order field {key!r}")
        if "t" not in fields or "d" not in fields:
            self.fail(node, "order needs both t and d")
            return None
        t = self.scalar(fields["t"][1], int, "t")
        d = self.scalar(fields["d"][1], int, "d")
        if t is None or d is None:
            return None
        try:
            return EndOrder.cm(t, d)
        except InputError as exc:
            self.fail(node, str(exc))
            return None

    def factors(self, node):
        if not isinstance(node, yaml.SequenceNode) or not node.value:
            self.fail(node, "factors must be a non-empty list")
            return None
        out = []
        for item in node.value:
            if not isinstance(item, yaml.MappingNode):
                self.fail(item, "each factor must be a mapping")
                continue
            fields = _mapping(item)
            for key in sorted(set(fields) - {"curve_id", "multiplicity", "order"}):
                self.fail(fields[key][0], f"unknown factor field {key!r}")
            if "curve_id" not in fields:
                self.fail(item, "factor is missing curve_id")
                continue
            curve = self.scalar(fields["curve_id"][1], str, "curve_id")
            mult = self.scalar(fields["multiplicity"][1], int, "multiplicity") if "multiplicity" in fields else 1
            order = self.order(fields["order"][1]) if "order" in fields else EndOrder.integers()
            if curve is None or mult is None or order is None:
                continue
            if not _CURVE_ID.fullmatch(str(curve)):
                self.fail(fields["curve_id"][1], f"unknown curve_id {curve!r}: use a name like E or E1")
                continue
            if any(f.curve_id == curve for f in out):
                self.fail(fields["curve_id"][1], f"duplicate curve_id {curve!r}")
                continue
            if mult < 1:
                self.fail(fields["multiplicity"][1], "multiplicity must be positive")
                continue
            out.append(Factor(str(curve), mult, order))
        return out

    def element(self, node, where):
        if isinstance(node, yaml.ScalarNode):
            u = self.scalar(node, int, f"{where} entry")
            return None if u is None else (u, 0)
        if isinstance(node, yaml.SequenceNode) and len(node.value) == 2:
            u = self.scalar(node.value[0], int, f"{where} entry")
            v = self.scalar(node.value[1], int, f"{where} entry")
            return None if u is None or v is None else (u, v)
        self.fail(node, f"{where}: entries must be integers or [u, v] pairs")
        return None

    def endomorphism(self, name, node, variety):
        n = variety.n
        if not isinstance(node, yaml.SequenceNode) or len(node.value) != n:
            self.fail(node, f"endomorphism {name!r} must be a list of {n} rows")
            return None
        rows = []
        for row in node.value:
            if not isinstance(row, yaml.SequenceNode) or len(row.value) != n:
                self.fail(row, f"endomorphism {name!r}: each row needs {n} entries")
                return None
            rows.append([self.element(x, f"endomorphism {name!r}") for x in row.value])
        if any(x is None for row in rows for x in row):
            return None
        for i, row in enumerate(rows):
            for j, (u, v) in enumerate(row):
                if (u or v) and not variety.same_curve(i, j):
                    self.fail(node.value[i].value[j],
                              f"endomorphism {name!r}: entry ({i + 1}, {j + 1}) links different curves")
                    return None
                if v and not variety.order_of(i).quadratic:
                    self.fail(node.value[i].value[j],
                              f"endomorphism {name!r}: ω-part on a curve with End = Z")
                    return None
        return Endomorphism(variety, tuple(tuple(r) for r in rows))


def parse_config(text: str) -> VarietyConfig:
    try:
        root = yaml.compose(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        raise ConfigError([(mark.line + 1 if mark else None, f"malformed YAML: {getattr(exc, 'problem', exc)}")])
    if not isinstance(root, yaml.MappingNode):
        raise ConfigError([(None, "config must be a mapping")])
    p = _Parser()
    top = _mapping(root)
    for key in sorted(set(top) - {"version", "factors", "endomorphisms", "correspondences"}):
        p.fail(top[key][0], f"unknown top-level key {key!r}")
    if "version" not in top:
        p.fail(root, "missing version")
    elif p.scalar(top["version"][1], int, "version") != FORMAT_VERSION:
        p.fail(top["version"][1], f"unsupported version; expected {FORMAT_VERSION}")
    if "factors" not in top:
        p.fail(root, "missing factors")
        raise ConfigError(p.errors)
    factors = p.factors(top["factors"][1])
    if p.errors or not factors:
        raise ConfigError(p.errors or [(None, "no factors")])
    variety = AbelianVariety(tuple(factors))
    config = VarietyConfig(variety, digest=hashlib.sha256(text.encode()).hexdigest())

    if "endomorphisms" in top:
        node = top["endomorphisms"][1]
        if not isinstance(node, yaml.MappingNode):
            p.fail(node, "endomorphisms must be a mapping")
        else:
            for key, value in node.value:
                f = p.endomorphism(key.value, value, variety)
                if f is not None:
                    config.endomorphisms[key.value] = f

    if "correspondences" in top:
        node = top["correspondences"][1]
        if not isinstance(node, yaml.MappingNode):
            p.fail(node, "correspondences must be a mapping")
        else:
            for key, value in node.value:
                name = key.value
                if name in config.endomorphisms or name in ("delta", "Delta"):
                    p.fail(key, f"correspondence name {name!r} clashes with an existing name")
                    continue
                if not isinstance(value, yaml.ScalarNode):
                    p.fail(value, f"correspondence {name!r} must be an expression string")
                    continue
                try:
                    config.correspondences[name] = parse_expression(
                        value.value, variety, config.endomorphisms, config.correspondences
                    )
                    config.expressions[name] = value.value
                except InputError as exc:
                    p.fail(value, f"correspondence {name!r}: {exc}")
    if p.errors:
        raise ConfigError(p.errors)
    return config


def load_config(path) -> VarietyConfig:
    with open(path, encoding="utf-8") as fh:
        return parse_config(fh.read())
