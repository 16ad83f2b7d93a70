"""The correspondence expression language.

    graph(F)        graph of endomorphism F (a config name or an integer m for [m])
    transpose(F)    transposed graph of the isogeny F
    transpose(A)    transpose of a correspondence expression
    compose(A, B)   A ∘ B (B applied first)
    power(A, m)     m-fold self-composition
    A + q*B         nonnegative rational combinations; q may be written 3/5
    delta           the diagonal

Bare names refer to previously defined correspondences.  Parsing goes through
Python's ``ast`` so syntax errors carry a column offset.
"""
from __future__ import annotations

import ast
from fractions import Fraction
from typing import Mapping

from ..abelian import AbelianVariety, Endomorphism, multiplication_map
from ..correspondence import (
    Correspondence,
    compose,
    delta,
    graph,
    power,
    transpose,
    transpose_graph,
)
from ..errors import InputError


class ExpressionError(InputError):
    def __init__(self, message: str, column: int | None = None):
        self.column = column
        super().__init__(message if column is None else f"column {column + 1}: {message}")


class _Evaluator:
    def __init__(self, variety, endomorphisms, correspondences):
        self.variety = variety
        self.endos = endomorphisms
        self.corrs = correspondences

    def endo(self, node) -> Endomorphism:
        if isinstance(node, ast.Name):
            if node.id not in self.endos:
                raise ExpressionError(f"unknown endomorphism {node.id!r}", node.col_offset)
            return self.endos[node.id]
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return multiplication_map(node.value, self.variety)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub) and isinstance(node.operand, ast.Constant):
            return multiplication_map(-node.operand.value, self.variety)
        raise ExpressionError("expected an endomorphism name or integer", getattr(node, "col_offset", None))

    def number(self, node) -> Fraction:
        if isinstance(node, ast.Constant) and isinstance(node.value, int) and not isinstance(node.value, bool):
            return Fraction(node.value)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return -self.number(node.operand)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            den = self.number(node.right)
            if den == 0:
                raise ExpressionError("division by zero", node.col_offset)
            return self.number(node.left) / den
        raise ExpressionError("expected a rational constant", getattr(node, "col_offset", None))

    def is_number(self, node) -> bool:
        """Structural test only; evaluation errors surface from ``number``."""
        if isinstance(node, ast.Constant):
            return isinstance(node.value, int) and not isinstance(node.value, bool)
        if isinstance(node, ast.UnaryOp) and isinstance(node.op, ast.USub):
            return self.is_number(node.operand)
        if isinstance(node, ast.BinOp) and isinstance(node.op, ast.Div):
            return self.is_number(node.left) and self.is_number(node.right)
        return False

    def corr(self, node) -> Correspondence:
        if isinstance(node, ast.Name):
            if node.id in ("delta", "Delta"):
                return delta(self.variety)
            if node.id in self.corrs:
                return self.corrs[node.id]
            if node.id in self.endos:
                raise ExpressionError(
                    f"{node.id!r} is an endomorphism; write graph({node.id})", node.col_offset
                )
            raise ExpressionError(f"unknown correspondence {node.id!r}", node.col_offset)
        if isinstance(node, ast.BinOp):
            if isinstance(node.op, ast.Add):
                return self.corr(node.left) + self.corr(node.right)
            if isinstance(node.op, ast.Mult):
                if self.is_number(node.left):
                    return self.scale(self.number(node.left), node.right, node)
                if self.is_number(node.right):
                    return self.scale(self.number(node.right), node.left, node)
            raise ExpressionError("only '+' and 'q*A' are allowed", node.col_offset)
        if isinstance(node, ast.Call) and isinstance(node.func, ast.Name):
            return self.call(node)
        raise ExpressionError("unsupported expression", getattr(node, "col_offset", None))

    def scale(self, q: Fraction, node, where) -> Correspondence:
        if q < 0:
            raise ExpressionError("coefficients must be nonnegative", where.col_offset)
        return q * self.corr(node)

    def call(self, node: ast.Call) -> Correspondence:
        name = node.func.id
        args = node.args
        if node.keywords:
            raise ExpressionError("keyword arguments are not allowed", node.col_offset)
        arity = {"graph": 1, "transpose": 1, "compose": 2, "power": 2}
        if name not in arity:
            raise ExpressionError(f"unknown function {name!r}", node.col_offset)
        if len(args) != arity[name]:
            raise ExpressionError(f"{name} takes {arity[name]} argument(s)", node.col_offset)
        if name == "graph":
            return graph(self.endo(args[0]))
        if name == "transpose":
            arg = args[0]
            endo_like = (isinstance(arg, ast.Name) and arg.id in self.endos) or self.is_number(arg)
            if endo_like:
                return transpose_graph(self.endo(arg))
            return transpose(self.corr(arg))
        if name == "compose":
            return compose(self.corr(args[0]), self.corr(args[1]))
        m = self.number(args[1])
        if m.denominator != 1 or m < 0:
            raise ExpressionError("power needs a nonnegative integer exponent", args[1].col_offset)
        return power(self.corr(args[0]), int(m))


def parse_expression(
    text: str,
    variety: AbelianVariety,
    endomorphisms: Mapping[str, Endomorphism] | None = None,
    correspondences: Mapping[str, Correspondence] | None = None,
) -> Correspondence:
    try:
        tree = ast.parse(text.strip(), mode="eval")
    except SyntaxError as exc:
        raise ExpressionError(f"syntax error: {exc.msg}", (exc.offset or 1) - 1) from None
    return _Evaluator(variety, endomorphisms or {}, correspondences or {}).corr(tree.body)
