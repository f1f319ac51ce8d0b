"""Parameter grids for sweeps.

A grid assigns every parameter of a family one of

* a number: ``1``, ``-3/2``, ``0.25``
* an inclusive range ``lo:hi:step`` (exact rational arithmetic)
* an expression in the other parameters, e.g. ``-beta*delta/alpha``

Points are produced in lexicographic order of the ranged parameters (the
order in which they appear in the family signature), so output is
deterministic.
"""
from __future__ import annotations

import ast
import itertools
import operator
import re
from dataclasses import dataclass
from fractions import Fraction

from .families import FamilyTag

MAX_POINTS = 100_000
NAMES = ("alpha", "beta", "gamma", "delta", "epsilon")

_BINOPS = {ast.Add: operator.add, ast.Sub: operator.sub, ast.Mult: operator.mul, ast.Div: operator.truediv,
           ast.Pow: operator.pow}
_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}
_RANGE = re.compile(r"^\s*([^:]+):([^:]+):([^:]+)\s*$")


class GridError(ValueError):
    """Malformed grid specification."""


def _fraction(text) -> Fraction:
    try:
        return Fraction(str(text).strip())
    except (ValueError, ZeroDivisionError):
        raise GridError(f"not a number: {text!r}") from None


def evaluate(expr: str, env: dict):
    """Evaluate an arithmetic expression over exact parameter values."""
    try:
        tree = ast.parse(expr, mode="eval")
    except SyntaxError as exc:
        raise GridError(f"bad expression {expr!r}: {exc.msg}") from None

    def ev(node):
        if isinstance(node, ast.Expression):
            return ev(node.body)
        if isinstance(node, ast.Constant) and isinstance(node.value, (int, float)) and not isinstance(node.value, bool):
            return Fraction(node.value) if isinstance(node.value, int) else _fraction(repr(node.value))
        if isinstance(node, ast.Name):
            if node.id not in env:
                raise GridError(f"unknown name {node.id!r} in {expr!r}")
            return env[node.id]
        if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
            right = ev(node.right)
            if isinstance(node.op, ast.Pow) and (not isinstance(right, Fraction) or right.denominator != 1):
                raise GridError(f"only integer powers are allowed in {expr!r}")
            return _BINOPS[type(node.op)](ev(node.left), right)
        if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
            return _UNARY[type(node.op)](ev(node.operand))
        raise GridError(f"unsupported syntax in {expr!r}")

    return ev(tree)


@dataclass(frozen=True)
class Axis:
    name: str
    values: tuple = ()
    expression: str | None = None


def parse_axis(name: str, spec) -> Axis:
    """One grid axis from a CLI string or a JSON value.

    JSON may also use ``{"range": [lo, hi, step]}`` or a list of values.
    """
    if isinstance(spec, dict):
        if "range" not in spec or len(spec["range"]) != 3:
            raise GridError(f"{name}: expected {{\"range\": [lo, hi, step]}}")
        return Axis(name, _range(name, *spec["range"]))
    if isinstance(spec, list):
        if not spec:
            raise GridError(f"{name}: empty value list")
        return Axis(name, tuple(_fraction(v) for v in spec))
    if isinstance(spec, bool):
        raise GridError(f"{name}: booleans are not parameters")
    if isinstance(spec, (int, float, Fraction)):
        return Axis(name, (_fraction(repr(spec) if isinstance(spec, float) else spec),))
    text = str(spec).strip()
    m = _RANGE.match(text)
    if m:
        return Axis(name, _range(name, *m.groups()))
    try:
        return Axis(name, (Fraction(text),))
    except (ValueError, ZeroDivisionError):
        return Axis(name, expression=text)


def _range(name, lo, hi, step) -> tuple:
    lo, hi, step = _fraction(lo), _fraction(hi), _fraction(step)
    if step <= 0:
        raise GridError(f"{name}: step must be positive")
    if hi < lo:
        raise GridError(f"{name}: empty range {lo}..{hi}")
    n = int((hi - lo) / step) + 1
    if n > MAX_POINTS:
        raise GridError(f"{name}: range has {n} points (limit {MAX_POINTS})")
    return tuple(lo + i * step for i in range(n))


def _order(axes: dict) -> list[str]:
    """Expression axes in dependency order."""
    pending = {n for n, a in axes.items() if a.expression is not None}
    done, order = {n for n in axes if n not in pending}, []
    while pending:
        ready = sorted(n for n in pending if _names(axes[n].expression) <= done)
        if not ready:
            raise GridError(f"circular or unresolved expressions: {', '.join(sorted(pending))}")
        for n in ready:
            order.append(n)
            done.add(n)
            pending.remove(n)
    return order


def _names(expr: str) -> set:
    try:
        return {n.id for n in ast.walk(ast.parse(expr, mode="eval")) if isinstance(n, ast.Name)}
    except SyntaxError as exc:
        raise GridError(f"bad expression {expr!r}: {exc.msg}") from None


def grid_points(tag, spec: dict):
    """Yield (values, reason) per grid point; reason is None for points whose
    expressions evaluate, otherwise a short diagnostic."""
    tag = FamilyTag.parse(tag)
    missing = [n for n in tag.required if n not in spec]
    if missing:
        raise GridError(f"{tag.value}: missing grid field(s) {', '.join(missing)}")
    extra = [n for n in spec if n not in tag.required]
    if extra:
        raise GridError(f"{tag.value}: unexpected grid field(s) {', '.join(extra)}")
    axes = {n: parse_axis(n, spec[n]) for n in tag.required}
    for n, a in axes.items():
        if a.expression is not None:
            unknown = _names(a.expression) - set(tag.required)
            if unknown:
                raise GridError(f"{n}: unknown name(s) {', '.join(sorted(unknown))} in {a.expression!r}")
    derived = _order(axes)
    free = [n for n in tag.required if axes[n].expression is None]
    total = 1
    for n in free:
        total *= len(axes[n].values)
    if total > MAX_POINTS:
        raise GridError(f"grid has {total} points (limit {MAX_POINTS})")
    for combo in itertools.product(*(axes[n].values for n in free)):
        env = dict(zip(free, combo))
        reason = None
        for n in derived:
            try:
                env[n] = evaluate(axes[n].expression, env)
            except ZeroDivisionError:
                reason = f"{n}: division by zero"
                break
        yield {n: env.get(n) for n in tag.required}, reason
