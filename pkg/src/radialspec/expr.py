"""Whitelisted arithmetic expressions for presets declared in JSON.

Expressions are parsed with :mod:`ast` and compiled into closures over
numpy ufuncs, so they accept scalars or arrays.  Only arithmetic, powers,
a fixed set of elementary functions, the constants ``pi`` and ``e`` and a
single free variable are accepted.
"""

import ast
import math
import operator

import numpy as np

from .errors import ConfigError

FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "tan": np.tan,
    "arcsin": np.arcsin,
    "arccos": np.arccos,
    "arctan": np.arctan,
    "atan": np.arctan,
    "sinh": np.sinh,
    "cosh": np.cosh,
    "tanh": np.tanh,
    "exp": np.exp,
    "log": np.log,
    "sqrt": np.sqrt,
    "abs": np.abs,
}

# Scalar twins of FUNCTIONS; ODE right-hand sides call expressions one float
# at a time and numpy 0-d dispatch dominates the cost there.
SCALAR_FUNCTIONS = {
    "sin": math.sin,
    "cos": math.cos,
    "tan": math.tan,
    "arcsin": math.asin,
    "arccos": math.acos,
    "arctan": math.atan,
    "atan": math.atan,
    "sinh": math.sinh,
    "cosh": math.cosh,
    "tanh": math.tanh,
    "exp": math.exp,
    "log": math.log,
    "sqrt": math.sqrt,
    "abs": abs,
}

CONSTANTS = {"pi": math.pi, "e": math.e}


def _scalar_pow(a, b):
    out = a**b
    return math.nan if isinstance(out, complex) else out


_BINOPS = {
    ast.Add: operator.add,
    ast.Sub: operator.sub,
    ast.Mult: operator.mul,
    ast.Div: operator.truediv,
    ast.Pow: operator.pow,
}

_UNARY = {ast.USub: operator.neg, ast.UAdd: operator.pos}


def _compile(node, var, table, power):
    if isinstance(node, ast.Expression):
        return _compile(node.body, var, table, power)
    if isinstance(node, ast.Constant):
        if isinstance(node.value, bool) or not isinstance(node.value, (int, float)):
            raise ConfigError(f"unsupported literal {node.value!r}")
        value = float(node.value)
        return lambda x: value + 0.0 * x
    if isinstance(node, ast.Name):
        if node.id == var:
            return lambda x: x
        if node.id in CONSTANTS:
            value = CONSTANTS[node.id]
            return lambda x: value + 0.0 * x
        raise ConfigError(f"unknown name {node.id!r} (variable is {var!r})")
    if isinstance(node, ast.BinOp) and type(node.op) in _BINOPS:
        op = power if isinstance(node.op, ast.Pow) else _BINOPS[type(node.op)]
        left = _compile(node.left, var, table, power)
        right = _compile(node.right, var, table, power)
        return lambda x: op(left(x), right(x))
    if isinstance(node, ast.UnaryOp) and type(node.op) in _UNARY:
        op = _UNARY[type(node.op)]
        inner = _compile(node.operand, var, table, power)
        return lambda x: op(inner(x))
    if isinstance(node, ast.Call):
        if not isinstance(node.func, ast.Name) or node.func.id not in FUNCTIONS:
            raise ConfigError(f"function not allowed: {ast.dump(node.func)}")
        if len(node.args) != 1 or node.keywords:
            raise ConfigError(f"{node.func.id} takes exactly one argument")
        fn = table[node.func.id]
        inner = _compile(node.args[0], var, table, power)
        return lambda x: fn(inner(x))
    raise ConfigError(f"unsupported syntax: {type(node).__name__}")


def compile_expression(source, var):
    """Compile ``source`` into a function of the single variable ``var``.

    >>> f = compile_expression("2 - exp(-t)", "t")
    >>> float(f(0.0))
    1.0
    """
    if not isinstance(source, str):
        raise ConfigError(f"expression must be a string, got {type(source).__name__}")
    try:
        tree = ast.parse(source.replace("^", "**"), mode="eval")
    except SyntaxError as exc:
        raise ConfigError(f"cannot parse expression {source!r}: {exc.msg}") from None
    vector = _compile(tree, var, FUNCTIONS, operator.pow)
    scalar = _compile(tree, var, SCALAR_FUNCTIONS, _scalar_pow)

    def evaluate(x):
        if isinstance(x, (float, int)):
            try:
                return float(scalar(float(x)))
            except (ValueError, OverflowError, ZeroDivisionError):
                pass
        out = vector(np.asarray(x, dtype=float))
        return float(out) if np.ndim(out) == 0 else out

    evaluate.source = source
    return evaluate
