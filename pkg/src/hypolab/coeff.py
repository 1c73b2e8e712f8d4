"""Coefficient functions: a tiny expression language and quadrature that
survives exponentially flat integrands.

Weights like exp(-|y|^(-2)) underflow double precision on most of a small
interval while their interval averages still carry the information the
stopping-time scans need (|log a_I| up to ~1e6).  Everything here is built
around that constraint: expressions written as exp(g) keep g around as an
exact log-domain evaluator, and the adaptive quadrature can run entirely in
the log domain.

Grammar (EBNF)::

    expr    = term { ("+" | "-") term } ;
    term    = factor { ("*" | "/") factor } ;
    factor  = "-" factor | power ;
    power   = atom [ "^" factor ] ;            (* right associative *)
    atom    = NUMBER | IDENT | IDENT "(" expr { "," expr } ")"
            | "(" expr ")" ;

Functions: abs, exp, log (one argument), min, max (two arguments).
Constants: e, pi.  Exactly one free variable is allowed; its name is
whatever identifier the source uses (y, x, t, ...).
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Union

import numpy as np

__all__ = [
    "CoeffFn",
    "Interval",
    "ExprError",
    "EvalError",
    "QuadratureError",
    "parse_coeff",
    "eval_at",
    "adaptive_integral",
    "interval_integral",
    "interval_integral_log",
]

_LOG4 = math.log(4.0)
_FUNCS1 = ("abs", "exp", "log")
_FUNCS2 = ("min", "max")
_CONSTS = {"e": math.e, "pi": math.pi}


class ExprError(ValueError):
    """Syntax or validation problem in an expression; carries the position."""

    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


class EvalError(ValueError):
    """Evaluation outside the domain or a non-finite intermediate."""


class QuadratureError(RuntimeError):
    """Adaptive quadrature ran out of subdivisions; carries the last bracket."""

    def __init__(self, message: str, bracket: tuple[float, float]):
        self.bracket = bracket
        super().__init__(f"{message}; last bracket [{bracket[0]!r}, {bracket[1]!r}]")


# ---------------------------------------------------------------------------
# AST
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: float


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Neg:
    arg: "Node"


@dataclass(frozen=True)
class Bin:
    op: str
    left: "Node"
    right: "Node"


@dataclass(frozen=True)
class Call:
    fn: str
    args: tuple["Node", ...]


Node = Union[Num, Var, Neg, Bin, Call]

_TOKEN = re.compile(r"\s*(?:(\d+\.\d*|\.\d+|\d+)(?:[eE][+-]?\d+)?|([A-Za-z_]\w*)|([()+\-*/^,]))")
_NUMBER = re.compile(r"(\d+\.\d*|\.\d+|\d+)([eE][+-]?\d+)?")


def _tokenize(source: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    n = len(source)
    while pos < n:
        while pos < n and source[pos].isspace():
            pos += 1
        if pos >= n:
            break
        m = _NUMBER.match(source, pos)
        if m:
            tokens.append(("num", m.group(0), pos))
            pos = m.end()
            continue
        ch = source[pos]
        if ch.isalpha() or ch == "_":
            j = pos + 1
            while j < n and (source[j].isalnum() or source[j] == "_"):
                j += 1
            tokens.append(("ident", source[pos:j], pos))
            pos = j
            continue
        if ch in "()+-*/^,":
            tokens.append(("op", ch, pos))
            pos += 1
            continue
        raise ExprError(f"unexpected character {ch!r}", pos)
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, source: str):
        self.tokens = _tokenize(source)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, text: str):
        kind, val, pos = self.take()
        if val != text:
            raise ExprError(f"expected {text!r}, found {val or 'end of input'!r}", pos)

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ExprError(f"trailing input {val!r}", pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.peek()[1] in ("+", "-"):
            op = self.take()[1]
            node = Bin(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.peek()[1] in ("*", "/"):
            op = self.take()[1]
            node = Bin(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.peek()[1] == "-":
            self.take()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            return Bin("^", base, self.factor())
        return base

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "num":
            return Num(float(val))
        if kind == "ident":
            if self.peek()[1] == "(":
                self.take()
                args = [self.expr()]
                while self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                if val in _FUNCS1:
                    if len(args) != 1:
                        raise ExprError(f"{val} takes one argument", pos)
                elif val in _FUNCS2:
                    if len(args) != 2:
                        raise ExprError(f"{val} takes two arguments", pos)
                else:
                    raise ExprError(f"unknown function {val!r}", pos)
                return Call(val, tuple(args))
            if val in _CONSTS:
                return Num(_CONSTS[val])
            return Var(val)
        if val == "(":
            node = self.expr()
            self.expect(")")
            return node
        raise ExprError(f"expected a value, found {val or 'end of input'!r}", pos)


def _free_var(node: Node) -> str | None:
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        return _free_var(node.arg)
    if isinstance(node, Bin):
        a = _free_var(node.left)
        b = _free_var(node.right)
        if a and b and a != b:
            raise ExprError(f"more than one variable: {a!r} and {b!r}")
        return a or b
    if isinstance(node, Call):
        found = None
        for arg in node.args:
            v = _free_var(arg)
            if v and found and v != found:
                raise ExprError(f"more than one variable: {found!r} and {v!r}")
            found = found or v
        return found
    return None


def _ev(node: Node, y):
    if isinstance(node, Num):
        return np.float64(node.value) if np.isscalar(y) else np.full_like(np.asarray(y, float), node.value)
    if isinstance(node, Var):
        return np.float64(y) if np.isscalar(y) else np.asarray(y, float)
    if isinstance(node, Neg):
        return -_ev(node.arg, y)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore", under="ignore"):
        if isinstance(node, Bin):
            a = _ev(node.left, y)
            b = _ev(node.right, y)
            if node.op == "+":
                return a + b
            if node.op == "-":
                return a - b
            if node.op == "*":
                return a * b
            if node.op == "/":
                return np.divide(a, b)
            return np.power(a, b)
        a = _ev(node.args[0], y)
        if node.fn == "abs":
            return np.abs(a)
        if node.fn == "exp":
            return np.exp(a)
        if node.fn == "log":
            return np.log(a)
        b = _ev(node.args[1], y)
        return np.minimum(a, b) if node.fn == "min" else np.maximum(a, b)


def _pretty(node: Node, parent_prec: int = 0) -> str:
    # precedence levels: +- =1, */ =2, unary- =3, ^ =4
    if isinstance(node, Num):
        v = node.value
        if v == math.e:
            return "e"
        if v == math.pi:
            return "pi"
        return repr(int(v)) if float(v).is_integer() and abs(v) < 1e15 else repr(v)
    if isinstance(node, Var):
        return node.name
    if isinstance(node, Neg):
        s = f"-{_pretty(node.arg, 3)}"
        return f"({s})" if parent_prec > 3 else s
    if isinstance(node, Call):
        return f"{node.fn}({', '.join(_pretty(a) for a in node.args)})"
    prec = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}[node.op]
    left = _pretty(node.left, prec if node.op != "^" else prec + 1)
    right = _pretty(node.right, prec + 1 if node.op in ("-", "/") else prec)
    s = f"{left} {node.op} {right}" if node.op in ("+", "-") else f"{left}{node.op}{right}"
    return f"({s})" if prec < parent_prec else s


# ---------------------------------------------------------------------------
# CoeffFn
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CoeffFn:
    """A scalar coefficient on a closed interval, built from expression text.

    ``log_form`` is present exactly when the top-level node of the source is
    exp(...); it evaluates log f(y) without underflow.  ``parity`` and
    ``monotone_flag`` are sampled metadata, not proofs.
    """

    source: str
    expr: Node = field(repr=False)
    log_form: Node | None = field(repr=False, default=None)
    parity: str = "none"
    monotone_flag: str = "none"
    domain: tuple[float, float] = (-1.0, 1.0)

    def __call__(self, y):
        return _ev(self.expr, y)

    def eval_at(self, y: float) -> float:
        """Pointwise value; removable singularities of an exponent give 0."""
        if not (self.domain[0] <= y <= self.domain[1]):
            raise EvalError(f"{y!r} outside domain {self.domain}")
        v = float(_ev(self.expr, y))
        if math.isnan(v):
            raise EvalError(f"expression is undefined at {y!r}")
        return v

    def log_eval(self, y: float) -> float:
        """log f(y), exact in the exponent when the source is exp(...)."""
        if self.log_form is not None:
            return float(_ev(self.log_form, y))
        v = self.eval_at(y)
        return math.log(v) if v > 0.0 else -math.inf

    def log_values(self, y):
        if self.log_form is not None:
            return _ev(self.log_form, y)
        with np.errstate(divide="ignore"):
            return np.log(_ev(self.expr, y))

    def pretty(self) -> str:
        return _pretty(self.expr)


def _detect_log_form(expr: Node) -> Node | None:
    """log f for sources shaped exp(g), c*exp(g), exp(g)*c or exp(g)/c."""
    if isinstance(expr, Call) and expr.fn == "exp":
        return expr.args[0]
    if isinstance(expr, Bin) and expr.op in ("*", "/"):
        left, right = expr.left, expr.right
        if expr.op == "*" and isinstance(left, Num) and left.value > 0:
            inner = _detect_log_form(right)
            if inner is not None:
                return Bin("+", Num(math.log(left.value)), inner)
        if isinstance(right, Num) and right.value > 0:
            inner = _detect_log_form(left)
            if inner is not None:
                scale = math.log(right.value)
                return Bin("+", Num(scale if expr.op == "*" else -scale), inner)
    return None


def parse_coeff(
    source: str,
    domain: tuple[float, float] = (-1.0, 1.0),
    require_nonneg: bool = True,
) -> CoeffFn:
    """Parse expression text into a :class:`CoeffFn`.

    With ``require_nonneg`` (the default for weights) the expression is
    rejected if it goes negative anywhere on a 1001-point scan of ``domain``.
    Signed lower-order coefficients should pass ``require_nonneg=False``.
    """
    expr = _Parser(source).parse()
    _free_var(expr)  # raises if more than one variable appears
    lo, hi = float(domain[0]), float(domain[1])
    if not lo < hi:
        raise ExprError(f"empty domain {domain!r}")
    ys = np.linspace(lo, hi, 1001)
    vals = _ev(expr, ys)
    vals = np.asarray(vals, float)
    if np.isnan(vals).any():
        bad = float(ys[int(np.argmax(np.isnan(vals)))])
        raise ExprError(f"expression is undefined near y = {bad:.6g}")
    if require_nonneg and (vals < 0).any():
        bad = float(ys[int(np.argmax(vals < 0))])
        raise ExprError(f"negative value at y = {bad:.6g}: not a valid weight")

    log_form = _detect_log_form(expr)

    ysym = np.linspace(0.0, max(abs(lo), abs(hi)), 101)[1:]
    even = "none"
    if lo < 0 < hi:
        left = _ev(expr, -ysym)
        right = _ev(expr, ysym)
        ok = ~(np.isnan(left) | np.isnan(right))
        if ok.all() and np.array_equal(left, right):
            even = "even"

    mono = "none"
    if hi > 0:
        pos = np.asarray(_ev(expr, np.linspace(0.0, hi, 256)), float)
        if not np.isnan(pos).any() and (pos >= 0).all() and (np.diff(pos) >= 0).all():
            mono = "nonneg-increasing-on-positive-axis"

    return CoeffFn(source=source, expr=expr, log_form=log_form,
                   parity=even, monotone_flag=mono, domain=(lo, hi))


def eval_at(f: CoeffFn, y: float) -> float:
    return f.eval_at(y)


# ---------------------------------------------------------------------------
# Intervals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Interval:
    center: float
    half_width: float

    def __post_init__(self):
        if not self.half_width > 0:
            raise ValueError(f"half_width must be positive, got {self.half_width!r}")

    @property
    def lo(self) -> float:
        return self.center - self.half_width

    @property
    def hi(self) -> float:
        return self.center + self.half_width

    @property
    def length(self) -> float:
        return 2.0 * self.half_width

    def tripled(self) -> "Interval":
        return Interval(self.center, 3.0 * self.half_width)

    def contains(self, other: "Interval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi


# ---------------------------------------------------------------------------
# Quadrature
# ---------------------------------------------------------------------------

MAX_DEPTH = 60


def _simpson(fa, fm, fb, a, b):
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb)


def _adapt(fun, a, fa, b, fb, m, fm, whole, tol_abs, depth, root):
    lm = 0.5 * (a + m)
    rm = 0.5 * (m + b)
    flm = fun(lm)
    frm = fun(rm)
    left = _simpson(fa, flm, fm, a, m)
    right = _simpson(fm, frm, fb, m, b)
    s2 = left + right
    if abs(s2 - whole) <= 15.0 * tol_abs:
        return s2 + (s2 - whole) / 15.0
    if depth <= 0:
        raise QuadratureError("adaptive quadrature did not converge", (a, b))
    return (_adapt(fun, a, fa, m, fm, lm, flm, left, 0.5 * tol_abs, depth - 1, root)
            + _adapt(fun, m, fm, b, fb, rm, frm, right, 0.5 * tol_abs, depth - 1, root))


def _integrate_direct(fun, a, b, tol):
    if a == b:
        return 0.0
    pieces = [(a, 0.0), (b, 0.0)]
    if a < 0.0 < b:
        pieces = [(a, 0.0), (0.0, 0.0), (b, 0.0)]  # forced split at the flat point
    xs = [p for p, _ in pieces]
    total = 0.0
    for lo, hi in zip(xs[:-1], xs[1:]):
        m = 0.5 * (lo + hi)
        flo, fm, fhi = fun(lo), fun(m), fun(hi)
        whole = _simpson(flo, fm, fhi, lo, hi)
        scale = max(abs(whole), (hi - lo) * max(abs(flo), abs(fm), abs(fhi)), 1e-300)
        total += _adapt(fun, lo, flo, hi, fhi, m, fm, whole, tol * scale, MAX_DEPTH, (lo, hi))
    return total


def _lse(vals):
    m = max(vals)
    if m == -math.inf:
        return -math.inf
    return m + math.log(sum(math.exp(v - m) for v in vals))


def _log_simpson(la, lm, lb, a, b):
    return math.log((b - a) / 6.0) + _lse((la, lm + _LOG4, lb))


def _adapt_log(lfun, a, la, b, lb, m, lm_, whole, tol, depth, floor):
    lmid = 0.5 * (a + m)
    rmid = 0.5 * (m + b)
    if not (a < lmid < m < rmid < b):
        return whole  # float resolution exhausted
    llm = lfun(lmid)
    lrm = lfun(rmid)
    left = _log_simpson(la, llm, lm_, a, m)
    right = _log_simpson(lm_, lrm, lb, m, b)
    s2 = _lse((left, right))
    if s2 == -math.inf and whole == -math.inf:
        return -math.inf
    # a piece contributing nothing at the requested relative accuracy is done
    if s2 <= floor and whole <= floor:
        return s2
    # |S - S2| <= 15 tol |S2| in log space
    if s2 > -math.inf and abs(math.expm1(min(whole - s2, 700.0))) <= 15.0 * tol:
        corr = -math.expm1(whole - s2) / 15.0
        return s2 + math.log1p(corr) if corr > -1.0 else s2
    if depth <= 0:
        raise QuadratureError("log-domain quadrature did not converge", (a, b))
    return _lse((
        _adapt_log(lfun, a, la, m, lm_, lmid, llm, left, tol, depth - 1, floor),
        _adapt_log(lfun, m, lm_, b, lb, rmid, lrm, right, tol, depth - 1, floor),
    ))


def _integrate_log(lfun, a, b, tol):
    if a >= b:
        return -math.inf
    xs = [a, 0.0, b] if a < 0.0 < b else [a, b]
    panels = []
    for lo, hi in zip(xs[:-1], xs[1:]):
        step = (hi - lo) / 8.0
        sub = [(lo + i * step, lo + (i + 1) * step) for i in range(7)] + [(lo + 7 * step, hi)]
        sub = [(u, v) for u, v in sub if v > u]
        panels.extend(sub if sub else ([(lo, hi)] if hi > lo else []))
    if not panels:
        return -math.inf
    nodes = {}
    for lo, hi in panels:
        for y in (lo, 0.5 * (lo + hi), hi):
            if y not in nodes:
                nodes[y] = lfun(y)
    ref = _lse([_log_simpson(nodes[lo], nodes[0.5 * (lo + hi)], nodes[hi], lo, hi)
                for lo, hi in panels])
    # The seed estimate can overshoot when the mass sits in a thin sliver;
    # re-run with the floor lowered to the result until it is consistent.
    for _ in range(40):
        floor = ref + math.log(tol) - math.log(64.0) if ref > -math.inf else -math.inf
        parts = [
            _adapt_log(lfun, lo, nodes[lo], hi, nodes[hi], 0.5 * (lo + hi),
                       nodes[0.5 * (lo + hi)],
                       _log_simpson(nodes[lo], nodes[0.5 * (lo + hi)], nodes[hi], lo, hi),
                       tol, MAX_DEPTH, floor)
            for lo, hi in panels
        ]
        result = _lse(parts)
        if result == -math.inf or result >= ref - 1.0:
            return result
        ref = result
    return result


def interval_integral_log(f: CoeffFn, I: Interval, tol: float = 1e-9) -> float:
    """log of the interval average's integral, robust far below underflow.

    Requires a nonnegative integrand.  Uses the exact log-domain evaluator
    when the source is exp(...), so values like log a_I = -1e6 come out
    fully resolved.  Returns -inf for an identically vanishing integrand.
    """
    lo, hi = f.domain
    if I.lo < lo or I.hi > hi:
        raise EvalError(f"interval [{I.lo}, {I.hi}] outside domain {f.domain}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    if f.log_form is not None:
        g = f.log_form
        return _integrate_log(lambda y: float(_ev(g, y)), I.lo, I.hi, tol)
    value = _integrate_direct(lambda y: float(_ev(f.expr, y)), I.lo, I.hi, tol)
    if value < 0:
        raise EvalError("negative integrand in interval_integral_log")
    return math.log(value) if value > 0.0 else -math.inf


def adaptive_integral(fun, a: float, b: float, tol: float = 1e-9) -> float:
    """Adaptive Simpson for a plain (possibly signed) scalar callable."""
    if not tol > 0:
        raise ValueError("tol must be positive")
    if a == b:
        return 0.0
    sign = 1.0
    if b < a:
        a, b, sign = b, a, -1.0
    return sign * _integrate_direct(fun, a, b, tol)


def interval_integral(f: CoeffFn, I: Interval, tol: float = 1e-9) -> float:
    """Integral of f over I with relative error about ``tol``.

    Adaptive Simpson with bisection (depth <= 60) and a forced split at
    y = 0.  When the coefficient carries a log-domain form, accumulation
    happens in the log domain and only the final result is collapsed to a
    float (values below exp(-745) collapse to 0.0; use
    :func:`interval_integral_log` when the magnitude itself is the point).
    """
    if f.log_form is not None:
        lv = interval_integral_log(f, I, tol)
        return math.exp(lv) if lv > -745.0 else 0.0
    lo, hi = f.domain
    if I.lo < lo or I.hi > hi:
        raise EvalError(f"interval [{I.lo}, {I.hi}] outside domain {f.domain}")
    if not tol > 0:
        raise ValueError("tol must be positive")
    return _integrate_direct(lambda y: float(_ev(f.expr, y)), I.lo, I.hi, tol)
