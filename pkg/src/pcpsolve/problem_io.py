"""Problem files, polynomial expressions and output documents.

Expressions use ``+ - * ^`` with the usual precedence (``^`` binds tightest
and associates to the right, then unary minus, then ``*``, then binary
``+``/``-``). Division is accepted only by a numeric literal, which is how
rational coefficients such as ``1/2*x1`` are written. Exponents must be
non-negative integer constants.

Documents are JSON. Exact rationals are stored as ``"num/den"`` strings.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence, Union

from .enumerate import PrecisionPair, Solution, decimal_str
from .errors import ParseError
from .pipeline import HStrategy, PCPProblem, SparseRep, UnivarRep
from .poly import MPoly, Rational, RationalMatrix, Ring, rational_str, to_rational
from .univar import IsolatedRoot, UPoly

# ---------------------------------------------------------------------------
# AST


@dataclass(frozen=True)
class Num:
    value: Rational
    offset: int


@dataclass(frozen=True)
class Var:
    name: str
    index: int
    offset: int


@dataclass(frozen=True)
class Neg:
    operand: "ExprAST"
    offset: int


@dataclass(frozen=True)
class BinOp:
    op: str  # one of + - * / ^
    left: "ExprAST"
    right: "ExprAST"
    offset: int


ExprAST = Union[Num, Var, Neg, BinOp]

_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+(?:\.\d*)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, src: str, variables: Sequence[str]):
        self.src = src
        self.vars = {name: i for i, name in enumerate(variables)}
        self.tokens: list[tuple[str, str, int]] = []
        pos = 0
        while True:
            while pos < len(src) and src[pos].isspace():
                pos += 1
            if pos >= len(src):
                break
            m = _TOKEN.match(src, pos)
            if not m or m.end() == pos:
                self.error(f"unexpected character {src[pos]!r}", pos)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.tokens.append(("end", "", len(src)))
        self.i = 0

    def error(self, msg: str, pos: int):
        raise ParseError(msg, len(self.src[:pos].encode()))

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def parse(self) -> ExprAST:
        if self.peek()[0] == "end":
            self.error("empty expression", 0)
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            if text == ")":
                self.error("unbalanced ')'", pos)
            self.error(f"unexpected {text!r}", pos)
        return node

    def expr(self) -> ExprAST:
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            _, op, pos = self.take()
            node = BinOp(op, node, self.term(), pos)
        return node

    def term(self) -> ExprAST:
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            _, op, pos = self.take()
            right = self.unary()
            if op == "/":
                val = _constant(right)
                if val is None:
                    self.error("division is only allowed by a numeric constant", pos)
                if val == 0:
                    self.error("division by zero", pos)
            node = BinOp(op, node, right, pos)
        return node

    def unary(self) -> ExprAST:
        kind, text, pos = self.peek()
        if kind == "op" and text in ("-", "+"):
            self.take()
            operand = self.unary()
            return Neg(operand, pos) if text == "-" else operand
        return self.power()

    def power(self) -> ExprAST:
        base = self.atom()
        kind, text, pos = self.peek()
        if kind == "op" and text == "^":
            self.take()
            epos = self.peek()[2]
            if self.peek()[1] in ("-", "+"):
                self.error("exponent must be a non-negative integer", epos)
            exp = self.power()
            val = _constant(exp)
            if val is None:
                self.error("exponent must be a constant", epos)
            if val < 0 or val.denominator != 1:
                self.error("exponent must be a non-negative integer", epos)
            return BinOp("^", base, exp, pos)
        return base

    def atom(self) -> ExprAST:
        kind, text, pos = self.take()
        if kind == "num":
            return Num(to_rational(text), pos)
        if kind == "id":
            if text not in self.vars:
                self.error(f"unknown identifier {text!r}", pos)
            return Var(text, self.vars[text], pos)
        if kind == "op" and text == "(":
            node = self.expr()
            k2, t2, p2 = self.peek()
            if t2 != ")":
                self.error("unbalanced '(': missing ')'", p2 if k2 != "end" else pos)
            self.take()
            return node
        if kind == "end":
            self.error("unexpected end of input", pos)
        self.error(f"unexpected {text!r}", pos)


def _constant(node: ExprAST) -> Rational | None:
    """Value of a variable-free subtree, else None."""
    if isinstance(node, Num):
        return node.value
    if isinstance(node, Var):
        return None
    if isinstance(node, Neg):
        v = _constant(node.operand)
        return None if v is None else -v
    a, b = _constant(node.left), _constant(node.right)
    if a is None or b is None:
        return None
    if node.op == "+":
        return a + b
    if node.op == "-":
        return a - b
    if node.op == "*":
        return a * b
    if node.op == "/":
        return a / b if b else None
    if b < 0 or b.denominator != 1:
        return None
    return a ** int(b)


def parse_expression(src: str, variables: Sequence[str]) -> ExprAST:
    """Parse ``src`` over the given variable names; errors carry byte offsets."""
    return _Parser(src, variables).parse()


def lower_to_poly(ast: ExprAST, ring: Ring) -> MPoly:
    if isinstance(ast, Num):
        return ring.const(ast.value)
    if isinstance(ast, Var):
        return ring.var(ring.index(ast.name))
    if isinstance(ast, Neg):
        return -lower_to_poly(ast.operand, ring)
    left = lower_to_poly(ast.left, ring)
    if ast.op == "^":
        return left ** int(_constant(ast.right))
    if ast.op == "/":
        return left.scale(1 / _constant(ast.right))
    right = lower_to_poly(ast.right, ring)
    if ast.op == "+":
        return left + right
    if ast.op == "-":
        return left - right
    return left * right


def parse_polynomial(src: str, ring: Ring) -> MPoly:
    return lower_to_poly(parse_expression(src, ring.names), ring)


# ---------------------------------------------------------------------------
# Problem files


@dataclass(frozen=True)
class ProblemFile:
    variables: tuple[str, ...]
    f: tuple[str, ...]
    name: str = ""
    expected_solutions: int | None = None
    expected_deg_w: int | None = None

    def __post_init__(self):
        if len(self.f) != len(self.variables):
            raise ParseError(f"{len(self.f)} expressions for {len(self.variables)} variables", 0)
        if len(set(self.variables)) != len(self.variables):
            raise ParseError("duplicate variable names", 0)

    def to_problem(self) -> PCPProblem:
        ring = Ring(tuple(self.variables))
        return PCPProblem(tuple(parse_polynomial(e, ring) for e in self.f), self.name)

    def to_json(self) -> str:
        doc = {"variables": list(self.variables), "f": list(self.f)}
        if self.name:
            doc["name"] = self.name
        if self.expected_solutions is not None:
            doc["expected_solutions"] = self.expected_solutions
        if self.expected_deg_w is not None:
            doc["expected_deg_w"] = self.expected_deg_w
        return json.dumps(doc, indent=2) + "\n"


def parse_problem(text: str) -> ProblemFile:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(doc, dict) or "variables" not in doc or "f" not in doc:
        raise ParseError("problem document needs 'variables' and 'f'", 0)
    variables, f = doc["variables"], doc["f"]
    if not all(isinstance(v, str) for v in variables) or not all(isinstance(e, str) for e in f):
        raise ParseError("'variables' and 'f' must be arrays of strings", 0)
    pf = ProblemFile(
        tuple(variables), tuple(f), doc.get("name", ""),
        doc.get("expected_solutions"), doc.get("expected_deg_w"),
    )
    for e in pf.f:  # surface expression errors early
        parse_expression(e, pf.variables)
    return pf


def read_problem(path) -> ProblemFile:
    return parse_problem(Path(path).read_text())


def problem_from_strings(variables: Sequence[str], exprs: Sequence[str], name: str = "") -> PCPProblem:
    return ProblemFile(tuple(variables), tuple(exprs), name).to_problem()


def read_matrix(text: str) -> RationalMatrix:
    """A square matrix from a JSON array of rows (numbers or rational strings)."""
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    if not isinstance(rows, list) or not rows or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix must be a non-empty array of rows", 0)
    if any(len(r) != len(rows) for r in rows):
        raise ParseError("matrix must be square", 0)
    try:
        return RationalMatrix([[to_rational(c) for c in r] for r in rows])
    except (ValueError, TypeError) as exc:
        raise ParseError(f"bad matrix entry: {exc}", 0) from None


# ---------------------------------------------------------------------------
# Output documents


def _qs(q) -> str:
    return rational_str(to_rational(q))


def _poly_out(p: UPoly) -> list[str]:
    return [_qs(c) for c in p.coeffs]


def _poly_in(cs) -> UPoly:
    return UPoly(to_rational(c) for c in cs)


def _strategy_out(s: HStrategy) -> dict:
    return {
        "mode": s.mode,
        "seed": s.seed,
        "s_start": s.s_start,
        "invert_convention": s.invert_convention,
        "max_draws": s.max_draws,
        "explicit_matrix": s.explicit_matrix.to_strings() if s.explicit_matrix is not None else None,
    }


def _strategy_in(d: dict) -> HStrategy:
    M = d.get("explicit_matrix")
    return HStrategy(
        mode=d["mode"], seed=d.get("seed"),
        explicit_matrix=RationalMatrix([[to_rational(c) for c in r] for r in M]) if M else None,
        invert_convention=d.get("invert_convention", True),
        s_start=d.get("s_start", 0), max_draws=d.get("max_draws", 16),
    )


def _solution_out(s: Solution, places: int) -> dict:
    return {
        "coordinates": list(s.decimals(places)),
        "bounds": [[_qs(lo), _qs(hi)] for lo, hi in s.intervals],
        "residual": _qs(s.residual),
        "min_x": _qs(s.min_x),
        "min_f": _qs(s.min_f),
        "roots": [[_qs(r.lo), _qs(r.hi)] for r in s.source_roots],
    }


def _solution_in(d: dict) -> Solution:
    return Solution(
        tuple((to_rational(lo), to_rational(hi)) for lo, hi in d["bounds"]),
        tuple(IsolatedRoot(to_rational(lo), to_rational(hi)) for lo, hi in d["roots"]),
        to_rational(d["residual"]), to_rational(d["min_x"]), to_rational(d["min_f"]),
    )


@dataclass
class OutputDocument:
    """Everything a run reports; ``timings`` are the only non-deterministic fields."""

    status: str
    rep: UnivarRep | SparseRep | None = None
    solutions: list[Solution] | None = None
    gamma: tuple | None = None
    task: str = ""
    extra: dict = field(default_factory=dict)
    timings: dict = field(default_factory=dict)


def serialize_rep(
    rep: UnivarRep | SparseRep | None,
    solutions: Sequence[Solution] | None = None,
    *,
    gamma=None,
    task: str = "",
    extra: dict | None = None,
    timings: dict | None = None,
    status: str | None = None,
) -> str:
    """JSON document for a representation and (optionally) its solutions."""
    doc: dict = {}
    if status is None:
        status = "infeasible" if solutions is not None and not solutions else "solved"
    doc["status"] = status
    if task:
        doc["task"] = task
    base = rep.base if isinstance(rep, SparseRep) else rep
    places = 10
    if base is not None:
        places = 10 + base.w.degree()
        doc["w"] = _poly_out(base.w)
        doc["v"] = [_poly_out(vi) for vi in base.v]
        if base.phi is not None:
            doc["phi"] = _poly_out(base.phi)
        doc["H"] = base.H_used.to_strings()
        doc["strategy"] = dict(_strategy_out(base.strategy), s=base.s_used)
        doc["attempts"] = base.attempts
    if isinstance(rep, SparseRep):
        doc["k"] = rep.k
        doc["omega"] = [list(ell) for ell in rep.omega]
        doc["supports"] = [_poly_out(p) for p in rep.supports]
    if gamma is not None:
        doc["gamma1"] = _qs(gamma.gamma1)
        doc["gamma2"] = _qs(gamma.gamma2)
    if solutions is not None:
        doc["digits"] = places
        doc["solutions"] = [_solution_out(s, places) for s in solutions]
    if extra:
        doc.update(extra)
    t = dict(timings or {})
    if base is not None:
        for k, v in base.timings.items():
            t.setdefault(k, v)
    doc["timings"] = {k: round(v, 3) for k, v in t.items()}
    return json.dumps(doc, indent=2) + "\n"


def read_rep(text: str) -> OutputDocument:
    """Inverse of :func:`serialize_rep`."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc.msg}", exc.pos) from None
    rep = None
    if "w" in doc:
        st = doc["strategy"]
        rep = UnivarRep(
            w=_poly_in(doc["w"]),
            v=tuple(_poly_in(vi) for vi in doc["v"]),
            H_used=RationalMatrix([[to_rational(c) for c in r] for r in doc["H"]]),
            strategy=_strategy_in(st),
            s_used=st.get("s"),
            phi=_poly_in(doc["phi"]) if "phi" in doc else None,
            attempts=doc.get("attempts", 1),
            timings=dict(doc.get("timings", {})),
        )
        if "k" in doc:
            rep = SparseRep(
                rep, doc["k"], tuple(tuple(ell) for ell in doc["omega"]),
                tuple(_poly_in(p) for p in doc.get("supports", [])),
            )
    sols = [_solution_in(s) for s in doc["solutions"]] if "solutions" in doc else None
    gamma = None
    if "gamma1" in doc:
        gamma = PrecisionPair(doc["gamma1"], doc["gamma2"])
    known = {"status", "task", "w", "v", "phi", "H", "strategy", "attempts", "k", "omega",
             "supports", "gamma1", "gamma2", "digits", "solutions", "timings"}
    return OutputDocument(
        status=doc["status"], rep=rep, solutions=sols, gamma=gamma, task=doc.get("task", ""),
        extra={k: v for k, v in doc.items() if k not in known},
        timings=dict(doc.get("timings", {})),
    )


def format_solution(s: Solution, places: int = 10) -> str:
    return "(" + ", ".join(decimal_str(c, places) for c in s.coordinates) + ")"
