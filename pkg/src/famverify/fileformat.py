"""Text format for equation families and JSON reports.

An equation file is line based; ``#`` starts a comment::

    language ZX
    vars a1 a2          # a quotient order may follow a colon: t:8
    boxes d1 d2
    mode copy

    lhs
      inputs i
      outputs o
      node s Z a1
      node t Z a2
      edge i s
      edge s t
      edge t o
      box d1 i
      box d2 o
    rhs
      ...

Nodes are ``node ID KIND [PHASE]`` with KIND one of the short names of the
language (``Z X H`` for ZX, ``Z H`` for ZH, ``Z W cross`` for ZW).  Edge ends
are ids, or ``id:port`` for the ZW crossing.  ``box LABEL MEMBERS...`` lists
nodes, slots and nested box labels; ``child NAME PARENT`` records lineage.

ZX phases are linear forms such as ``pi/2 + 2*a1 - a2``; a constant without
``pi`` is read as radians.  ZH/ZW phases are Laurent expressions with ``i``
for the imaginary unit and integer powers (``a^-2``).  Integer and ``p/q``
literals stay exact, decimal literals are floats.
"""

from __future__ import annotations

import json
import math
import re
from fractions import Fraction

from .diagram import (
    KIND_NAMES, LANGUAGES, SHORT_NAME, AngleLinear, Diagram, EquationFamily, Node, PolyPhase,
    End,
)
from .errors import DiagramError, ParseError, SemanticError
from .phasepoly import GaussianRational, LaurentPoly, format_coeff

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_']*(?:\{[^{}\s]*\})*")
_NUMBER = re.compile(r"\d+\.\d*(?:[eE][+-]?\d+)?|\d*\.\d+(?:[eE][+-]?\d+)?|\d+[eE][+-]?\d+|\d+")
_RESERVED = {"pi", "i"}


# expressions

class _Tokens:
    def __init__(self, text: str, line: int, col: int):
        self.line = line
        self.toks = []  # (kind, value, column)
        pos = 0
        while pos < len(text):
            ch = text[pos]
            if ch.isspace():
                pos += 1
                continue
            m = _NUMBER.match(text, pos)
            if m:
                self.toks.append(("num", m.group(), col + pos))
                pos = m.end()
                continue
            m = _IDENT.match(text, pos)
            if m:
                self.toks.append(("id", m.group(), col + pos))
                pos = m.end()
                continue
            if text.startswith("**", pos):
                self.toks.append(("op", "^", col + pos))
                pos += 2
                continue
            if ch in "+-*/^()":
                self.toks.append(("op", ch, col + pos))
                pos += 1
                continue
            raise ParseError(f"unexpected character {ch!r}", line, col + pos)
        self.end_col = col + len(text)
        self.k = 0

    def peek(self):
        return self.toks[self.k] if self.k < len(self.toks) else ("end", None, self.end_col)

    def take(self):
        t = self.peek()
        self.k += 1
        return t

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])


def _number(text: str):
    if any(c in text for c in ".eE"):
        return complex(float(text))
    return Fraction(int(text))


def _divide(ts, num: LaurentPoly, den: LaurentPoly, tok) -> LaurentPoly:
    terms = den.sorted_terms()
    if len(terms) != 1:
        raise ts.error("can only divide by a single term", tok)
    mono, c = terms[0]
    if c == 0:
        raise ts.error("division by zero", tok)
    inv = LaurentPoly.monomial({v: -e for v, e in mono}, 1 / c)
    return num * inv


def _parse_expr(ts: _Tokens) -> LaurentPoly:
    left = _parse_term(ts)
    while ts.peek()[1] in ("+", "-") and ts.peek()[0] == "op":
        op = ts.take()[1]
        right = _parse_term(ts)
        left = left + right if op == "+" else left - right
    return left


def _starts_factor(tok) -> bool:
    return tok[0] in ("num", "id") or tok[1] == "("


def _parse_term(ts: _Tokens) -> LaurentPoly:
    left = _parse_unary(ts)
    while True:
        tok = ts.peek()
        if tok[0] == "op" and tok[1] in ("*", "/"):
            ts.take()
            right = _parse_unary(ts)
            left = left * right if tok[1] == "*" else _divide(ts, left, right, tok)
        elif _starts_factor(tok):
            # implicit product: 3pi, 2i, 2(a+1)
            left = left * _parse_power(ts)
        else:
            return left


def _parse_unary(ts: _Tokens) -> LaurentPoly:
    tok = ts.peek()
    if tok[0] == "op" and tok[1] in ("+", "-"):
        ts.take()
        inner = _parse_unary(ts)
        return -inner if tok[1] == "-" else inner
    return _parse_power(ts)


def _parse_exponent(ts: _Tokens) -> int:
    sign = 1
    tok = ts.peek()
    paren = tok[1] == "("
    if paren:
        ts.take()
        tok = ts.peek()
    if tok[0] == "op" and tok[1] in ("+", "-"):
        ts.take()
        sign = -1 if tok[1] == "-" else 1
        tok = ts.peek()
    if tok[0] != "num" or not tok[1].isdigit():
        raise ts.error("exponent must be an integer")
    ts.take()
    if paren:
        if ts.peek()[1] != ")":
            raise ts.error("expected ')'")
        ts.take()
    return sign * int(tok[1])


def _parse_power(ts: _Tokens) -> LaurentPoly:
    base = _parse_atom(ts)
    tok = ts.peek()
    if tok[0] == "op" and tok[1] == "^":
        ts.take()
        e = _parse_exponent(ts)
        if e < 0 and len(base.sorted_terms()) != 1:
            raise ts.error("negative powers need a single term", tok)
        if e < 0 and base.sorted_terms()[0][1] == 0:
            raise ts.error("zero to a negative power", tok)
        if e < 0:
            mono, c = base.sorted_terms()[0]
            return LaurentPoly.monomial({v: x * e for v, x in mono}, (1 / c) ** -e)
        return base ** e
    return base


def _parse_atom(ts: _Tokens) -> LaurentPoly:
    tok = ts.take()
    kind, val = tok[0], tok[1]
    if kind == "num":
        return LaurentPoly.const(_number(val))
    if kind == "id":
        if val == "i":
            return LaurentPoly.const(GaussianRational(0, 1))
        return LaurentPoly.var(val)
    if val == "(":
        inner = _parse_expr(ts)
        if ts.peek()[1] != ")":
            raise ts.error("expected ')'")
        ts.take()
        return inner
    raise ParseError("expected a number, a variable or '('" if kind != "end"
                     else "unexpected end of expression", ts.line, tok[2])


def parse_expression(text: str, line: int = 1, col: int = 1) -> LaurentPoly:
    """Parse a Laurent expression; ``pi`` is kept as an ordinary symbol."""
    ts = _Tokens(text, line, col)
    if ts.peek()[0] == "end":
        raise ts.error("empty expression")
    out = _parse_expr(ts)
    if ts.peek()[0] != "end":
        raise ts.error(f"unexpected {ts.peek()[1]!r}")
    return out


def _real_part(c):
    if isinstance(c, complex):
        return c.real if c.imag == 0 else None
    if isinstance(c, GaussianRational):
        return c.re if c.im == 0 else None
    return c


def phase_from_poly(language: str, poly: LaurentPoly, line=None, col=None):
    """Turn a parsed expression into the phase type of ``language``."""
    if language != "ZX":
        if "pi" in poly.variables():
            poly = poly.substitute("pi", math.pi)
        return PolyPhase(poly)
    const = Fraction(0)
    coeffs = {}
    for mono, c in poly.sorted_terms():
        r = _real_part(c)
        if r is None:
            raise ParseError("ZX phases must be real", line, col)
        if mono == ():
            # bare constants are radians
            if r != 0:
                const = float(const) + float(r) / math.pi
        elif mono == (("pi", 1),):
            const = float(const) + float(r) if isinstance(r, float) or isinstance(const, float) \
                else const + r
        elif len(mono) == 1 and mono[0][1] == 1 and mono[0][0] != "pi":
            if r != int(r):
                raise ParseError(f"coefficient of {mono[0][0]} must be an integer", line, col)
            coeffs[mono[0][0]] = int(r)
        else:
            raise ParseError("ZX phases are rational multiples of pi plus integer multiples "
                             "of variables", line, col)
    return AngleLinear.make(const, coeffs)


def parse_phase(language: str, text: str, line: int = 1, col: int = 1):
    return phase_from_poly(language, parse_expression(text, line, col), line, col)


# formatting

def _pi_multiple(c) -> str:
    if isinstance(c, float):
        return f"{c!r}*pi"
    c = Fraction(c)
    p, q = c.numerator, c.denominator
    head = "pi" if p == 1 else ("-pi" if p == -1 else f"{p}*pi")
    return head if q == 1 else f"{head}/{q}"


def format_angle(a: AngleLinear) -> str:
    parts = []
    if a.const != 0 or not a.coeffs:
        parts.append("0" if a.const == 0 else _pi_multiple(a.const))
    for v, b in a.coeffs:
        term = v if abs(b) == 1 else f"{abs(b)}*{v}"
        if not parts:
            parts.append(term if b > 0 else f"-{term}")
        else:
            parts.append(("+ " if b > 0 else "- ") + term)
    return " ".join(parts)


def format_phase(phase) -> str:
    if isinstance(phase, AngleLinear):
        return format_angle(phase)
    return phase.poly.to_string()


def format_value(language: str, value) -> str:
    """A phase value as written in reports: ZX angles as multiples of pi."""
    if language == "ZX":
        if value == 0:
            return "0"
        return _pi_multiple(value)
    return format_coeff(value) if not isinstance(value, int) else str(value)


def format_diagram(d: Diagram, indent: str = "") -> str:
    lines = []
    if d.inputs:
        lines.append("inputs " + " ".join(d.inputs))
    if d.outputs:
        lines.append("outputs " + " ".join(d.outputs))
    for n in d.nodes:
        head = f"node {n.id} {SHORT_NAME[n.kind]}"
        lines.append(head if n.phase is None else f"{head} {format_phase(n.phase)}")
    for a, b in d.edges:
        lines.append(f"edge {a} {b}")
    for label, members in d.bangboxes:
        lines.append(" ".join(["box", label] + sorted(members)))
    for child, parent in d.lineage:
        lines.append(f"child {child} {parent}")
    return "\n".join(indent + s for s in lines)


def serialize(eq: EquationFamily) -> str:
    out = [f"language {eq.language}"]
    q = eq.quotient_map
    if eq.phase_vars:
        out.append("vars " + " ".join(f"{v}:{q[v]}" if v in q else v for v in eq.phase_vars))
    if eq.bang_labels:
        out.append("boxes " + " ".join(eq.bang_labels))
    out.append(f"mode {eq.mode}")
    for name, d in (("lhs", eq.lhs), ("rhs", eq.rhs)):
        out.append("")
        out.append(name)
        body = format_diagram(d, "  ")
        if body:
            out.append(body)
    return "\n".join(out) + "\n"


# files

class _Side:
    def __init__(self):
        self.inputs, self.outputs, self.nodes, self.edges = [], [], [], []
        self.boxes, self.lineage = {}, {}


def _words(line: str):
    return [(m.group(), m.start() + 1) for m in re.finditer(r"\S+", line)]


def _parse_end(tok: str, line: int, col: int) -> End:
    ref, sep, port = tok.partition(":")
    if not _IDENT.fullmatch(ref):
        raise ParseError(f"bad endpoint {tok!r}", line, col)
    if not sep:
        return End(ref)
    if not port.isdigit():
        raise ParseError(f"bad port in {tok!r}", line, col)
    return End(ref, int(port))


def parse_equation_file(text: str) -> EquationFamily:
    language = None
    phase_vars, quotients, labels = None, {}, None
    mode = "copy"
    sides = {}
    current = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        words = _words(line)
        if not words:
            continue
        key, kcol = words[0]
        key = key.rstrip(":")
        args = words[1:]

        def need(n, what):
            if len(args) < n:
                raise ParseError(f"{key} needs {what}", lineno, kcol)

        if key == "language":
            need(1, "a language name")
            if args[0][0] not in LANGUAGES:
                raise ParseError(f"unknown language {args[0][0]!r}", lineno, args[0][1])
            language = args[0][0]
        elif key == "vars":
            phase_vars = []
            for w, c in args:
                name, sep, g = w.partition(":")
                if not _IDENT.fullmatch(name) or name in _RESERVED:
                    raise ParseError(f"bad variable name {name!r}", lineno, c)
                if sep:
                    if not g.isdigit():
                        raise ParseError(f"bad quotient order {g!r}", lineno, c)
                    quotients[name] = int(g)
                phase_vars.append(name)
        elif key == "boxes":
            labels = []
            for w, c in args:
                if not _IDENT.fullmatch(w):
                    raise ParseError(f"bad !-box label {w!r}", lineno, c)
                labels.append(w)
        elif key == "mode":
            need(1, "copy or child")
            if args[0][0] not in ("copy", "child"):
                raise ParseError(f"unknown mode {args[0][0]!r}", lineno, args[0][1])
            mode = args[0][0]
        elif key in ("lhs", "rhs"):
            if key in sides:
                raise ParseError(f"duplicate {key} section", lineno, kcol)
            current = sides[key] = _Side()
        else:
            if current is None:
                raise ParseError(f"{key!r} outside an lhs/rhs section"
                                 if key in ("inputs", "outputs", "node", "edge", "box", "child")
                                 else f"unknown directive {key!r}", lineno, kcol)
            _side_line(current, key, kcol, args, line, lineno, language)
    if language is None:
        raise ParseError("missing 'language' line", 1, 1)
    for key in ("lhs", "rhs"):
        if key not in sides:
            raise ParseError(f"missing {key} section", len(text.splitlines()) or 1, 1)
    try:
        diagrams = {
            k: Diagram.build(language, s.nodes, s.edges, s.inputs, s.outputs, s.boxes, s.lineage)
            for k, s in sides.items()
        }
        return EquationFamily.build(diagrams["lhs"], diagrams["rhs"], phase_vars, labels, mode,
                                    quotients)
    except DiagramError as exc:
        raise SemanticError(f"{type(exc).__name__}: {exc}") from exc


def _side_line(side: _Side, key, kcol, args, line, lineno, language):
    if key in ("inputs", "outputs"):
        target = side.inputs if key == "inputs" else side.outputs
        for w, c in args:
            if not _IDENT.fullmatch(w):
                raise ParseError(f"bad slot name {w!r}", lineno, c)
            target.append(w)
    elif key == "node":
        if len(args) < 2:
            raise ParseError("node needs an id and a kind", lineno, kcol)
        (nid, icol), (kind, kc) = args[0], args[1]
        if not _IDENT.fullmatch(nid):
            raise ParseError(f"bad node id {nid!r}", lineno, icol)
        if language is None:
            raise ParseError("'language' must come before nodes", lineno, kcol)
        full = KIND_NAMES[language].get(kind)
        if full is None:
            raise ParseError(f"unknown {language} generator {kind!r}", lineno, kc)
        phase = None
        if len(args) > 2:
            start = args[2][1]
            phase = parse_phase(language, line[start - 1:].rstrip(), lineno, start)
        side.nodes.append(Node(nid, full, phase))
    elif key == "edge":
        if len(args) != 2:
            raise ParseError("edge needs exactly two ends", lineno, kcol)
        side.edges.append(tuple(_parse_end(w, lineno, c) for w, c in args))
    elif key == "box":
        if not args:
            raise ParseError("box needs a label", lineno, kcol)
        label = args[0][0]
        if label in side.boxes:
            raise ParseError(f"duplicate box {label!r}", lineno, args[0][1])
        side.boxes[label] = [w for w, _ in args[1:]]
    elif key == "child":
        if len(args) != 2:
            raise ParseError("child needs a name and its parent", lineno, kcol)
        side.lineage[args[0][0]] = args[1][0]
    else:
        raise ParseError(f"unknown directive {key!r}", lineno, kcol)


# reports

def _assignment_json(language, assignment) -> dict:
    return {
        "boxes": {k: n for k, n in assignment.boxes},
        "phases": {k: format_value(language, v) for k, v in assignment.phases},
    }


def _num(x: float):
    return None if x != x else x


def report_to_dict(report, include_timing: bool = False) -> dict:
    plan = report.plan
    lang = plan.family.language if plan is not None else None
    doc = {
        "verdict": report.verdict,
        "checked": report.checked,
        "plan_size": len(plan) if plan is not None else 0,
        "grid_mode": plan.grid_mode if plan is not None else None,
        "bounds": {
            "removal_order": list(plan.removal_order) if plan is not None else [],
            "N": dict(sorted(plan.bounds.items())) if plan is not None else {},
            "grids": {v: [format_value(lang, p) for p in pts]
                      for v, pts in plan.grids.items()} if plan is not None else {},
        },
        "warnings": list(plan.warnings) if plan is not None else [],
        "error": report.error,
        "counterexample": _assignment_json(lang, report.counterexample)
        if report.counterexample is not None else None,
        "equations": [
            dict(index=k, **_assignment_json(lang, r.assignment), deviation=_num(r.deviation),
                 exact=r.exact, passed=r.passed, error=r.error)
            for k, r in enumerate(report.records)
        ],
    }
    if include_timing:
        doc["seconds"] = report.seconds
    return doc


def report_to_json(report, include_timing: bool = False) -> str:
    return json.dumps(report_to_dict(report, include_timing), indent=2) + "\n"


__all__ = [
    "parse_equation_file", "serialize", "parse_expression", "parse_phase", "format_angle",
    "format_phase", "format_value", "format_diagram", "report_to_dict", "report_to_json",
]
