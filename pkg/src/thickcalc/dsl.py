"""Expression DSL: parser, canonical printer, and the query runner.

Statements, one per line (``#`` starts a comment):

    let <name> = <expression>
    eval <distribution> , <testfn>
    derive <distribution>
    project <distribution> , <testfn>
    expand <testfn> , <max-order>
    check <suite-name>

Expression grammar (precedence: constructors > ``*``/``·`` > ``+``/``-``):

    dist   := Pf( density ) | dstar | glambda(q)[·delta[q]] | delta[q](pair(a,b))
            | d*( dist ) | mult * dist | dist +- dist | number * dist
            | translate(dist, c) | dilate(dist, c)
    density:= abs(x)^num | H(x) | pair(a,b) * r^num
    testfn := bump(R) | mono(j, pair(a,b), R) | poly([c0,...], R)
            | testfn * testfn | D(testfn) | testfn +- testfn
    mult   := H(x) | x^j | mult(pair(a,b), j) | bound name

Numbers are integers, rationals ``p/q`` (kept exact, so the integer-versus-not
power dispatch is intent-driven) or decimals (always treated as non-integer).
The name ``d`` is reserved: ``d*( ... )`` is the derivative operator.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Union

from .distributions import (
    Derivative,
    Dilate,
    LinearCombination,
    MultiplierProduct,
    PfDensity,
    ThickDelta,
    Translate,
    delta_star,
    g_lambda_delta,
    pf_heaviside,
    pf_power,
    simplify,
)
from .errors import DslError
from .sphere import SpherePair, SphereDistribution
from .testfn import (
    Monomial,
    Multiplier,
    ThickTestFunction,
    derivative as fn_derivative,
    from_polynomial,
    heaviside_multiplier,
    monomial_multiplier,
    multiply_by,
    plateau_bump,
    thick_monomial,
)

Number = Union[int, Fraction, float]
Value = Union[Number, "ThickTestFunction", "Multiplier", object]


# -- lexer ---------------------------------------------------------------------

_TOKEN_RE = re.compile(r"""
    (?P<ws>\s+)
  | (?P<decimal>\d+\.\d+(?:[eE][+-]?\d+)?)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[()\[\],+\-*^=/·])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str  # 'int' | 'decimal' | 'name' | symbol text
    text: str
    pos: int


def tokenize(text: str) -> List[Token]:
    out = []
    i = 0
    while i < len(text):
        m = _TOKEN_RE.match(text, i)
        if m is None:
            raise DslError(f"unexpected character {text[i]!r}", i)
        if m.lastgroup != "ws":
            kind = m.lastgroup if m.lastgroup in ("int", "decimal", "name") else m.group()
            out.append(Token(kind, m.group(), i))
        i = m.end()
    return out


class _Cursor:
    def __init__(self, tokens: List[Token], text: str):
        self.tokens = tokens
        self.text = text
        self.i = 0

    def peek(self, ahead: int = 0) -> Optional[Token]:
        j = self.i + ahead
        return self.tokens[j] if j < len(self.tokens) else None

    def next(self) -> Token:
        t = self.peek()
        if t is None:
            raise DslError("unexpected end of input", len(self.text))
        self.i += 1
        return t

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t is None or t.kind != kind:
            where = t.pos if t else len(self.text)
            got = t.text if t else "end of input"
            raise DslError(f"expected {kind!r}, got {got!r}", where)
        return self.next()

    def at(self, kind: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind == kind

    def at_name(self, word: str, ahead: int = 0) -> bool:
        t = self.peek(ahead)
        return t is not None and t.kind == "name" and t.text == word

    def done(self) -> bool:
        return self.i >= len(self.tokens)


# -- parser --------------------------------------------------------------------


class Parser:
    def __init__(self, bindings=None):
        self.bindings = dict(bindings or {})

    # numbers ------------------------------------------------------------

    def parse_number(self, c: _Cursor) -> Number:
        sign = 1
        while c.at("-") or c.at("+"):
            if c.next().kind == "-":
                sign = -sign
        if c.at("decimal"):
            return sign * float(c.next().text)
        tok = c.expect("int")
        value = int(tok.text)
        if c.at("/") and c.at("int", 1):
            c.next()
            den = int(c.next().text)
            if den == 0:
                raise DslError("zero denominator", tok.pos)
            q = Fraction(sign * value, den)
            return int(q) if q.denominator == 1 else q
        return sign * value

    def parse_int(self, c: _Cursor) -> int:
        sign = 1
        while c.at("-"):
            c.next()
            sign = -sign
        return sign * int(c.expect("int").text)

    def parse_pair(self, c: _Cursor) -> SpherePair:
        tok = c.peek()
        if not c.at_name("pair"):
            raise DslError("expected pair(a, b)", tok.pos if tok else len(c.text))
        c.next()
        c.expect("(")
        a = self.parse_number(c)
        c.expect(",")
        b = self.parse_number(c)
        c.expect(")")
        return SpherePair(a, b)

    # expressions ----------------------------------------------------------

    def parse_value(self, c: _Cursor) -> Value:
        return self._additive(c)

    def _additive(self, c: _Cursor) -> Value:
        left = self._multiplicative(c)
        while c.at("+") or c.at("-"):
            op = c.next()
            right = self._multiplicative(c)
            left = self._combine_add(left, right, op)
        return left

    def _multiplicative(self, c: _Cursor) -> Value:
        left = self._unary(c)
        while c.at("*") or c.at("·"):
            op = c.next()
            right = self._unary(c)
            left = self._combine_mul(left, right, op)
        return left

    def _unary(self, c: _Cursor) -> Value:
        if c.at("-"):
            tok = c.next()
            inner = self._unary(c)
            return self._combine_mul(-1, inner, tok)
        return self._primary(c)

    def _combine_add(self, a: Value, b: Value, op: Token) -> Value:
        if isinstance(a, (int, Fraction, float)) and isinstance(b, (int, Fraction, float)):
            return a + b if op.kind == "+" else a - b
        if isinstance(a, ThickTestFunction) and isinstance(b, ThickTestFunction):
            return a + b if op.kind == "+" else a + b.scale(-1)
        if _is_dist(a) and _is_dist(b):
            coefficient = Fraction(1) if op.kind == "+" else Fraction(-1)
            return _flatten_combination(((Fraction(1), a), (coefficient, b)))
        raise DslError(f"cannot combine {_typename(a)} and {_typename(b)} with {op.kind!r}",
                       op.pos)

    def _combine_mul(self, a: Value, b: Value, op: Token) -> Value:
        if isinstance(a, (int, Fraction, float)) and isinstance(b, (int, Fraction, float)):
            return a * b
        if isinstance(a, (int, Fraction, float)):
            if _is_dist(b):
                return _flatten_combination(((Fraction(a), b),))
            if isinstance(b, ThickTestFunction):
                return b.scale(a)
            if isinstance(b, Multiplier):
                return monomial_scale(b, a)
        if isinstance(b, (int, Fraction, float)):
            return self._combine_mul(b, a, op)
        if isinstance(a, Multiplier) and _is_dist(b):
            return MultiplierProduct(a, b)
        if isinstance(a, Multiplier) and isinstance(b, ThickTestFunction):
            return multiply_by(a, b)
        if isinstance(a, ThickTestFunction) and isinstance(b, Multiplier):
            return multiply_by(b, a)
        if isinstance(a, ThickTestFunction) and isinstance(b, ThickTestFunction):
            return a * b
        raise DslError(f"cannot multiply {_typename(a)} by {_typename(b)}", op.pos)

    def _primary(self, c: _Cursor) -> Value:
        t = c.peek()
        if t is None:
            raise DslError("unexpected end of expression", len(c.text))
        if t.kind in ("int", "decimal"):
            return self.parse_number(c)
        if t.kind == "(":
            c.next()
            v = self.parse_value(c)
            c.expect(")")
            return v
        if t.kind != "name":
            raise DslError(f"unexpected token {t.text!r}", t.pos)
        word = t.text
        if word == "Pf":
            return self._pf(c)
        if word == "dstar":
            c.next()
            return delta_star()
        if word == "glambda":
            return self._glambda(c)
        if word == "delta":
            return self._delta(c)
        if word == "d" and c.at("*", 1) and c.at("(", 2):
            c.next(); c.next(); c.next()
            inner = self.parse_value(c)
            c.expect(")")
            if not _is_dist(inner):
                raise DslError("d*( ) applies to distributions", t.pos)
            return Derivative(inner)
        if word == "translate" or word == "dilate":
            c.next()
            c.expect("(")
            inner = self.parse_value(c)
            c.expect(",")
            amount = self.parse_number(c)
            c.expect(")")
            if not _is_dist(inner):
                raise DslError(f"{word}( ) applies to distributions", t.pos)
            return Translate(inner, amount) if word == "translate" else Dilate(inner, amount)
        if word == "bump":
            c.next()
            c.expect("(")
            radius = self.parse_number(c)
            c.expect(")")
            return plateau_bump(_as_float(radius))
        if word == "mono":
            c.next()
            c.expect("(")
            order = self.parse_int(c)
            c.expect(",")
            pair = self.parse_pair(c)
            c.expect(",")
            radius = self.parse_number(c)
            c.expect(")")
            return thick_monomial(order, pair, _as_float(radius))
        if word == "poly":
            c.next()
            c.expect("(")
            coeffs = self._coeff_list(c)
            c.expect(",")
            radius = self.parse_number(c)
            c.expect(")")
            return from_polynomial(coeffs, _as_float(radius))
        if word == "D":
            c.next()
            c.expect("(")
            inner = self.parse_value(c)
            c.expect(")")
            if not isinstance(inner, (ThickTestFunction, Multiplier)):
                raise DslError("D( ) applies to test functions", t.pos)
            return fn_derivative(inner)
        if word == "H" and c.at("(", 1):
            c.next(); c.next()
            if not c.at_name("x"):
                raise DslError("expected H(x)", t.pos)
            c.next()
            c.expect(")")
            return heaviside_multiplier()
        if word == "x" and c.at("^", 1):
            c.next(); c.next()
            return monomial_multiplier_from_power(self.parse_int(c))
        if word == "mult":
            c.next()
            c.expect("(")
            pair = self.parse_pair(c)
            c.expect(",")
            order = self.parse_int(c)
            c.expect(")")
            return monomial_multiplier(order, pair)
        if word in self.bindings:
            c.next()
            return self.bindings[word]
        raise DslError(f"unbound name {word!r}", t.pos)

    def _coeff_list(self, c: _Cursor):
        c.expect("[")
        out = []
        if not c.at("]"):
            out.append(self.parse_number(c))
            while c.at(","):
                c.next()
                out.append(self.parse_number(c))
        c.expect("]")
        return out

    def _pf(self, c: _Cursor):
        start = c.next()
        c.expect("(")
        if c.at_name("abs"):
            c.next()
            c.expect("(")
            if not c.at_name("x"):
                raise DslError("expected abs(x)", start.pos)
            c.next()
            c.expect(")")
            c.expect("^")
            power = self.parse_number(c)
            c.expect(")")
            return pf_power(power)
        if c.at_name("H"):
            c.next()
            c.expect("(")
            if not c.at_name("x"):
                raise DslError("expected H(x)", start.pos)
            c.next()
            c.expect(")")
            c.expect(")")
            return pf_heaviside()
        if c.at_name("pair"):
            pair = self.parse_pair(c)
            c.expect("*")
            if not c.at_name("r"):
                raise DslError("expected r^<power> after the density pair", start.pos)
            c.next()
            c.expect("^")
            power = self.parse_number(c)
            c.expect(")")
            return PfDensity(pair, power)
        tok = c.peek()
        raise DslError("Pf( ) takes abs(x)^a, H(x) or pair(p,q) * r^a",
                       tok.pos if tok else start.pos)

    def _glambda(self, c: _Cursor):
        c.next()
        c.expect("(")
        lam = self.parse_number(c)
        c.expect(")")
        degree = 0
        if (c.at("·") or c.at("*")) and c.at_name("delta", 1) and c.at("[", 2) \
                and not self._delta_has_args(c):
            c.next()  # the dot
            c.next()  # delta
            c.expect("[")
            degree = self.parse_int(c)
            c.expect("]")
        return g_lambda_delta(lam, degree)

    def _delta_has_args(self, c: _Cursor) -> bool:
        # glambda(l)·delta[q] is a degree marker unless a '(' follows the ']'
        depth = 0
        j = c.i + 2  # position of '['
        while True:
            t = c.peek(j - c.i)
            if t is None:
                return False
            if t.kind == "[":
                depth += 1
            elif t.kind == "]":
                depth -= 1
                if depth == 0:
                    nxt = c.peek(j - c.i + 1)
                    return nxt is not None and nxt.kind == "("
            j += 1

    def _delta(self, c: _Cursor):
        tok = c.next()
        c.expect("[")
        degree = self.parse_int(c)
        c.expect("]")
        c.expect("(")
        pair = self.parse_pair(c)
        c.expect(")")
        return ThickDelta(SphereDistribution(pair), degree, 0)


def monomial_scale(m: Multiplier, k) -> Multiplier:
    if m.is_zero() or k == 0:
        from .testfn import constant_multiplier
        return constant_multiplier(0, m.point)
    if not isinstance(m.body, Monomial):
        raise DslError("can only scale simple monomial multipliers")
    pair = m.body.pair * Fraction(k)
    return monomial_multiplier(m.body.order, pair, m.point)


def monomial_multiplier_from_power(order: int) -> Multiplier:
    from .testfn import power_multiplier
    return power_multiplier(order)


def _is_dist(v) -> bool:
    return isinstance(v, (PfDensity, ThickDelta, Derivative, MultiplierProduct,
                          LinearCombination, Translate, Dilate))


def _typename(v) -> str:
    if _is_dist(v):
        return "a distribution"
    if isinstance(v, ThickTestFunction):
        return "a test function"
    if isinstance(v, Multiplier):
        return "a multiplier"
    return "a number"


def _as_float(x) -> float:
    return float(x)


def _flatten_combination(terms) -> LinearCombination:
    flat = []
    for coefficient, dist in terms:
        if isinstance(dist, LinearCombination):
            flat.extend((coefficient * c2, d2) for c2, d2 in dist.terms)
        else:
            flat.append((coefficient, dist))
    return LinearCombination(tuple(flat))


# -- printer ---------------------------------------------------------------------


def print_number(x: Number) -> str:
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, float):
        return repr(x)
    return str(x)


def print_multiplier(m: Multiplier) -> str:
    body = m.body
    if isinstance(body, Monomial):
        if body.order == 0 and body.pair == SpherePair(1, 0):
            return "H(x)"
        sign = 1 if body.order % 2 == 0 else -1
        if body.pair.plus == 1 and body.pair.minus == sign:
            return f"x^{body.order}"
        return f"mult(pair({print_number(body.pair.plus)},{print_number(body.pair.minus)}), {body.order})"
    raise DslError("multiplier has no canonical text form")


def _needs_parens(d) -> bool:
    return isinstance(d, LinearCombination) and len(d.terms) != 1


def print_distribution(d) -> str:
    if isinstance(d, ThickDelta):
        w = d.weights.weights
        if w == SpherePair(1, 1) and d.degree == 0:
            return "dstar"
        if w.plus + w.minus == 2:
            lam = w.plus / 2
            return f"glambda({print_number(lam)})·delta[{d.degree}]"
        return (f"delta[{d.degree}](pair({print_number(w.plus)},"
                f"{print_number(w.minus)}))")
    if isinstance(d, PfDensity):
        if d.pair == SpherePair(1, 1):
            return f"Pf(abs(x)^{print_number(d.power)})"
        if d.pair == SpherePair(1, 0) and d.power == 0:
            return "Pf(H(x))"
        return (f"Pf(pair({print_number(d.pair.plus)},{print_number(d.pair.minus)})"
                f" * r^{print_number(d.power)})")
    if isinstance(d, Derivative):
        return f"d*({print_distribution(d.inner)})"
    if isinstance(d, MultiplierProduct):
        inner = print_distribution(d.inner)
        if _needs_parens(d.inner):
            inner = f"({inner})"
        return f"{print_multiplier(d.multiplier)} * {inner}"
    if isinstance(d, LinearCombination):
        if not d.terms:
            return "0"
        pieces = []
        for coefficient, term in d.terms:
            text = print_distribution(term)
            if _needs_parens(term):
                text = f"({text})"
            mag = abs(coefficient)
            body = text if mag == 1 else f"{print_number(mag)} * {text}"
            pieces.append(("-" if coefficient < 0 else "+", body))
        first_sign, first = pieces[0]
        out = ("-" + first) if first_sign == "-" else first
        for sign, body in pieces[1:]:
            out += f" {sign} {body}"
        return out
    if isinstance(d, Translate):
        return f"translate({print_distribution(d.inner)}, {print_number(d.shift)})"
    if isinstance(d, Dilate):
        return f"dilate({print_distribution(d.inner)}, {print_number(d.factor)})"
    raise DslError(f"cannot print {type(d).__name__}")


# -- programs ----------------------------------------------------------------------


@dataclass(frozen=True)
class Query:
    command: str  # eval | derive | project | expand | check
    source: str
    dist: object = None
    testfn: Optional[ThickTestFunction] = None
    max_order: Optional[int] = None
    suite: Optional[str] = None


@dataclass
class Program:
    bindings: dict
    queries: List[Query]


@dataclass
class Report:
    """Per-query records plus the flags the exit status is derived from."""

    records: List[dict]
    had_error: bool = False
    check_failed: bool = False

    @property
    def exit_status(self) -> int:
        if self.had_error:
            return 3
        if self.check_failed:
            return 1
        return 0


def run(program: Program, cfg=None) -> Report:
    """Execute the queries in order; errors are recorded per query and do not
    abort the rest of the program."""
    from .checks import run_suite
    from .distributions import project
    from .errors import ThickCalcError
    from .expansion import render
    from .pairing import DEFAULT_CONFIG, pair

    cfg = cfg or DEFAULT_CONFIG
    report = Report(records=[])
    for q in program.queries:
        rec = {"query": q.command, "source": q.source}
        try:
            if q.command in ("eval", "project"):
                target = project(q.dist) if q.command == "project" else q.dist
                res = pair(target, q.testfn, cfg)
                rec["expr"] = print_distribution(q.dist)
                rec["value"] = float(res.value)
                if isinstance(res.value, Fraction):
                    rec["value_exact"] = str(res.value)
                rec["split_radius"] = res.split_radius
                rec["quad_error"] = res.quad_error
                rec["series_terms"] = [[j, float(v)] for j, v in res.series_terms]
                rec["log_term"] = float(res.log_term)
            elif q.command == "derive":
                rec["expr"] = print_distribution(q.dist)
                rec["result"] = print_distribution(simplify(Derivative(q.dist)))
            elif q.command == "expand":
                rec["result"] = render(q.testfn.expansion.truncate(q.max_order))
            elif q.command == "check":
                outcomes = run_suite(q.suite, cfg)
                rec["suite"] = q.suite
                rec["passed"] = all(o.passed for o in outcomes)
                rec["outcomes"] = [
                    {"name": f"{o.suite}.{o.name}", "passed": o.passed,
                     "observed": o.observed, "expected": o.expected,
                     "tolerance": o.tolerance}
                    for o in outcomes
                ]
                if not rec["passed"]:
                    report.check_failed = True
        except (ThickCalcError, KeyError) as exc:
            rec["error"] = str(exc)
            report.had_error = True
        report.records.append(rec)
    return report


_COMMANDS = ("eval", "derive", "project", "expand", "check", "let")


def parse_program(text: str) -> Program:
    parser = Parser()
    queries: List[Query] = []
    offset = 0
    for raw_line in text.splitlines():
        line = raw_line.split("#", 1)[0].strip()
        if line:
            _parse_statement(parser, line, queries)
        offset += len(raw_line) + 1
    return Program(parser.bindings, queries)


def parse_query(text: str) -> Program:
    """A single statement, e.g. handed to the CLI with -e."""
    parser = Parser()
    queries: List[Query] = []
    _parse_statement(parser, text.strip(), queries)
    return Program(parser.bindings, queries)


def _parse_statement(parser: Parser, line: str, queries: List[Query]):
    c = _Cursor(tokenize(line), line)
    head = c.peek()
    if head is None:
        return
    if head.kind != "name" or head.text not in _COMMANDS:
        raise DslError(f"expected a statement keyword, got {head.text!r}", head.pos)
    c.next()
    if head.text == "let":
        name = c.expect("name").text
        c.expect("=")
        value = parser.parse_value(c)
        _expect_end(c, line)
        parser.bindings[name] = value
        return
    if head.text == "check":
        pieces = []
        while not c.done():
            t = c.next()
            if t.kind not in ("name", "-"):
                raise DslError("check takes a suite name", t.pos)
            pieces.append(t.text)
        if not pieces:
            pieces = ["all"]
        queries.append(Query("check", line, suite="".join(pieces)))
        return
    if head.text == "derive":
        dist = parser.parse_value(c)
        _expect_end(c, line)
        if not _is_dist(dist):
            raise DslError("derive takes a distribution", head.pos)
        queries.append(Query("derive", line, dist=dist))
        return
    if head.text == "expand":
        fn = parser.parse_value(c)
        c.expect(",")
        order = parser.parse_int(c)
        _expect_end(c, line)
        if not isinstance(fn, (ThickTestFunction, Multiplier)):
            raise DslError("expand takes a test function", head.pos)
        queries.append(Query("expand", line, testfn=fn, max_order=order))
        return
    # eval | project
    dist = parser.parse_value(c)
    c.expect(",")
    fn = parser.parse_value(c)
    _expect_end(c, line)
    if not _is_dist(dist):
        raise DslError(f"{head.text} takes a distribution first", head.pos)
    if not isinstance(fn, ThickTestFunction):
        raise DslError(f"{head.text} takes a test function second", head.pos)
    queries.append(Query(head.text, line, dist=dist, testfn=fn))


def _expect_end(c: _Cursor, line: str):
    if not c.done():
        t = c.peek()
        raise DslError(f"unexpected trailing input {t.text!r}", t.pos)
