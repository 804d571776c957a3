"""Expression syntax for algebra elements, and the canonical renderer.

Grammar (no implicit multiplication):

    expr    := term (('+' | '-') term)*
    term    := factor ('*' factor)*
    factor  := '-' factor | power
    power   := atom ['^' NAT]
    atom    := NAT ['/' NAT] | variable | generator | NAME | '(' expr ')'

where `variable` is x1..xn, `generator` is th[degree,index] with the degree
an integer or a tuple literal like (1,0), and NAME is a declared generator
name.  Rendering emits terms sorted by generator word (short words first),
then by base monomial in descending graded-lexicographic order; parsing the
rendered form reproduces the element exactly.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .basecoeff import BasePoly
from .galgebra import GeneratorSpec, GradedElement
from .grading import FiniteTable, GradingError


class ExprError(ValueError):
    """Syntax or symbol-resolution failure, carrying the offending position."""

    def __init__(self, message: str, pos: int):
        super().__init__("%s (at position %d)" % (message, pos))
        self.pos = pos


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([+\-*^()\[\],/]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m or m.end() == pos:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad = len(text) - len(stripped)
            raise ExprError("unexpected character %r" % text[bad], bad)
        if m.group(1) is not None:
            tokens.append(("num", int(m.group(1)), m.start(1)))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), m.start(2)))
        else:
            tokens.append(("sym", m.group(3), m.start(3)))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    """Recursive-descent evaluator; builds values through a context object
    so the same grammar serves graded elements and plain polynomials."""

    def __init__(self, text: str, ctx):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.ctx = ctx

    def peek(self):
        return self.tokens[self.i]

    def take(self, kind=None, describe=None):
        tok = self.tokens[self.i]
        if kind is not None and tok[0] != kind:
            raise ExprError("expected %s, found %r" % (describe or kind, tok[1]), tok[2])
        self.i += 1
        return tok

    def expect(self, sym: str):
        tok = self.tokens[self.i]
        if tok[0] != "sym" or tok[1] != sym:
            raise ExprError("expected %r, found %r" % (sym, tok[1]), tok[2])
        self.i += 1
        return tok

    def at_sym(self, *values) -> bool:
        tok = self.peek()
        return tok[0] == "sym" and tok[1] in values

    def parse(self):
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ExprError("trailing input %r" % tok[1], tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.at_sym("+", "-"):
            op = self.take()[1]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.at_sym("*"):
            self.take()
            value = value * self.factor()
        return value

    def factor(self):
        if self.at_sym("-"):
            self.take()
            return -self.factor()
        return self.power()

    def power(self):
        value = self.atom()
        if self.at_sym("^"):
            self.take()
            tok = self.take("num", "exponent")
            value = value ** tok[1]
        return value

    def atom(self):
        tok = self.peek()
        if tok[0] == "num":
            self.take()
            value = Fraction(tok[1])
            if self.at_sym("/"):
                self.take()
                den = self.take("num", "denominator")
                if den[1] == 0:
                    raise ExprError("zero denominator", den[2])
                value = Fraction(tok[1], den[1])
            return self.ctx.const(value)
        if tok[0] == "name":
            self.take()
            if tok[1] == "th" and self.at_sym("["):
                return self.generator_ref(tok[2])
            return self.ctx.symbol(tok[1], tok[2])
        if self.at_sym("("):
            self.take()
            value = self.expr()
            self.expect(")")
            return value
        raise ExprError("expected a value, found %r" % (tok[1],), tok[2])

    def signed_int(self) -> int:
        neg = False
        if self.at_sym("-"):
            self.take()
            neg = True
        tok = self.take("num", "integer")
        return -tok[1] if neg else tok[1]

    def generator_ref(self, at: int):
        self.expect("[")
        if self.at_sym("("):
            self.take()
            comps = [self.signed_int()]
            while self.at_sym(","):
                self.take()
                comps.append(self.signed_int())
            self.expect(")")
            degree = tuple(comps)
        else:
            degree = self.signed_int()
        self.expect(",")
        index = self.take("num", "generator index")[1]
        self.expect("]")
        return self.ctx.generator(degree, index, at)


class _ElementContext:
    def __init__(self, spec: GeneratorSpec):
        self.spec = spec

    def const(self, value: Fraction):
        return GradedElement.scalar(self.spec, value)

    def symbol(self, name: str, at: int):
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            mu = int(m.group(1))
            if not 1 <= mu <= self.spec.nvars:
                raise ExprError("variable %s out of range 1..%d"
                                % (name, self.spec.nvars), at)
            return GradedElement.variable(self.spec, mu)
        pos = self.spec.position_of_name(name)
        if pos is None:
            raise ExprError("unknown symbol %r" % name, at)
        return GradedElement.gen(self.spec, pos)

    def generator(self, degree, index: int, at: int):
        try:
            pos = self.spec.position_of(degree, index)
        except (GradingError, ValueError) as exc:
            raise ExprError(str(exc), at) from exc
        return GradedElement.gen(self.spec, pos)


class _PolyContext:
    def __init__(self, nvars: int):
        self.nvars = nvars

    def const(self, value: Fraction):
        return BasePoly.const(self.nvars, value)

    def symbol(self, name: str, at: int):
        m = re.fullmatch(r"x(\d+)", name)
        if m:
            mu = int(m.group(1))
            if not 1 <= mu <= self.nvars:
                raise ExprError("variable %s out of range 1..%d" % (name, self.nvars), at)
            return BasePoly.var(self.nvars, mu)
        raise ExprError("unknown symbol %r" % name, at)

    def generator(self, degree, index, at):
        raise ExprError("generators are not allowed in a base polynomial", at)


def parse_element(text: str, spec: GeneratorSpec) -> GradedElement:
    return _Parser(text, _ElementContext(spec)).parse()


def parse_poly(text: str, nvars: int) -> BasePoly:
    return _Parser(text, _PolyContext(nvars)).parse()


# ---------------------------------------------------------------------------
# rendering
# ---------------------------------------------------------------------------

def render_rational(q: Fraction) -> str:
    q = Fraction(q)
    if q.denominator == 1:
        return str(q.numerator)
    return "%d/%d" % (q.numerator, q.denominator)


def _monomial_factors(exps) -> list:
    out = []
    for k, e in enumerate(exps):
        if e == 1:
            out.append("x%d" % (k + 1))
        elif e > 1:
            out.append("x%d^%d" % (k + 1, e))
    return out


def _poly_terms_desc(poly: BasePoly):
    return sorted(poly.terms.items(), key=lambda kv: (sum(kv[0]), kv[0]), reverse=True)


def render_poly(poly: BasePoly) -> str:
    if poly.is_zero():
        return "0"
    return _join_terms((coeff, _monomial_factors(exps))
                       for exps, coeff in _poly_terms_desc(poly))


def _degree_token(spec: GeneratorSpec, degree) -> str:
    if isinstance(spec.grading, FiniteTable):
        return str(degree)
    return spec.grading.format_element(degree)


def _word_factors(spec: GeneratorSpec, beta) -> list:
    out = []
    for pos, e in enumerate(beta):
        if not e:
            continue
        g = spec.generators[pos]
        tok = g.name if g.name else "th[%s,%d]" % (_degree_token(spec, g.degree), g.index)
        out.append(tok if e == 1 else "%s^%d" % (tok, e))
    return out


def _join_terms(parts) -> str:
    pieces = []
    for coeff, factors in parts:
        mag = abs(coeff)
        body = list(factors)
        if mag != 1 or not body:
            body.insert(0, render_rational(mag))
        text = "*".join(body)
        if not pieces:
            pieces.append(text if coeff > 0 else "-" + text)
        else:
            pieces.append((" + " if coeff > 0 else " - ") + text)
    return "".join(pieces)


def render_element(element: GradedElement) -> str:
    spec = element.spec
    if element.is_zero():
        return "0"
    flat = []
    for beta, poly in element.terms.items():
        word = _word_factors(spec, beta)
        for exps, coeff in _poly_terms_desc(poly):
            flat.append((coeff, _monomial_factors(exps) + word))
    return _join_terms(flat)
