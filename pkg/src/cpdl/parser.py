"""Concrete syntax: tokenizer, recursive-descent parser, and renderer.

Grammar (loosest binding first)::

    formula  := imp ('<->' imp)*
    imp      := or ('->' imp)?                 right associative
    or       := and ('|' and)*
    and      := unary ('&' unary)*
    unary    := '~' unary | '<' prog '>' unary | '[' prog ']' unary
              | 'true' | 'false' | IDENT | '(' formula ')'
    prog     := seq ('+' seq)*
    seq      := post (';' post)*
    post     := primary ('*' | '^' | '?')*
    primary  := IDENT | '(' prog ')' | '(' formula ')' '?' | unary '?'

An identifier directly followed by ``?`` inside a program is a test on a
variable.  A parenthesised group inside a program is read as a test when it
parses as a formula followed by ``?``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .surface import (
    SAnd, SAtom, SBox, SChoice, SConverse, SDiamond, SFalse, SIff, SImp, SNot,
    SOr, SSeq, SStar, STest, STrue, SVar, to_nnf,
)
from .syntax import (
    And, BOTTOM, Box, Choice, Diamond, Lit, NegVar, Or, Seq, Star, Test, TOP,
    Var, negate,
)


class ParseError(ValueError):
    def __init__(self, message, line, col):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+) | (?P<nl>\n) | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|[~&|<>\[\];+*?^()])
  | (?P<ident>[a-z][a-z0-9]*)
""", re.VERBOSE)

_KEYWORDS = {"true", "false"}


def tokenize(text: str) -> list:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if m is None:
            raise ParseError(f"unknown token {text[pos]!r}", line, col)
        kind = m.lastgroup
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "op":
            tokens.append(Token(m.group(), m.group(), line, col))
        elif kind == "ident":
            word = m.group()
            tokens.append(Token(word if word in _KEYWORDS else "ident", word, line, col))
        pos = m.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


class _Parser:
    def __init__(self, tokens):
        self.toks = tokens
        self.i = 0

    @property
    def tok(self):
        return self.toks[self.i]

    def peek(self, k=1):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def take(self, kind=None):
        t = self.tok
        if kind is not None and t.kind != kind:
            want = "end of input" if kind == "eof" else repr(kind)
            got = "end of input" if t.kind == "eof" else repr(t.text)
            raise ParseError(f"expected {want}, found {got}", t.line, t.col)
        self.i += 1
        return t

    def fail(self, what):
        t = self.tok
        got = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"expected {what}, found {got}", t.line, t.col)

    # formulas
    def formula(self):
        f = self.imp()
        while self.tok.kind == "<->":
            self.take()
            f = SIff(f, self.imp())
        return f

    def imp(self):
        f = self.disj()
        if self.tok.kind == "->":
            self.take()
            return SImp(f, self.imp())
        return f

    def disj(self):
        f = self.conj()
        while self.tok.kind == "|":
            self.take()
            f = SOr(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.tok.kind == "&":
            self.take()
            f = SAnd(f, self.unary())
        return f

    def unary(self):
        k = self.tok.kind
        if k == "~":
            self.take()
            return SNot(self.unary())
        if k == "<":
            self.take()
            g = self.prog()
            self.take(">")
            return SDiamond(g, self.unary())
        if k == "[":
            self.take()
            g = self.prog()
            self.take("]")
            return SBox(g, self.unary())
        if k == "true":
            self.take()
            return STrue()
        if k == "false":
            self.take()
            return SFalse()
        if k == "ident":
            return SVar(self.take().text)
        if k == "(":
            self.take()
            f = self.formula()
            self.take(")")
            return f
        self.fail("a formula")

    # programs
    def prog(self):
        g = self.seq()
        while self.tok.kind == "+":
            self.take()
            g = SChoice(g, self.seq())
        return g

    def seq(self):
        g = self.post()
        while self.tok.kind == ";":
            self.take()
            g = SSeq(g, self.post())
        return g

    def post(self):
        g = self.primary()
        while self.tok.kind in ("*", "^", "?"):
            op = self.take().kind
            if op == "*":
                g = SStar(g)
            elif op == "^":
                g = SConverse(g)
            else:
                # only a formula can be tested; a bare identifier was read as an atom
                if isinstance(g, SAtom):
                    g = STest(SVar(g.name))
                else:
                    t = self.toks[self.i - 1]
                    raise ParseError("'?' must follow a formula", t.line, t.col)
        return g

    def primary(self):
        k = self.tok.kind
        if k == "ident":
            return SAtom(self.take().text)
        if k == "(":
            save = self.i
            try:
                self.take()
                f = self.formula()
                self.take(")")
                self.take("?")
                return STest(f)
            except ParseError:
                self.i = save
            self.take("(")
            g = self.prog()
            self.take(")")
            return g
        if k in ("~", "<", "[", "true", "false"):
            f = self.unary()
            self.take("?")
            return STest(f)
        self.fail("a program")


def parse(text: str):
    """Parse concrete syntax into a surface formula."""
    p = _Parser(tokenize(text))
    f = p.formula()
    p.take("eof")
    return f


def parse_formula(text: str):
    """Parse and translate to a core NNF formula."""
    return to_nnf(parse(text))


def read_formula_file(text: str):
    """Parse the contents of a formula file (``#`` comments allowed)."""
    return parse_formula(text)


# -- rendering ----------------------------------------------------------------

_NEG_TOP = negate(TOP)
_NEG_BOTTOM = negate(BOTTOM)
_SPECIAL = {TOP: "true", BOTTOM: "false", _NEG_TOP: "~true", _NEG_BOTTOM: "~false"}

# formula levels: 1 = '|', 2 = '&', 3 = unary
# program levels: 1 = '+', 2 = ';', 3 = postfix/atom


def _render_formula(f, level):
    special = _SPECIAL.get(f)
    if special is not None:
        return special
    t = type(f)
    if t is Var:
        return f.name
    if t is NegVar:
        return "~" + f.name
    if t is And or t is Or:
        mine = 2 if t is And else 1
        op = " & " if t is And else " | "
        text = _render_formula(f.left, mine) + op + _render_formula(f.right, mine + 1)
        return f"({text})" if level > mine else text
    if t is Diamond:
        return f"<{_render_program(f.prog, 1)}>{_render_formula(f.body, 3)}"
    if t is Box:
        return f"[{_render_program(f.prog, 1)}]{_render_formula(f.body, 3)}"
    raise TypeError(f"not a core formula: {f!r}")


def _render_program(g, level):
    t = type(g)
    if t is Lit:
        return g.name + ("^" if g.converse else "")
    if t is Seq or t is Choice:
        mine = 2 if t is Seq else 1
        op = ";" if t is Seq else "+"
        text = _render_program(g.left, mine) + op + _render_program(g.right, mine + 1)
        return f"({text})" if level > mine else text
    if t is Star:
        inner = _render_program(g.body, 3)
        if type(g.body) is Test:
            inner = f"({inner})"
        return inner + "*"
    if t is Test:
        return _render_formula(g.formula, 3) + "?"
    raise TypeError(f"not a core program: {g!r}")


def render(term) -> str:
    """Render a core formula or program with minimal parentheses."""
    if isinstance(term, (Lit, Seq, Choice, Star, Test)):
        return _render_program(term, 1)
    return _render_formula(term, 1)
