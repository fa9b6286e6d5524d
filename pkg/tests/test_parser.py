import pytest
from hypothesis import given, settings

from cpdl.oracle import random_formula
from cpdl.parser import ParseError, parse, parse_formula, read_formula_file, render, tokenize
from cpdl.surface import (
    SAtom, SBox, SChoice, SConverse, SDiamond, SImp, SSeq, SStar, SVar,
)
from cpdl.syntax import (
    And, BOTTOM, Box, Choice, Diamond, Lit, NegVar, Or, Seq, Star, Test, TOP, Var,
)

from strategies import formulas

p, q = Var("p"), Var("q")
a, b = Lit("a"), Lit("b")


def test_parse_toy_formula():
    assert parse("<a><a*>[a^]p") == SDiamond(
        SAtom("a"), SDiamond(SStar(SAtom("a")), SBox(SConverse(SAtom("a")), SVar("p"))))


def test_parse_implication():
    assert parse("p -> [a]<a^>p") == SImp(
        SVar("p"), SBox(SAtom("a"), SDiamond(SConverse(SAtom("a")), SVar("p"))))


def test_parse_nested_program():
    got = parse("<a;(b+c)*>q")
    assert got == SDiamond(SSeq(SAtom("a"), SStar(SChoice(SAtom("b"), SAtom("c")))), SVar("q"))


@pytest.mark.parametrize("text, expected", [
    ("p & q | r", Or(And(p, q), Var("r"))),
    ("p | q & r", Or(p, And(q, Var("r")))),
    ("~p & q", And(NegVar("p"), q)),
    ("p -> q -> r", Or(NegVar("p"), Or(NegVar("q"), Var("r")))),
    ("<a>p & q", And(Diamond(a, p), q)),
    ("<a;b+b;a>p", Diamond(Choice(Seq(a, b), Seq(b, a)), p)),
    ("<a*^>p", Diamond(Star(Lit("a", True)), p)),
    ("<p?;a>q", Diamond(Seq(Test(p), a), q)),
    ("[(p | q)?]p", Box(Test(Or(p, q)), p)),
])
def test_precedence(text, expected):
    assert parse_formula(text) == expected


def test_iff_desugars_to_both_implications():
    assert parse_formula("p <-> q") == And(Or(NegVar("p"), q), Or(NegVar("q"), p))


def test_negation_is_pushed_to_atoms():
    assert parse_formula("~(p & <a>~q)") == Or(NegVar("p"), Box(a, q))
    assert parse_formula("~~p") == p
    assert parse_formula("~[a*]p") == Diamond(Star(a), NegVar("p"))


def test_converse_is_pushed_to_atoms():
    assert parse_formula("<(a;b)^>p") == Diamond(Seq(Lit("b", True), Lit("a", True)), p)
    assert parse_formula("<(a+b*)^>p") == Diamond(Choice(Lit("a", True), Star(Lit("b", True))), p)
    assert parse_formula("<a^^>p") == Diamond(a, p)
    assert parse_formula("<(p?)^>q") == Diamond(Test(p), q)


def test_constants():
    assert parse_formula("true") is TOP
    assert parse_formula("false") is BOTTOM
    assert parse_formula("~true") == parse_formula("~true")
    assert render(TOP) == "true" and render(BOTTOM) == "false"


@pytest.mark.parametrize("text, line, col", [
    ("p &", 1, 4),
    ("<a p", 1, 4),
    ("p\n & @", 2, 4),
    ("P", 1, 1),
    ("[a]", 1, 4),
    ("(p", 1, 3),
    ("<$d>p", 1, 2),
])
def test_errors_carry_location(text, line, col):
    with pytest.raises(ParseError) as info:
        parse(text)
    assert (info.value.line, info.value.col) == (line, col)


def test_comments_are_ignored():
    text = "# header\n<a>p  # trailing\n& q\n"
    assert read_formula_file(text) == And(Diamond(a, p), q)
    assert [t.kind for t in tokenize("# only a comment")] == ["eof"]


def test_render_examples():
    assert render(And(p, q)) == "p & q"
    assert render(Or(And(p, q), q)) == "p & q | q"
    assert render(And(Or(p, q), q)) == "(p | q) & q"
    assert render(parse_formula("<a><a*>[a^]p")) == "<a><a*>[a^]p"
    assert render(Diamond(Star(Test(p)), q)) == "<(p?)*>q"
    assert render(Diamond(Seq(Choice(a, b), a), p)) == "<(a+b);a>p"


def test_render_round_trips_on_random_formulas():
    for seed in range(1000):
        f = random_formula(seed, 1 + seed % 12)
        assert parse_formula(render(f)) is f


@settings(max_examples=300, deadline=None)
@given(formulas)
def test_render_round_trips(f):
    assert parse_formula(render(f)) is f
