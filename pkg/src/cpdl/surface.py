"""User-level syntax and its translation to the NNF core.

The surface grammar allows negation anywhere, implication, equivalence,
the constants true/false and converse on compound programs.  ``to_nnf``
pushes negation to the variables and ``push_converse`` pushes converse to
the atomic programs.  Core terms may be embedded as leaves; they are taken
to be in NNF already.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

from .syntax import (
    And, BOTTOM, Box, Choice, Diamond, Lit, NegVar, Or, Seq, Star, Term, Test,
    TOP, Var, _FormulaBase, _ProgramBase, negate,
)


@dataclass(frozen=True)
class SVar:
    name: str


@dataclass(frozen=True)
class SNot:
    arg: "SurfaceFormula"


@dataclass(frozen=True)
class SAnd:
    left: "SurfaceFormula"
    right: "SurfaceFormula"


@dataclass(frozen=True)
class SOr:
    left: "SurfaceFormula"
    right: "SurfaceFormula"


@dataclass(frozen=True)
class SImp:
    left: "SurfaceFormula"
    right: "SurfaceFormula"


@dataclass(frozen=True)
class SIff:
    left: "SurfaceFormula"
    right: "SurfaceFormula"


@dataclass(frozen=True)
class STrue:
    pass


@dataclass(frozen=True)
class SFalse:
    pass


@dataclass(frozen=True)
class SDiamond:
    prog: "SurfaceProgram"
    body: "SurfaceFormula"


@dataclass(frozen=True)
class SBox:
    prog: "SurfaceProgram"
    body: "SurfaceFormula"


@dataclass(frozen=True)
class SAtom:
    name: str


@dataclass(frozen=True)
class SConverse:
    prog: "SurfaceProgram"


@dataclass(frozen=True)
class SSeq:
    left: "SurfaceProgram"
    right: "SurfaceProgram"


@dataclass(frozen=True)
class SChoice:
    left: "SurfaceProgram"
    right: "SurfaceProgram"


@dataclass(frozen=True)
class SStar:
    prog: "SurfaceProgram"


@dataclass(frozen=True)
class STest:
    formula: "SurfaceFormula"


SurfaceFormula = Union[SVar, SNot, SAnd, SOr, SImp, SIff, STrue, SFalse,
                       SDiamond, SBox, _FormulaBase]
SurfaceProgram = Union[SAtom, SConverse, SSeq, SChoice, SStar, STest, _ProgramBase]


def push_converse(prog, inverted: bool = False):
    """Rewrite a surface program so that converse sits on atoms only."""
    t = type(prog)
    if t is SAtom:
        return Lit(prog.name, inverted)
    if t is SConverse:
        return push_converse(prog.prog, not inverted)
    if t is SSeq:
        left, right = push_converse(prog.left, inverted), push_converse(prog.right, inverted)
        return Seq(right, left) if inverted else Seq(left, right)
    if t is SChoice:
        return Choice(push_converse(prog.left, inverted), push_converse(prog.right, inverted))
    if t is SStar:
        return Star(push_converse(prog.prog, inverted))
    if t is STest:
        return Test(to_nnf(prog.formula))
    if isinstance(prog, Term):
        return _invert_core(prog) if inverted else prog
    raise TypeError(f"not a program: {prog!r}")


def _invert_core(prog):
    t = type(prog)
    if t is Lit:
        return Lit(prog.name, not prog.converse)
    if t is Seq:
        return Seq(_invert_core(prog.right), _invert_core(prog.left))
    if t is Choice:
        return Choice(_invert_core(prog.left), _invert_core(prog.right))
    if t is Star:
        return Star(_invert_core(prog.body))
    return prog


def to_nnf(f, negated: bool = False):
    """Translate a surface formula to an equivalent core formula in NNF."""
    t = type(f)
    if t is SVar:
        return NegVar(f.name) if negated else Var(f.name)
    if t is SNot:
        return to_nnf(f.arg, not negated)
    if t is SAnd:
        if negated:
            return Or(to_nnf(f.left, True), to_nnf(f.right, True))
        return And(to_nnf(f.left), to_nnf(f.right))
    if t is SOr:
        if negated:
            return And(to_nnf(f.left, True), to_nnf(f.right, True))
        return Or(to_nnf(f.left), to_nnf(f.right))
    if t is SImp:
        if negated:
            return And(to_nnf(f.left), to_nnf(f.right, True))
        return Or(to_nnf(f.left, True), to_nnf(f.right))
    if t is SIff:
        a, b = to_nnf(f.left), to_nnf(f.right)
        na, nb = negate(a), negate(b)
        if negated:
            return Or(And(a, nb), And(b, na))
        return And(Or(na, b), Or(nb, a))
    if t is STrue:
        return negate(TOP) if negated else TOP
    if t is SFalse:
        return negate(BOTTOM) if negated else BOTTOM
    if t is SDiamond:
        prog = push_converse(f.prog)
        return Box(prog, to_nnf(f.body, True)) if negated else Diamond(prog, to_nnf(f.body))
    if t is SBox:
        prog = push_converse(f.prog)
        return Diamond(prog, to_nnf(f.body, True)) if negated else Box(prog, to_nnf(f.body))
    if isinstance(f, _FormulaBase):
        return negate(f) if negated else f
    raise TypeError(f"not a formula: {f!r}")
