"""Satisfiability for propositional dynamic logic with converse."""

from .parser import ParseError, parse, parse_formula, render
from .scheduler import RESOURCE, SAT, UNSAT, Solver, is_sat
from .surface import to_nnf
from .syntax import (
    And, Box, Choice, Diamond, Lit, NegVar, Or, Seq, Star, Test, Var, negate,
)

__all__ = [
    "ParseError", "parse", "parse_formula", "render", "to_nnf",
    "Solver", "is_sat", "SAT", "UNSAT", "RESOURCE",
    "Var", "NegVar", "And", "Or", "Diamond", "Box",
    "Lit", "Seq", "Choice", "Star", "Test", "negate",
]
