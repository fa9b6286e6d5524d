"""Hypothesis strategies for core terms."""

from hypothesis import strategies as st

from cpdl.syntax import (
    And, Box, Choice, Diamond, Lit, NegVar, Or, Seq, Star, Test, Var,
)

VARS = ("p", "q")
PROGS = ("a", "b")

literals = st.builds(lambda v, neg: NegVar(v) if neg else Var(v), st.sampled_from(VARS), st.booleans())
atoms = st.builds(Lit, st.sampled_from(PROGS), st.booleans())


def _extend_formula(children):
    progs = st.recursive(
        atoms,
        lambda ps: st.one_of(
            st.builds(Seq, ps, ps), st.builds(Choice, ps, ps), st.builds(Star, ps),
            st.builds(Test, children),
        ),
        max_leaves=4,
    )
    return st.one_of(
        st.builds(And, children, children),
        st.builds(Or, children, children),
        st.builds(Diamond, progs, children),
        st.builds(Box, progs, children),
    )


formulas = st.recursive(literals, _extend_formula, max_leaves=8)
