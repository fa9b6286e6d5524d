"""CPDL formulas and programs in negation normal form.

Every term is hash-consed: building the same structure twice returns the same
object, so ``==`` is identity and terms can be used directly as set members
and dict keys.  ``sort_key`` gives the canonical total order (variant tag
first, then children) used wherever iteration order must be reproducible.

Converse only ever appears on atomic programs (``Lit(name, True)``) and
negation only on variables (``NegVar``).  Surface syntax with general
negation, implication etc. lives in :mod:`cpdl.surface`.
"""

from __future__ import annotations

import threading
from typing import NamedTuple, Union

__all__ = [
    "Term", "Formula", "Program",
    "Var", "NegVar", "And", "Or", "Diamond", "Box",
    "Lit", "Seq", "Choice", "Star", "Test",
    "DUMMY_PROGRAM", "RESERVED_VAR", "TOP", "BOTTOM",
    "Alpha", "Beta", "DiamondLit", "BoxLit", "Literal",
    "negate", "invert_literal", "classify", "is_eventuality", "is_lp",
    "diamond_successors", "closure", "size", "variables", "programs",
]

# Names that the parser can never produce.
DUMMY_PROGRAM = "$d"
RESERVED_VAR = "$t"

_table: dict = {}
_lock = threading.Lock()


class Term:
    """Base class of interned formulas and programs."""

    __slots__ = ("args", "sort_key", "_cache")
    TAG = -1

    def __new__(cls, *args):
        key = (cls, args)
        obj = _table.get(key)
        if obj is not None:
            return obj
        cls._check(args)
        with _lock:
            obj = _table.get(key)
            if obj is None:
                obj = object.__new__(cls)
                obj.args = args
                obj.sort_key = (cls.TAG,) + tuple(
                    a.sort_key if isinstance(a, Term) else a for a in args)
                obj._cache = {}
                _table[key] = obj
        return obj

    def __init__(self, *args):
        pass

    @classmethod
    def _check(cls, args):
        pass

    def __reduce__(self):
        return (type(self), self.args)

    def __copy__(self):
        return self

    def __deepcopy__(self, memo):
        return self

    def __lt__(self, other):
        return self.sort_key < other.sort_key

    def __le__(self, other):
        return self.sort_key <= other.sort_key

    def __gt__(self, other):
        return self.sort_key > other.sort_key

    def __ge__(self, other):
        return self.sort_key >= other.sort_key

    def __str__(self):
        from .parser import render
        return render(self)

    def __repr__(self):
        return f"{type(self).__name__}{self.args!r}"


def _is_formula(x):
    return isinstance(x, _FormulaBase)


def _is_program(x):
    return isinstance(x, _ProgramBase)


class _FormulaBase(Term):
    __slots__ = ()


class _ProgramBase(Term):
    __slots__ = ()


# -- formulas -----------------------------------------------------------------

class Var(_FormulaBase):
    __slots__ = ()
    TAG = 0

    @classmethod
    def _check(cls, args):
        (name,) = args
        if not isinstance(name, str) or not name:
            raise ValueError("variable name must be a non-empty string")

    @property
    def name(self) -> str:
        return self.args[0]


class NegVar(Var):
    __slots__ = ()
    TAG = 1


class _Binary(_FormulaBase):
    __slots__ = ()

    @classmethod
    def _check(cls, args):
        left, right = args
        if not (_is_formula(left) and _is_formula(right)):
            raise TypeError(f"{cls.__name__} expects two formulas")

    @property
    def left(self) -> Formula:
        return self.args[0]

    @property
    def right(self) -> Formula:
        return self.args[1]


class And(_Binary):
    __slots__ = ()
    TAG = 2


class Or(_Binary):
    __slots__ = ()
    TAG = 3


class _Modal(_FormulaBase):
    __slots__ = ()

    @classmethod
    def _check(cls, args):
        prog, body = args
        if not (_is_program(prog) and _is_formula(body)):
            raise TypeError(f"{cls.__name__} expects a program and a formula")

    @property
    def prog(self) -> Program:
        return self.args[0]

    @property
    def body(self) -> Formula:
        return self.args[1]


class Diamond(_Modal):
    __slots__ = ()
    TAG = 4


class Box(_Modal):
    __slots__ = ()
    TAG = 5


# -- programs -----------------------------------------------------------------

class Lit(_ProgramBase):
    """A literal program: an atomic program or its converse."""

    __slots__ = ()
    TAG = 10

    def __new__(cls, name, converse=False):
        return super().__new__(cls, name, bool(converse))

    @classmethod
    def _check(cls, args):
        name, _ = args
        if not isinstance(name, str) or not name:
            raise ValueError("program name must be a non-empty string")

    @property
    def name(self) -> str:
        return self.args[0]

    @property
    def converse(self) -> bool:
        return self.args[1]


class _ProgBinary(_ProgramBase):
    __slots__ = ()

    @classmethod
    def _check(cls, args):
        if not all(_is_program(a) for a in args) or len(args) != 2:
            raise TypeError(f"{cls.__name__} expects two programs")

    @property
    def left(self) -> Program:
        return self.args[0]

    @property
    def right(self) -> Program:
        return self.args[1]


class Seq(_ProgBinary):
    __slots__ = ()
    TAG = 11


class Choice(_ProgBinary):
    __slots__ = ()
    TAG = 12


class Star(_ProgramBase):
    __slots__ = ()
    TAG = 13

    @classmethod
    def _check(cls, args):
        if len(args) != 1 or not _is_program(args[0]):
            raise TypeError("Star expects one program")

    @property
    def body(self) -> Program:
        return self.args[0]


class Test(_ProgramBase):
    __slots__ = ()
    TAG = 14

    @classmethod
    def _check(cls, args):
        if len(args) != 1 or not _is_formula(args[0]):
            raise TypeError("Test expects one formula")

    @property
    def formula(self) -> Formula:
        return self.args[0]


Formula = Union[Var, NegVar, And, Or, Diamond, Box]
Program = Union[Lit, Seq, Choice, Star, Test]

TOP = Or(Var(RESERVED_VAR), NegVar(RESERVED_VAR))
BOTTOM = And(Var(RESERVED_VAR), NegVar(RESERVED_VAR))


# -- classification -----------------------------------------------------------

class Alpha(NamedTuple):
    decomps: tuple


class Beta(NamedTuple):
    b1: Formula
    b2: Formula


class DiamondLit(NamedTuple):
    lit: Lit
    body: Formula


class BoxLit(NamedTuple):
    lit: Lit
    body: Formula


class Literal(NamedTuple):
    pass


_LITERAL = Literal()


def negate(phi: Formula) -> Formula:
    """``nnf(~phi)`` for a formula already in NNF."""
    c = phi._cache
    if "neg" in c:
        return c["neg"]
    # iterative post-order to survive deep formulas
    stack = [phi]
    while stack:
        f = stack[-1]
        if "neg" in f._cache:
            stack.pop()
            continue
        t = type(f)
        if t is Var:
            res = NegVar(f.name)
        elif t is NegVar:
            res = Var(f.name)
        else:
            sub = (f.left, f.right) if t in (And, Or) else (f.body,)
            todo = [s for s in sub if "neg" not in s._cache]
            if todo:
                stack.extend(todo)
                continue
            if t is And:
                res = Or(negate(f.left), negate(f.right))
            elif t is Or:
                res = And(negate(f.left), negate(f.right))
            elif t is Diamond:
                res = Box(f.prog, negate(f.body))
            else:
                res = Diamond(f.prog, negate(f.body))
        f._cache["neg"] = res
        res._cache["neg"] = f
        stack.pop()
    return c["neg"]


def invert_literal(lit: Lit) -> Lit:
    return Lit(lit.name, not lit.converse)


def classify(phi: Formula):
    """Smullyan classification of an NNF formula.

    Returns one of ``Alpha``, ``Beta``, ``DiamondLit``, ``BoxLit`` or
    ``Literal``.
    """
    c = phi._cache
    kind = c.get("kind")
    if kind is not None:
        return kind
    t = type(phi)
    if t is And:
        kind = Alpha((phi.left, phi.right))
    elif t is Or:
        kind = Beta(phi.left, phi.right)
    elif t is Diamond or t is Box:
        g, body = phi.prog, phi.body
        gt = type(g)
        if gt is Lit:
            kind = DiamondLit(g, body) if t is Diamond else BoxLit(g, body)
        elif t is Diamond:
            if gt is Seq:
                kind = Alpha((Diamond(g.left, Diamond(g.right, body)),))
            elif gt is Choice:
                kind = Beta(Diamond(g.left, body), Diamond(g.right, body))
            elif gt is Star:
                kind = Beta(body, Diamond(g.body, phi))
            else:
                kind = Alpha((body, g.formula))
        else:
            if gt is Seq:
                kind = Alpha((Box(g.left, Box(g.right, body)),))
            elif gt is Choice:
                kind = Alpha((Box(g.left, body), Box(g.right, body)))
            elif gt is Star:
                kind = Alpha((body, Box(g.body, phi)))
            else:
                kind = Beta(body, negate(g.formula))
    else:
        kind = _LITERAL
    c["kind"] = kind
    return kind


def is_lp(phi: Formula) -> bool:
    """True for a diamond over a literal program."""
    return type(phi) is Diamond and type(phi.prog) is Lit


def is_eventuality(phi: Formula) -> bool:
    c = phi._cache
    ev = c.get("ev")
    if ev is None:
        f = phi
        ev = False
        while type(f) is Diamond:
            if type(f.prog) is Star:
                ev = True
                break
            f = f.body
        c["ev"] = ev
    return ev


def diamond_successors(phi: Formula) -> frozenset:
    """The reductions of a diamond over a compound program."""
    if type(phi) is not Diamond or type(phi.prog) is Lit:
        raise ValueError(f"no reduction defined for {phi!r}")
    kind = classify(phi)
    if isinstance(kind, Alpha):
        return frozenset(kind.decomps[:1])
    return frozenset(kind)


def _closure_step(phi):
    t = type(phi)
    if t is Diamond or t is Box:
        if type(phi.prog) is Lit:
            return (phi.body,)
    kind = classify(phi)
    if isinstance(kind, Alpha):
        return kind.decomps
    if isinstance(kind, Beta):
        return tuple(kind)
    return ()


def closure(phi: Formula) -> frozenset:
    """Least set containing ``phi`` closed under body extraction and decomposition."""
    seen = {phi}
    todo = [phi]
    while todo:
        f = todo.pop()
        for g in _closure_step(f):
            if g not in seen:
                seen.add(g)
                todo.append(g)
    return frozenset(seen)


def size(t: Term) -> int:
    """Formula/program size as used for the closure bound."""
    c = t._cache
    if "size" in c:
        return c["size"]
    k = type(t)
    if k in (Var, NegVar, Lit):
        n = 1
    elif k in (And, Or, Seq, Choice):
        n = 1 + size(t.left) + size(t.right)
    elif k in (Diamond, Box):
        n = size(t.prog) + size(t.body)
    elif k is Star:
        n = 1 + size(t.body)
    else:
        n = 1 + size(t.formula)
    c["size"] = n
    return n


def _walk(t: Term):
    stack = [t]
    while stack:
        x = stack.pop()
        yield x
        stack.extend(a for a in x.args if isinstance(a, Term))


def variables(t: Term) -> frozenset:
    return frozenset(x.name for x in _walk(t) if isinstance(x, Var))


def programs(t: Term) -> frozenset:
    """Atomic program names occurring in ``t``."""
    return frozenset(x.name for x in _walk(t) if type(x) is Lit)
