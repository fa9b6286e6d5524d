"""Brute-force ground truth on tiny models.

``bounded_sat`` evaluates a formula on every Kripke model with at most
``max_worlds`` worlds at once: each relation is a boolean array of shape
``(models, n, n)`` and each formula extension one of shape ``(models, n)``.
Finding a model proves satisfiability; finding none proves nothing.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

import numpy as np

from .certify import ExtractedModel
from .syntax import (
    And, Box, Choice, Diamond, Lit, NegVar, Or, RESERVED_VAR, Seq, Star, Test, Var,
    programs, variables,
)

DEFAULT_CAP = 2 ** 18
_CHUNK = 1 << 15


class BudgetError(ValueError):
    pass


@dataclass(frozen=True)
class OracleBudget:
    max_worlds: int
    programs: tuple
    variables: tuple
    cap: int = DEFAULT_CAP

    def bits(self, n=None) -> int:
        n = self.max_worlds if n is None else n
        return n * n * len(self.programs) + n * len(self.variables)

    def check(self):
        if self.max_worlds < 1:
            raise BudgetError("max_worlds must be at least 1")
        if 2 ** self.bits() > self.cap:
            raise BudgetError(
                f"{2 ** self.bits()} models with {self.max_worlds} worlds exceed the cap {self.cap}")


def default_budget(phi, max_worlds=3, cap=DEFAULT_CAP) -> OracleBudget:
    """The largest world bound up to ``max_worlds`` that fits under ``cap``."""
    progs = tuple(sorted(programs(phi)))
    vars_ = tuple(sorted(variables(phi) - {RESERVED_VAR}))
    n = max_worlds
    while n > 1 and 2 ** OracleBudget(n, progs, vars_).bits() > cap:
        n -= 1
    return OracleBudget(n, progs, vars_, cap)


class _Evaluator:
    def __init__(self, n, rels, vals, prog_index, var_index):
        self.n = n
        self.rels = rels            # (k, M, n, n)
        self.vals = vals            # (j, M, n)
        self.pi = prog_index
        self.vi = var_index
        self.m = rels.shape[1] if rels.size else vals.shape[1]
        self._ext = {}
        self._rel = {}

    def ext(self, f):
        hit = self._ext.get(f)
        if hit is not None:
            return hit
        t = type(f)
        if t is Var:
            res = self._val(f.name)
        elif t is NegVar:
            res = ~self._val(f.name)
        elif t is And:
            res = self.ext(f.left) & self.ext(f.right)
        elif t is Or:
            res = self.ext(f.left) | self.ext(f.right)
        elif t is Diamond:
            res = np.any(self.rel(f.prog) & self.ext(f.body)[:, None, :], axis=2)
        elif t is Box:
            res = ~np.any(self.rel(f.prog) & ~self.ext(f.body)[:, None, :], axis=2)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._ext[f] = res
        return res

    def _val(self, name):
        # the reserved variable only builds true/false, so any fixed value works
        if name == RESERVED_VAR:
            return np.zeros((self.m, self.n), dtype=bool)
        return self.vals[self.vi[name]]

    def rel(self, g):
        hit = self._rel.get(g)
        if hit is not None:
            return hit
        t = type(g)
        if t is Lit:
            r = self.rels[self.pi[g.name]]
            res = np.swapaxes(r, 1, 2) if g.converse else r
        elif t is Seq:
            res = _compose(self.rel(g.left), self.rel(g.right))
        elif t is Choice:
            res = self.rel(g.left) | self.rel(g.right)
        elif t is Star:
            res = self.rel(g.body) | np.eye(self.n, dtype=bool)[None]
            while True:
                nxt = res | _compose(res, res)
                if np.array_equal(nxt, res):
                    break
                res = nxt
        elif t is Test:
            e = self.ext(g.formula)
            res = e[:, :, None] & np.eye(self.n, dtype=bool)[None]
        else:
            raise TypeError(f"not a program: {g!r}")
        self._rel[g] = res
        return res


def _compose(r, s):
    return np.matmul(r.astype(np.uint8), s.astype(np.uint8)) > 0


def _models(n, budget, start, stop):
    """Relation and valuation arrays for model numbers ``start..stop-1``."""
    k, j = len(budget.programs), len(budget.variables)
    idx = np.arange(start, stop, dtype=np.int64)
    nbits = budget.bits(n)
    bits = ((idx[:, None] >> np.arange(nbits, dtype=np.int64)[None, :]) & 1).astype(bool)
    rel_bits = n * n * k
    rels = bits[:, :rel_bits].reshape(len(idx), k, n, n).transpose(1, 0, 2, 3)
    vals = bits[:, rel_bits:].reshape(len(idx), j, n).transpose(1, 0, 2)
    return rels, vals


def bounded_sat(phi, budget=None):
    """Return the first model (in enumeration order) satisfying ``phi`` at world 0."""
    budget = default_budget(phi) if budget is None else budget
    budget.check()
    missing = (programs(phi) - set(budget.programs)) | (
        variables(phi) - set(budget.variables) - {RESERVED_VAR})
    if missing:
        raise BudgetError(f"symbols outside the budget: {sorted(missing)}")
    pi = {p: i for i, p in enumerate(budget.programs)}
    vi = {v: i for i, v in enumerate(budget.variables)}
    for n in range(1, budget.max_worlds + 1):
        total = 1 << budget.bits(n)
        for start in range(0, total, _CHUNK):
            stop = min(total, start + _CHUNK)
            rels, vals = _models(n, budget, start, stop)
            holds = _Evaluator(n, rels, vals, pi, vi).ext(phi)[:, 0]
            hits = np.flatnonzero(holds)
            if hits.size:
                m = int(hits[0])
                return _to_model(n, budget, rels[:, m], vals[:, m])
    return None


def _to_model(n, budget, rels, vals):
    relations = {}
    for i, p in enumerate(budget.programs):
        pairs = frozenset((int(u), int(v)) for u, v in zip(*np.nonzero(rels[i])))
        relations[p] = pairs
    valuation = {v: frozenset(int(w) for w in np.flatnonzero(vals[i]))
                 for i, v in enumerate(budget.variables)}
    return ExtractedModel(worlds=list(range(n)), relations=relations,
                          valuation=valuation, w0=0)


# -- random formulas ----------------------------------------------------------

RANDOM_VARS = ("p", "q")
RANDOM_PROGS = ("a", "b")


class _Gen:
    def __init__(self, rng):
        self.r = rng

    def formula(self, n, stars):
        r = self.r
        if n == 1:
            name = r.choice(RANDOM_VARS)
            return Var(name) if r.random() < 0.5 else NegVar(name)
        options = [("mod", 3)]
        if n >= 3:
            options.append(("bin", 4))
        kind = r.choices([o for o, _ in options], [w for _, w in options])[0]
        if kind == "bin":
            left = r.randint(1, n - 2)
            ctor = And if r.random() < 0.5 else Or
            return ctor(self.formula(left, stars), self.formula(n - 1 - left, stars))
        plen = r.randint(1, min(n - 1, max(1, (n - 1) // 2 + 1)))
        ctor = Diamond if r.random() < 0.5 else Box
        return ctor(self.program(plen, stars), self.formula(n - plen, stars))

    def program(self, n, stars):
        r = self.r
        if n == 1:
            return Lit(r.choice(RANDOM_PROGS), r.random() < 0.3)
        options = [("test", 1)]
        if stars < 2:
            options.append(("star", 3))
        if n >= 3:
            options += [("seq", 2), ("choice", 2)]
        kind = r.choices([o for o, _ in options], [w for _, w in options])[0]
        if kind == "star":
            return Star(self.program(n - 1, stars + 1))
        if kind == "test":
            return Test(self.formula(n - 1, stars))
        left = r.randint(1, n - 2)
        ctor = Seq if kind == "seq" else Choice
        return ctor(self.program(left, stars), self.program(n - 1 - left, stars))


def random_formula(seed: int, size: int):
    """A deterministic NNF formula of exactly ``size`` (atoms p, q; programs a, b)."""
    if size < 1:
        raise ValueError("size must be at least 1")
    return _Gen(random.Random(seed)).formula(size, 0)


__all__ = [
    "OracleBudget", "BudgetError", "default_budget", "bounded_sat", "random_formula",
    "DEFAULT_CAP",
]
