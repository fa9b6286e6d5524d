"""Certificates for satisfiable verdicts.

A finished open graph is turned into a finite structure: worlds are the open
states that some open special node saturates into (plus the root), and an
``l``-edge runs from ``s`` to ``t`` when an open path leads from the
successor of some ``<l>phi`` in ``s`` through non-states to a special node
whose state is ``t``.  The structure is then checked against the Hintikka
conditions and by plain model checking.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Optional

from .graph import CS, Open
from .syntax import (
    Alpha, And, Beta, Box, BoxLit, Choice, Diamond, DiamondLit, Lit, NegVar, Or,
    Seq, Star, Test, Var, classify, diamond_successors, is_lp,
)


class CertificationError(RuntimeError):
    pass


@dataclass
class ExtractedModel:
    """A finite Kripke structure.  ``relations`` is keyed by atomic program name."""

    worlds: list
    relations: dict
    valuation: dict
    labels: dict = field(default_factory=dict)
    w0: Optional[int] = None
    hidden: frozenset = frozenset()     # internal worlds left out of dumps

    def relation(self, lit: Lit) -> frozenset:
        pairs = self.relations.get(lit.name, frozenset())
        if lit.converse:
            return frozenset((v, u) for u, v in pairs)
        return frozenset(pairs)

    def successors(self, w, lit: Lit) -> list:
        return sorted(v for u, v in self.relation(lit) if u == w)


def _is_world(g, s):
    node = g[s]
    if not node.is_state or not isinstance(node.sts, Open):
        return False
    return any(not g[p].is_state and g[p].kind == "special" and isinstance(g[p].sts, Open)
               for p in node.parents)


def _saturations(g, start):
    """States reached from ``start`` through open non-states ending in a special node."""
    out = set()
    if not isinstance(g[start].sts, Open):
        return out
    seen = {start}
    todo = [start]
    while todo:
        x = todo.pop()
        node = g[x]
        for y in node.children:
            child = g[y]
            if not isinstance(child.sts, Open):
                continue
            if child.is_state:
                if node.labels.get(CS) == y:
                    out.add(y)
            elif y not in seen:
                seen.add(y)
                todo.append(y)
    return out


def extract_model(solver) -> ExtractedModel:
    """Build the structure for a finished solver whose root is open."""
    g = solver.g
    root = solver.root
    if not isinstance(g[root].sts, Open):
        raise CertificationError("the root is not open")
    worlds = sorted({root} | {s for s in g.ids() if _is_world(g, s)})
    wset = set(worlds)
    prime = {}
    for s in worlds:
        node = g[s]
        for f in node.order:
            if not is_lp(f):
                continue
            y = node.labels.get(f)
            if y is None:
                continue
            for t in _saturations(g, y):
                if t in wset:
                    prime.setdefault(f.prog, set()).add((s, t))
    relations = {}
    for lit, pairs in prime.items():
        rel = relations.setdefault(lit.name, set())
        if lit.converse:
            rel.update((t, s) for s, t in pairs)
        else:
            rel.update(pairs)
    labels = {s: g[s].gamma for s in worlds}
    valuation = {}
    for s in worlds:
        for f in labels[s]:
            if type(f) is Var:
                valuation.setdefault(f.name, set()).add(s)
    w0 = None
    if solver.formula is None:
        w0 = root
    else:
        dummy = next(iter(g[root].gamma))
        for _, t in sorted(p for lit, ps in prime.items() if lit == dummy.prog for p in ps):
            if solver.formula in labels[t]:
                w0 = t
                break
    return ExtractedModel(
        worlds=worlds,
        relations={k: frozenset(v) for k, v in sorted(relations.items())},
        valuation={k: frozenset(v) for k, v in sorted(valuation.items())},
        labels=labels,
        w0=w0,
        hidden=frozenset() if solver.formula is None else frozenset({root}),
    )


# -- model checking -----------------------------------------------------------

def _compose(r, s):
    by_src = {}
    for u, v in s:
        by_src.setdefault(u, []).append(v)
    return frozenset((u, w) for u, v in r for w in by_src.get(v, ()))


def _star(worlds, r):
    closure = frozenset((w, w) for w in worlds) | r
    while True:
        nxt = closure | _compose(closure, closure)
        if nxt == closure:
            return closure
        closure = nxt


class _Checker:
    def __init__(self, model):
        self.m = model
        self.worlds = frozenset(model.worlds)
        self._ext = {}
        self._rel = {}

    def ext(self, f) -> frozenset:
        hit = self._ext.get(f)
        if hit is not None:
            return hit
        t = type(f)
        if t is Var:
            res = self.m.valuation.get(f.name, frozenset()) & self.worlds
        elif t is NegVar:
            res = self.worlds - self.m.valuation.get(f.name, frozenset())
        elif t is And:
            res = self.ext(f.left) & self.ext(f.right)
        elif t is Or:
            res = self.ext(f.left) | self.ext(f.right)
        elif t is Diamond:
            body = self.ext(f.body)
            res = frozenset(u for u, v in self.rel(f.prog) if v in body)
        elif t is Box:
            body = self.ext(f.body)
            res = self.worlds - frozenset(u for u, v in self.rel(f.prog) if v not in body)
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._ext[f] = res
        return res

    def rel(self, g) -> frozenset:
        hit = self._rel.get(g)
        if hit is not None:
            return hit
        t = type(g)
        if t is Lit:
            res = self.m.relation(g)
        elif t is Seq:
            res = _compose(self.rel(g.left), self.rel(g.right))
        elif t is Choice:
            res = self.rel(g.left) | self.rel(g.right)
        elif t is Star:
            res = _star(self.worlds, self.rel(g.body))
        elif t is Test:
            res = frozenset((w, w) for w in self.ext(g.formula))
        else:
            raise TypeError(f"not a program: {g!r}")
        self._rel[g] = res
        return res


def model_check(model, w, phi) -> bool:
    return w in _Checker(model).ext(phi)


def program_relation(model, prog) -> frozenset:
    return _Checker(model).rel(prog)


def extension(model, phi) -> frozenset:
    """All worlds where ``phi`` holds."""
    return _Checker(model).ext(phi)


# -- Hintikka conditions ------------------------------------------------------

@dataclass
class HintikkaReport:
    ok: bool
    condition: Optional[str] = None
    world: Optional[int] = None
    formula: object = None
    detail: str = ""

    def __bool__(self):
        return self.ok


def find_fulfilling_chain(model, w, phi):
    """Shortest fulfilling chain for ``<g*>psi`` at ``w``, or None."""
    if type(phi) is not Diamond or type(phi.prog) is not Star:
        raise ValueError("expected a formula of the form <g*>psi")
    labels = model.labels
    if phi not in labels.get(w, ()):
        return None
    goal = phi.body
    start = (w, phi)
    prev = {start: None}
    queue = deque([start])
    while queue:
        cur = queue.popleft()
        u, chi = cur
        if chi == goal:
            chain = []
            while cur is not None:
                chain.append(cur)
                cur = prev[cur]
            return chain[::-1]
        if is_lp(chi):
            steps = [(v, chi.body) for v in model.successors(u, chi.prog)]
        elif type(chi) is Diamond:
            steps = [(u, s) for s in sorted(diamond_successors(chi))]
        else:
            steps = []
        for nxt in steps:
            if nxt not in prev and nxt[1] in labels.get(nxt[0], ()):
                prev[nxt] = cur
                queue.append(nxt)
    return None


def check_hintikka(model, phi=None) -> HintikkaReport:
    labels = model.labels
    for w in model.worlds:
        label = labels.get(w, frozenset())
        for f in sorted(label):
            kind = classify(f)
            if type(f) is NegVar and Var(f.name) in label:
                return HintikkaReport(False, "H1", w, f, f"{f.name} and its negation")
            if isinstance(kind, Alpha):
                missing = [d for d in kind.decomps if d not in label]
                if missing:
                    return HintikkaReport(False, "H2", w, f, f"missing {missing[0]}")
            elif isinstance(kind, Beta):
                if kind.b1 not in label and kind.b2 not in label:
                    return HintikkaReport(False, "H3", w, f, "neither disjunct present")
            elif isinstance(kind, DiamondLit):
                if not any(kind.body in labels.get(v, ()) for v in model.successors(w, kind.lit)):
                    return HintikkaReport(False, "H4", w, f, "no successor carries the body")
            elif isinstance(kind, BoxLit):
                for v in model.successors(w, kind.lit):
                    if kind.body not in labels.get(v, ()):
                        return HintikkaReport(False, "H5", w, f, f"successor {v} lacks the body")
            if type(f) is Diamond and type(f.prog) is Star:
                if find_fulfilling_chain(model, w, f) is None:
                    return HintikkaReport(False, "H6", w, f, "no fulfilling chain")
    if phi is not None and not any(phi in labels.get(w, ()) for w in model.worlds):
        return HintikkaReport(False, "structure", None, phi, "formula in no label")
    return HintikkaReport(True)


# -- text format --------------------------------------------------------------

def _visible(name):
    return not name.startswith("$")


def dump_model(model) -> str:
    """``world <id>`` lines (w0 first), then ``val`` and ``rel`` lines."""
    worlds = [w for w in model.worlds if w not in model.hidden]
    if model.w0 is not None and model.w0 in worlds:
        worlds.remove(model.w0)
        worlds.insert(0, model.w0)
    shown = set(worlds)
    lines = [f"world {w}" for w in worlds]
    for var, ws in sorted(model.valuation.items()):
        if _visible(var):
            members = sorted(w for w in ws if w in shown)
            lines.append(" ".join(["val", var] + [str(w) for w in members]))
    for prog, pairs in sorted(model.relations.items()):
        if _visible(prog):
            for u, v in sorted(pairs):
                if u in shown and v in shown:
                    lines.append(f"rel {prog} {u} {v}")
    return "\n".join(lines) + "\n"


def load_model(text: str) -> ExtractedModel:
    worlds, valuation, relations = [], {}, {}
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].split()
        if not line:
            continue
        try:
            if line[0] == "world" and len(line) == 2:
                worlds.append(int(line[1]))
            elif line[0] == "val" and len(line) >= 2:
                valuation.setdefault(line[1], set()).update(int(w) for w in line[2:])
            elif line[0] == "rel" and len(line) == 4:
                relations.setdefault(line[1], set()).add((int(line[2]), int(line[3])))
            else:
                raise ValueError
        except ValueError:
            raise ValueError(f"line {n}: cannot read {raw!r}") from None
    known = set(worlds)
    for ws in valuation.values():
        if not ws <= known:
            raise ValueError("valuation mentions an undeclared world")
    for pairs in relations.values():
        if any(u not in known or v not in known for u, v in pairs):
            raise ValueError("relation mentions an undeclared world")
    return ExtractedModel(
        worlds=worlds,
        relations={k: frozenset(v) for k, v in relations.items()},
        valuation={k: frozenset(v) for k, v in valuation.items()},
        w0=worlds[0] if worlds else None,
    )


__all__ = [
    "ExtractedModel", "CertificationError", "HintikkaReport", "extract_model",
    "check_hintikka", "find_fulfilling_chain", "model_check", "program_relation",
    "extension", "dump_model", "load_model",
]
