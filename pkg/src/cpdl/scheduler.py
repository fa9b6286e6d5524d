"""Rule selection for the satisfiability procedure.

Rules, in priority order:

* Update (Rule 3): an open node whose recomputed status differs.
* CloseUnfulfilled (Rule 4): only when nothing is stale; an open node with an
  eventuality whose rescuer set is empty gets closed.
* Expand / Define (Rules 1 and 2): chosen by a depth-first walk. A node is
  expanded when first entered and defined when its frame is popped, so its
  children are defined first whenever the graph allows it.

In ``queue`` mode staleness is tracked with a FIFO of nodes to recheck: when
a status changes, its graph parents and every node whose last status
computation read it are enqueued.  ``naive`` mode rechecks every open node
on every step and exists for differential testing.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass
from typing import NamedTuple, Optional

from .engine import Engine, unfulfilled
from .graph import Closed, FULFILLED, GraphError, Open, TableauGraph, UNDEF, UNEXP, node_kind
from .syntax import DUMMY_PROGRAM, Diamond, Lit, closure, is_lp


class Expand(NamedTuple):
    node: int


class Define(NamedTuple):
    node: int


class Update(NamedTuple):
    node: int
    status: object


class CloseUnfulfilled(NamedTuple):
    node: int


RULE_NUMBER = {Expand: 1, Define: 2, Update: 3, CloseUnfulfilled: 4}

SAT, UNSAT, RESOURCE = "SAT", "UNSAT", "RESOURCE"


class InvariantViolation(AssertionError):
    pass


class ResourceExceeded(Exception):
    pass


@dataclass
class _Frame:
    node: int
    next: int = 0
    last: Optional[int] = None


@dataclass
class TraceEntry:
    step: int
    rule: int
    node: int
    status: object
    idx: Optional[int]


@dataclass
class Counters:
    rule1: int = 0
    rule2: int = 0
    rule3: int = 0
    rule4: int = 0
    rule3_checks: int = 0


def all_fulfilled(sts) -> bool:
    return isinstance(sts, Open) and all(v is FULFILLED for v in sts.prs.values())


class Solver:
    """One run of the tableau procedure on one formula.

    ``seed_state`` replaces the usual root ``{<d>phi}`` by a state holding the
    given formulas; used to replay hand-made examples.
    """

    def __init__(self, formula=None, *, scheduler="queue", strategy="default",
                 max_nodes=None, timeout_ms=None, debug=False, use_cache=True,
                 seed_state=None, record=False, stop_when_closed=True):
        if scheduler not in ("queue", "naive"):
            raise ValueError(f"unknown scheduler {scheduler!r}")
        if strategy not in ("default", "trace"):
            raise ValueError(f"unknown strategy {strategy!r}")
        if (formula is None) == (seed_state is None):
            raise ValueError("give exactly one of formula and seed_state")
        self.scheduler = scheduler
        self.strategy = strategy
        self.max_nodes = max_nodes
        self.timeout_ms = timeout_ms
        self.debug = debug
        self.record = record
        self.stop_when_closed = stop_when_closed
        self.formula = formula
        self.g = TableauGraph(check=debug)
        self.engine = Engine(self.g, use_cache=use_cache)
        self.counters = Counters()
        self.consumers = {}
        self._dirty = deque()
        self._dirty_set = set()
        self._rule4 = set()
        self._stack = []
        self._on_stack = set()
        self._scan = 1
        self._clean = False
        self.trace = []
        self.history = {}
        self.verdict = None
        self.elapsed_ms = 0.0
        if seed_state is not None:
            gamma = frozenset(seed_state)
        else:
            gamma = frozenset({Diamond(Lit(DUMMY_PROGRAM), formula)})
        self.root = self.g.create_node(gamma)
        if debug:
            self._closure = frozenset().union(*(closure(f) for f in gamma))
            self._last_idx = 0
            self._closed_seen = {}
            self._stamped = set()
            self._check_touched()

    # -- main loop ------------------------------------------------------------

    def run(self) -> str:
        start = time.perf_counter()
        deadline = None if self.timeout_ms is None else start + self.timeout_ms / 1000.0
        try:
            while True:
                if self.max_nodes is not None and len(self.g) > self.max_nodes:
                    raise ResourceExceeded("node budget exhausted")
                if deadline is not None and time.perf_counter() > deadline:
                    raise ResourceExceeded("time budget exhausted")
                if self.stop_when_closed and isinstance(self.g[self.root].sts, Closed):
                    break
                rule = self.applicable_rule()
                if rule is None:
                    break
                self.apply_rule(rule)
        except ResourceExceeded:
            self.verdict = RESOURCE
        else:
            self.verdict = SAT if isinstance(self.g[self.root].sts, Open) else UNSAT
        self.elapsed_ms = (time.perf_counter() - start) * 1000.0
        return self.verdict

    def is_sat(self) -> bool:
        verdict = self.verdict or self.run()
        if verdict == RESOURCE:
            raise ResourceExceeded("no verdict within the budget")
        return verdict == SAT

    # -- rule selection -------------------------------------------------------

    def applicable_rule(self):
        rule = self._stale_rule()
        if rule is None:
            rule = self._unfulfilled_rule()
        if rule is None:
            rule = self._dfs_rule()
        return rule

    def _recheck(self, x):
        self.counters.rule3_checks += 1
        new = self.engine.det_status(x)
        self._add_dependencies(x)
        self._check_touched()
        return new

    def _stale_rule(self):
        g = self.g
        if self.scheduler == "queue":
            while self._dirty:
                x = self._dirty.popleft()
                self._dirty_set.discard(x)
                if not isinstance(g[x].sts, Open):
                    continue
                new = self._recheck(x)
                if new != g[x].sts:
                    return Update(x, new)
            return None
        # expansions never change what det_status returns for an open node,
        # so a clean full pass stays valid until some status changes
        if self._clean:
            return None
        for x in g.ids():
            if isinstance(g[x].sts, Open):
                new = self._recheck(x)
                if new != g[x].sts:
                    return Update(x, new)
        self._clean = True
        return None

    def _unfulfilled_rule(self):
        g = self.g
        if self.scheduler == "naive":
            candidates = g.ids()
        else:
            candidates = sorted(self._rule4)
        for x in candidates:
            if unfulfilled(g[x]):
                return CloseUnfulfilled(x)
            self._rule4.discard(x)
        return None

    def _push(self, x):
        self._stack.append(_Frame(x))
        self._on_stack.add(x)
        return Expand(x)

    def _pop(self):
        frame = self._stack.pop()
        self._on_stack.discard(frame.node)
        if self._stack:
            self._stack[-1].last = frame.node
        return frame.node

    def _dfs_rule(self):
        g = self.g
        while True:
            if not self._stack:
                while self._scan <= len(g) and g[self._scan].sts is not UNEXP:
                    self._scan += 1
                if self._scan <= len(g):
                    return self._push(self._scan)
                for x in g.ids():
                    if g[x].sts is UNDEF:
                        return Define(x)
                return None
            frame = self._stack[-1]
            node = g[frame.node]
            if node.sts is not UNDEF:
                self._pop()
                continue
            if (self.strategy == "trace" and frame.last is not None
                    and node_kind(node) in ("alpha", "beta")
                    and all_fulfilled(g[frame.last].sts)):
                return Define(self._pop())
            kids = node.children
            while frame.next < len(kids):
                y = kids[frame.next]
                frame.next += 1
                if g[y].sts is UNEXP and y not in self._on_stack:
                    return self._push(y)
            return Define(self._pop())

    # -- rule application -----------------------------------------------------

    def apply_rule(self, rule):
        g = self.g
        x = rule.node
        kind = type(rule)
        if kind is Expand:
            self.counters.rule1 += 1
            self.engine.expand(x)
            if isinstance(g[x].sts, Closed):
                self.mark_dirty_on_change(x)
        elif kind is Define:
            self.counters.rule2 += 1
            sts = self.engine.det_status(x)
            self._add_dependencies(x)
            g.set_status(x, sts, stamp=True)
            self.mark_dirty_on_change(x)
        elif kind is Update:
            self.counters.rule3 += 1
            g.set_status(x, rule.status)
            self.mark_dirty_on_change(x)
        elif kind is CloseUnfulfilled:
            if not isinstance(g[x].sts, Open) or not unfulfilled(g[x]):
                raise GraphError(f"Rule 4 is not applicable to node {x}")
            self.counters.rule4 += 1
            g.set_status(x, Closed(g[x].sts.alt))
            self.mark_dirty_on_change(x)
        else:
            raise TypeError(f"not a rule: {rule!r}")
        sts = g[x].sts
        if isinstance(sts, Open) and unfulfilled(g[x]):
            self._rule4.add(x)
        if self.record:
            self.trace.append(TraceEntry(len(self.trace) + 1, RULE_NUMBER[kind], x, sts, g[x].idx))
            if kind is not Expand or isinstance(sts, Closed):
                self.history.setdefault(x, []).append(sts)
        self._check_touched()

    def _add_dependencies(self, x):
        for y in self.engine.consulted:
            self.consumers.setdefault(y, set()).add(x)

    def mark_dirty_on_change(self, x):
        """Queue everything whose status may depend on ``x``."""
        self._clean = False
        if self.scheduler != "queue":
            return
        node = self.g[x]
        for p in list(node.parents) + sorted(self.consumers.get(x, ())):
            if p not in self._dirty_set:
                self._dirty_set.add(p)
                self._dirty.append(p)

    # -- debug invariants -----------------------------------------------------

    def _check_touched(self):
        g = self.g
        touched, g.touched = g.touched, []
        if not self.debug:
            return
        for x in dict.fromkeys(touched):
            self._check_node(x)

    def _fail(self, msg):
        raise InvariantViolation(msg)

    def _check_node(self, x):
        g = self.g
        node = g[x]
        if not node.gamma <= self._closure:
            self._fail(f"node {x}: formulas outside the closure")
        if node.is_state and g.find_state(node.gamma) != x:
            self._fail(f"node {x}: duplicate state")
        if not node.is_state:
            parent = g[node.pst]
            if not parent.is_state:
                self._fail(f"node {x}: parent state {node.pst} is not a state")
            for p in node.parents:
                q = g[p]
                if not q.is_state and (q.pst, q.ppr) != (node.pst, node.ppr):
                    self._fail(f"node {x}: pst/ppr not inherited from {p}")
                if not q.is_state and not (q.gamma < node.gamma or (
                        q.gamma == node.gamma and q.ann.items() < node.ann.items())):
                    self._fail(f"node {x}: no progress over parent {p}")
        elif node.ann:
            self._fail(f"state {x} carries an annotation")
        if x in self._closed_seen and node.sts is not self._closed_seen[x]:
            self._fail(f"node {x}: closed status changed")
        sts = node.sts
        if isinstance(sts, (Open, Closed)):
            if node.idx is None:
                self._fail(f"node {x}: defined without a time stamp")
        elif node.idx is not None:
            self._fail(f"node {x}: undefined with a time stamp")
        if node.idx is not None and x not in self._stamped:
            if node.idx != self._last_idx + 1:
                self._fail(f"node {x}: time stamp {node.idx} after {self._last_idx}")
            self._last_idx = node.idx
            self._stamped.add(x)
        if isinstance(sts, Closed):
            self._closed_seen[x] = sts
        if isinstance(sts, (Open, Closed)):
            if frozenset() in sts.alt:
                self._fail(f"node {x}: empty alternative set")
            if x == self.root and self.formula is not None and sts.alt:
                self._fail("root has alternative sets")
        if isinstance(sts, Open):
            for phi, entry in sts.prs.items():
                if phi not in node.gamma:
                    self._fail(f"node {x}: prs key outside gamma")
                if entry is FULFILLED:
                    continue
                for y, psi in entry:
                    if y == x:
                        self._fail(f"node {x}: self pair survived filtering")
                    if not g.defined_before(x, y):
                        self._fail(f"node {x}: rescuer {y} not defined after it")
                    if psi not in g[y].gamma:
                        self._fail(f"node {x}: rescuer formula not in node {y}")
                    if g[y].is_state and not is_lp(psi):
                        self._fail(f"node {x}: state rescuer with a non-lp formula")

    # -- summaries ------------------------------------------------------------

    def kind_counts(self) -> dict:
        counts = {"state": 0, "alpha": 0, "beta": 0, "special": 0}
        for node in self.g:
            if node.sts is not UNEXP:
                counts[node_kind(node)] += 1
            elif node.is_state:
                counts["state"] += 1
        return counts


def is_sat(formula, **options) -> bool:
    return Solver(formula, **options).is_sat()


__all__ = [
    "Solver", "is_sat", "Expand", "Define", "Update", "CloseUnfulfilled",
    "SAT", "UNSAT", "RESOURCE", "InvariantViolation", "ResourceExceeded",
    "TraceEntry", "all_fulfilled",
]
