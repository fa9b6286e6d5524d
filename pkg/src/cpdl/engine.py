"""Node expansion and status determination.

:class:`Engine` owns no scheduling policy; it performs one ``expand`` or one
``det_status`` at a time on a :class:`~cpdl.graph.TableauGraph`.  Every
status computation is one *invocation*: ``det_prs_child`` results are
memoized for its duration and every node whose status was read is recorded
in ``consulted`` so the scheduler can add update edges.
"""

from __future__ import annotations

from .graph import (
    CS, Closed, FULFILLED, GraphError, Open, UNDEF, UNEXP, node_kind,
    saturation_rule,
)
from .syntax import Box, classify, invert_literal, is_eventuality, is_lp, negate


def defer(node, phi):
    """Follow the annotation chain from ``phi``; None on a cycle."""
    seen = set()
    f = phi
    while is_eventuality(f) and f in node.ann:
        if f in seen:
            return None
        seen.add(f)
        f = node.ann[f]
    return f


def contains_contradiction(node) -> bool:
    gamma = node.gamma
    for f in node.order:
        if negate(f) in gamma:
            return True
        if node.ann and is_eventuality(f) and defer(node, f) is None:
            return True
    return False


def reach_set(prs, x, phi) -> set:
    """Eventualities reachable from ``phi`` through pairs located at ``x``."""
    out = set()
    todo = [phi]
    while todo:
        entry = prs.get(todo.pop())
        if entry is None or entry is FULFILLED:
            continue
        for z, psi in entry:
            if z == x and psi not in out:
                out.add(psi)
                todo.append(psi)
    return out


def filter_prs(x, prs) -> dict:
    out = {}
    for phi, entry in prs.items():
        if entry is FULFILLED:
            out[phi] = FULFILLED
            continue
        delta = {phi} | reach_set(prs, x, phi)
        if any(prs.get(chi, FULFILLED) is FULFILLED for chi in delta):
            out[phi] = FULFILLED
            continue
        out[phi] = frozenset(p for chi in delta for p in prs[chi] if p[0] != x)
    return out


def _merge(results):
    acc = set()
    for r in results:
        if r is FULFILLED:
            return FULFILLED
        acc |= r
    return frozenset(acc)


def _pair_key(pair):
    return pair[0], pair[1].sort_key


class Engine:
    def __init__(self, graph, use_cache=True):
        self.g = graph
        self.use_cache = use_cache
        self.invocation = 0
        self.cache_hits = 0
        self._memo = {}
        self.consulted = set()

    # -- expansion ------------------------------------------------------------

    def expand(self, x):
        g = self.g
        node = g[x]
        if node.sts is not UNEXP:
            raise GraphError(f"node {x} is already expanded")
        if contains_contradiction(node):
            g.set_status(x, Closed(), stamp=True)
            node_kind(node)
            return
        g.set_status(x, UNDEF)
        kind = node_kind(node)
        if kind == "state":
            for f in node.order:
                if not is_lp(f):
                    continue
                lit = f.prog
                gamma = {f.body}
                gamma.update(h.body for h in node.order
                             if type(h) is Box and h.prog == lit)
                y = g.create_node(gamma, pst=x, ppr=lit)
                g.add_edge(x, y, f)
        elif kind == "alpha":
            _, a = saturation_rule(node.gamma, node.order, node.ann)
            decomps = classify(a).decomps
            ann = node.ann
            if is_eventuality(a):
                ann = {**ann, a: decomps[0]}
            y = g.create_node(node.gamma | set(decomps), ann, node.pst, node.ppr)
            g.add_edge(x, y)
        elif kind == "beta":
            _, b = saturation_rule(node.gamma, node.order, node.ann)
            for part in classify(b):
                ann = node.ann
                if is_eventuality(b):
                    ann = {**ann, b: part}
                y = g.create_node(node.gamma | {part}, ann, node.pst, node.ppr)
                g.add_edge(x, y)
        else:
            y = g.find_state(node.gamma)
            if y is None:
                y = g.create_node(node.gamma)
            g.add_edge(x, y, CS)

    # -- status ---------------------------------------------------------------

    def det_status(self, x):
        """Compute the current status of ``x`` (one invocation)."""
        self.invocation += 1
        self._memo = {}
        self.consulted = set()
        node = self.g[x]
        kind = node_kind(node)
        if kind in ("alpha", "beta"):
            return self.det_sts_beta(x)
        if kind == "state":
            return self.det_sts_state(x)
        gamma_alt = self.incompatible_part(x)
        if gamma_alt:
            return Closed(frozenset({gamma_alt}))
        return self.det_sts_spl(x)

    def incompatible_part(self, x) -> frozenset:
        node = self.g[x]
        back = invert_literal(node.ppr)
        parent = self.g[node.pst].gamma
        return frozenset(f.body for f in node.order
                         if type(f) is Box and f.prog == back and f.body not in parent)

    def _read(self, y):
        self.consulted.add(y)
        return self.g[y]

    def det_sts_beta(self, x):
        node = self.g[x]
        kids = [self._read(y) for y in node.children]
        alt = frozenset().union(*(k.alt for k in kids))
        if all(isinstance(k.sts, Closed) for k in kids):
            return Closed(alt)
        prs = {}
        for phi in node.eventualities():
            prs[phi] = _merge(self.det_prs_child(x, k.id, phi) for k in kids)
        return Open(filter_prs(x, prs), alt)

    def det_sts_state(self, x):
        g = self.g
        node = g[x]
        succ = [(f, g.get_child(x, f)) for f in node.order if is_lp(f)]
        for _, y in succ:
            if isinstance(self._read(y).sts, Closed):
                return Closed(g[y].sts.alt)
        alt = frozenset().union(*(g[y].alt for _, y in succ))
        prs = {}
        for f, y in succ:
            if is_eventuality(f.body):
                prs[f] = self.det_prs_child(x, y, f.body)
        return Open(filter_prs(x, prs), alt)

    def det_sts_spl(self, x):
        g = self.g
        node = g[x]
        y0 = g.get_child(x, CS)
        for gamma_i in sorted(self._read(y0).alt, key=lambda s: sorted(f.sort_key for f in s)):
            if g.get_child(x, gamma_i) is None:
                y = g.create_node(node.gamma | gamma_i, node.ann, node.pst, node.ppr)
                g.add_edge(x, y, gamma_i)
        others = [y for y in node.children if y != y0]
        kids = [y0] + others
        for y in others:
            self._read(y)
        alt = frozenset().union(*(g[y].alt for y in others))
        if all(isinstance(g[y].sts, Closed) for y in kids):
            return Closed(alt)
        prs = {}
        for phi in node.eventualities():
            target = defer(node, phi)
            if target is None:
                raise GraphError(f"special node {x} has an annotation cycle")
            if is_eventuality(target):
                prs[phi] = _merge(self.det_prs_child(x, y, target) for y in kids)
            else:
                prs[phi] = FULFILLED
        return Open(filter_prs(x, prs), alt)

    def det_prs_child(self, x, y, phi):
        """Rescuers of an eventuality of ``x`` reached through ``(y, phi)``."""
        done = self._memo
        root = (y, phi)
        stack = []
        key = root
        while True:
            res = self._leaf(x, key, done)
            if res is not None:
                if not stack:
                    return res
                frame = stack[-1]
                if res is FULFILLED:
                    frame[2] = FULFILLED
                    frame[1] = len(frame[3])
                else:
                    frame[2] |= res
            else:
                pairs = sorted(self.g[key[0]].sts.prs[key[1]], key=_pair_key)
                stack.append([key, 0, set(), pairs])
            # advance the top frame, finishing frames whose pairs are exhausted
            while stack:
                frame = stack[-1]
                if frame[1] < len(frame[3]) and frame[2] is not FULFILLED:
                    key = frame[3][frame[1]]
                    frame[1] += 1
                    break
                stack.pop()
                out = frame[2] if frame[2] is FULFILLED else frozenset(frame[2])
                if self.use_cache:
                    done[frame[0]] = out
                if not stack:
                    return out
                parent = stack[-1]
                if out is FULFILLED:
                    parent[2] = FULFILLED
                else:
                    parent[2] |= out

    def _leaf(self, x, key, done):
        """Result for ``key`` when it needs no recursion, else None."""
        if key in done:
            self.cache_hits += 1
            return done[key]
        y, phi = key
        node = self._read(y)
        sts = node.sts
        if isinstance(sts, Closed):
            res = frozenset()
        elif not isinstance(sts, Open) or not self.g.defined_before(y, x):
            res = frozenset({key})
        else:
            entry = sts.prs.get(phi, FULFILLED)
            if entry is FULFILLED:
                res = FULFILLED
            elif not entry:
                res = frozenset()
            else:
                return None
        if self.use_cache:
            done[key] = res
        return res


def fulfilled(prs, phi) -> bool:
    return prs.get(phi, FULFILLED) is FULFILLED


def unfulfilled(node):
    """Eventualities with an empty rescuer set (Rule 4 candidates)."""
    sts = node.sts
    if not isinstance(sts, Open):
        return []
    return [phi for phi, v in sts.prs.items() if v is not FULFILLED and not v]


__all__ = [
    "Engine", "contains_contradiction", "defer", "reach_set", "filter_prs",
    "fulfilled", "unfulfilled",
]
