"""The and-or graph built by the tableau: nodes, statuses, labelled edges.

Node attributes follow the algorithm's six-tuple: formula set ``gamma``,
annotation ``ann``, parent state ``pst``, parent program ``ppr``, time stamp
``idx`` and status ``sts``.  Only ``idx`` and ``sts`` change after creation.

Edge labels are plain Python values: an ``<l>phi`` formula on state edges,
a ``frozenset`` of formulas on edges to alternative nodes, :data:`CS` on the
edge from a special node to its state, and ``None`` otherwise.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .syntax import Alpha, Beta, classify, diamond_successors, is_eventuality, is_lp


class _Marker:
    __slots__ = ("name",)

    def __init__(self, name):
        self.name = name

    def __repr__(self):
        return self.name

    def __reduce__(self):
        return self.name


CS = _Marker("CS")
#: A prs entry meaning "this eventuality can be fulfilled already".
FULFILLED = _Marker("FULFILLED")


class Unexpanded:
    __slots__ = ()

    def __repr__(self):
        return "unexp"


class Undefined:
    __slots__ = ()

    def __repr__(self):
        return "undef"


UNEXP = Unexpanded()
UNDEF = Undefined()


@dataclass(frozen=True)
class Closed:
    alt: frozenset = frozenset()


@dataclass(frozen=True)
class Open:
    """``prs`` maps eventualities to FULFILLED or a frozenset of (node, formula)."""

    prs: dict = field(default_factory=dict)
    alt: frozenset = frozenset()


class GraphError(RuntimeError):
    pass


class Node:
    __slots__ = ("id", "gamma", "order", "ann", "pst", "ppr", "idx", "sts",
                 "children", "labels", "parents", "kind")

    def __init__(self, id, gamma, ann, pst, ppr, idx, sts):
        self.id = id
        self.gamma = gamma
        self.order = tuple(sorted(gamma))
        self.ann = ann
        self.pst = pst
        self.ppr = ppr
        self.idx = idx
        self.sts = sts
        self.children = []          # in insertion order
        self.labels = {}            # label -> child, labelled edges only
        self.parents = []
        self.kind = None

    @property
    def is_state(self):
        return self.pst is None

    @property
    def defined(self):
        return isinstance(self.sts, (Open, Closed))

    @property
    def alt(self):
        s = self.sts
        return s.alt if isinstance(s, (Open, Closed)) else frozenset()

    def eventualities(self):
        return [f for f in self.order if is_eventuality(f)]

    def __repr__(self):
        return f"<Node {self.id} {self.kind or '?'} {self.sts!r}>"


def saturation_rule(gamma, order, ann):
    """Which expansion applies to a non-state: ('alpha'|'beta', formula) or None."""
    beta = None
    for f in order:
        kind = classify(f)
        if isinstance(kind, Alpha):
            if not all(d in gamma for d in kind.decomps) or (
                    f not in ann and is_eventuality(f)):
                return "alpha", f
        elif beta is None and isinstance(kind, Beta):
            if (kind.b1 not in gamma and kind.b2 not in gamma) or (
                    f not in ann and is_eventuality(f)):
                beta = f
    if beta is not None:
        return "beta", beta
    return None


def node_kind(node) -> str:
    if node.kind is None:
        if node.is_state:
            node.kind = "state"
        else:
            rule = saturation_rule(node.gamma, node.order, node.ann)
            node.kind = "special" if rule is None else rule[0]
    return node.kind


class TableauGraph:
    """Append-only node store with state lookup and the global time stamp."""

    def __init__(self, check=True):
        self.nodes = [None]         # ids start at 1
        self._states = {}
        self._next_idx = 1
        self.check = check
        self.touched = []           # node ids created or re-statused since last drain

    def __len__(self):
        return len(self.nodes) - 1

    def __getitem__(self, x) -> Node:
        return self.nodes[x]

    def ids(self):
        return range(1, len(self.nodes))

    def __iter__(self):
        return iter(self.nodes[1:])

    def create_node(self, gamma, ann=None, pst=None, ppr=None, idx=None, sts=UNEXP):
        gamma = frozenset(gamma)
        ann = dict(ann) if ann else {}
        if (pst is None) != (ppr is None):
            raise GraphError("parent state and parent program must be both set or both unset")
        if pst is None and ann:
            raise GraphError("states carry no annotation")
        if self.check:
            for ev, red in ann.items():
                if ev not in gamma or red not in gamma or not is_eventuality(ev):
                    raise GraphError(f"bad annotation {ev!r} -> {red!r}")
                if red not in diamond_successors(ev):
                    raise GraphError(f"annotation {ev!r} -> {red!r} is not a reduction")
        if (idx is None) == isinstance(sts, (Open, Closed)):
            raise GraphError("idx must be defined exactly for defined nodes")
        x = len(self.nodes)
        node = Node(x, gamma, ann, pst, ppr, idx, sts)
        if pst is None:
            if gamma in self._states:
                raise GraphError(f"a state for this set exists already: {self._states[gamma]}")
            self._states[gamma] = x
        self.nodes.append(node)
        self.touched.append(x)
        return x

    def add_edge(self, x, y, label=None):
        src = self.nodes[x]
        if label is not None:
            if label in src.labels:
                raise GraphError(f"node {x} already has an edge labelled {label!r}")
            src.labels[label] = y
        src.children.append(y)
        self.nodes[y].parents.append(x)

    def get_child(self, x, label):
        return self.nodes[x].labels.get(label)

    def find_state(self, gamma):
        return self._states.get(frozenset(gamma))

    def set_status(self, x, sts, stamp=False):
        node = self.nodes[x]
        if isinstance(node.sts, Closed):
            raise GraphError(f"node {x} is closed; its status cannot change")
        if stamp:
            if node.idx is not None:
                raise GraphError(f"node {x} already has a time stamp")
            node.idx = self._next_idx
            self._next_idx += 1
        node.sts = sts
        self.touched.append(x)

    def defined_before(self, y, x) -> bool:
        iy = self.nodes[y].idx
        if iy is None:
            return False
        ix = self.nodes[x].idx
        return ix is None or iy < ix

    @property
    def states(self):
        return dict(self._states)

    def is_lp_edge(self, x, label):
        return self.nodes[x].is_state and is_lp(label)
