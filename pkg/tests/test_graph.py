import pytest

from cpdl.graph import (
    CS, Closed, FULFILLED, GraphError, Open, TableauGraph, UNDEF, UNEXP, node_kind,
    saturation_rule,
)
from cpdl.engine import fulfilled
from cpdl.parser import parse_formula
from cpdl.syntax import And, Diamond, Lit, Or, Star, Var

p, q = Var("p"), Var("q")
a = Lit("a")


def test_ids_start_at_one():
    g = TableauGraph()
    x = g.create_node({p})
    assert x == 1 and len(g) == 1 and list(g.ids()) == [1]
    assert g[1].is_state and g[1].sts is UNEXP and g[1].idx is None


def test_one_state_per_set():
    g = TableauGraph()
    x = g.create_node({p, q})
    assert g.find_state({q, p}) == x
    with pytest.raises(GraphError):
        g.create_node({q, p})
    # non-states may repeat a set
    g.create_node({p, q}, pst=x, ppr=a)
    g.create_node({p, q}, pst=x, ppr=a)


def test_pst_and_ppr_come_together():
    g = TableauGraph()
    x = g.create_node({p})
    with pytest.raises(GraphError):
        g.create_node({q}, pst=x)


def test_states_have_no_annotation():
    g = TableauGraph()
    ev = Diamond(Star(a), p)
    with pytest.raises(GraphError):
        g.create_node({ev, p}, ann={ev: p})


def test_annotation_must_be_a_reduction_in_gamma():
    g = TableauGraph()
    x = g.create_node({p})
    ev = Diamond(Star(a), p)
    g.create_node({ev, p}, ann={ev: p}, pst=x, ppr=a)
    with pytest.raises(GraphError):
        g.create_node({ev}, ann={ev: p}, pst=x, ppr=a)
    with pytest.raises(GraphError):
        g.create_node({ev, q}, ann={ev: q}, pst=x, ppr=a)


def test_idx_iff_defined():
    g = TableauGraph()
    with pytest.raises(GraphError):
        g.create_node({p}, sts=Open({}, frozenset()))
    with pytest.raises(GraphError):
        g.create_node({p}, idx=3)


def test_time_stamps_are_consecutive():
    g = TableauGraph()
    xs = [g.create_node({Var(f"v{i}")}) for i in range(3)]
    for x in reversed(xs):
        g.set_status(x, Open({}, frozenset()), stamp=True)
    assert [g[x].idx for x in xs] == [3, 2, 1]
    assert g.defined_before(xs[2], xs[0])
    assert not g.defined_before(xs[0], xs[2])
    with pytest.raises(GraphError):
        g.set_status(xs[0], Open({}, frozenset()), stamp=True)


def test_undefined_node_is_never_defined_before():
    g = TableauGraph()
    x, y = g.create_node({p}), g.create_node({q})
    g.set_status(x, Open({}, frozenset()), stamp=True)
    assert g.defined_before(x, y)
    assert not g.defined_before(y, x)


def test_closed_is_final():
    g = TableauGraph()
    x = g.create_node({p})
    g.set_status(x, Closed(), stamp=True)
    with pytest.raises(GraphError):
        g.set_status(x, Open({}, frozenset()))


def test_edge_labels_are_unique():
    g = TableauGraph()
    x = g.create_node({Diamond(a, p)})
    y = g.create_node({p}, pst=x, ppr=a)
    g.add_edge(x, y, Diamond(a, p))
    assert g.get_child(x, Diamond(a, p)) == y and g[y].parents == [x]
    with pytest.raises(GraphError):
        g.add_edge(x, y, Diamond(a, p))


def test_absent_prs_entry_reads_as_fulfilled():
    assert fulfilled({}, p)
    assert fulfilled({p: FULFILLED}, p)
    assert not fulfilled({p: frozenset()}, p)


def test_saturation_rule_prefers_alpha():
    f = parse_formula("(p | q) & (q & p)")
    gamma = {f, Or(p, q), And(q, p)}
    order = tuple(sorted(gamma))
    assert saturation_rule(gamma, order, {}) == ("alpha", And(q, p))
    gamma |= {p, q}
    assert saturation_rule(gamma, tuple(sorted(gamma)), {}) is None


def test_unannotated_eventuality_still_needs_a_rule():
    ev = Diamond(Star(a), p)
    gamma = {ev, p}
    order = tuple(sorted(gamma))
    assert saturation_rule(gamma, order, {}) == ("beta", ev)
    assert saturation_rule(gamma, order, {ev: p}) is None


def test_node_kinds():
    g = TableauGraph()
    x = g.create_node({Diamond(a, p)})
    y = g.create_node({Or(p, q)}, pst=x, ppr=a)
    z = g.create_node({Or(p, q), p}, pst=x, ppr=a)
    assert [node_kind(g[n]) for n in (x, y, z)] == ["state", "beta", "special"]
    assert CS is not None and UNDEF is not UNEXP
