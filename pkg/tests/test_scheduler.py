import pytest

from cpdl.graph import Closed, FULFILLED, Open
from cpdl.parser import parse_formula
from cpdl.scheduler import (
    InvariantViolation, RESOURCE, ResourceExceeded,
    SAT, Solver, UNSAT, is_sat,
)
from cpdl.syntax import Diamond, Lit

from conftest import TOY, run_toy_trace, toy_seed

PHI = parse_formula("<a*>[a^]p")
A_PHI = Diamond(Lit("a"), PHI)


def test_toy_time_stamps(toy_trace):
    g = toy_trace.g
    stamps = {x: g[x].idx for x in g.ids()}
    assert stamps == {5: 1, 3: 2, 4: 3, 2: 4, 1: 5, 9: 6, 8: 7, 7: 8, 6: 9, 10: 10, 11: 11}


def test_toy_statuses(toy_trace):
    h = toy_trace.history
    p = parse_formula("p")
    assert h[3] == [Closed(frozenset({frozenset({p})}))]
    first, second = h[4]
    assert first.prs == {A_PHI: {(1, A_PHI)}, PHI: {(1, A_PHI)}} and first.alt == frozenset()
    assert second.prs == {A_PHI: {(1, A_PHI), (6, A_PHI)}, PHI: {(1, A_PHI), (6, A_PHI)}}
    first, second = h[2]
    assert first.prs == {PHI: {(1, A_PHI)}} and first.alt == {frozenset({p})}
    assert second.prs == {PHI: {(1, A_PHI), (6, A_PHI)}}
    first, second = h[1]
    assert first.prs == {A_PHI: frozenset()} and first.alt == {frozenset({p})}
    assert second.prs == {A_PHI: {(6, A_PHI)}}
    for x in (9, 10, 11):
        (sts,) = h[x]
        assert isinstance(sts, Open) and all(v is FULFILLED for v in sts.prs.values())
    assert h[5] == [Open({}, frozenset())]


def test_toy_rule_order(toy_trace):
    rules = [(e.rule, e.node) for e in toy_trace.trace]
    assert rules[:8] == [(1, 1), (1, 2), (1, 3), (1, 5), (2, 5), (2, 3), (1, 4), (2, 4)]
    updates = [n for r, n in rules if r == 3]
    assert updates == [4, 2, 1]
    assert toy_trace.counters.rule4 == 0


def test_toy_naive_matches_queue(toy_trace):
    naive = run_toy_trace("naive")
    assert [(e.rule, e.node, e.status) for e in naive.trace] == \
        [(e.rule, e.node, e.status) for e in toy_trace.trace]
    assert toy_trace.counters.rule3 <= naive.counters.rule3
    assert toy_trace.counters.rule3_checks < naive.counters.rule3_checks


def test_full_toy_formula_is_sat():
    s = Solver(parse_formula(TOY), debug=True)
    assert s.run() == SAT
    assert s.is_sat()


def test_simple_verdicts():
    assert is_sat(parse_formula("p"))
    assert not is_sat(parse_formula("p & ~p"))
    assert not is_sat(parse_formula("<a*>p & [a*]~p"))
    assert is_sat(parse_formula("<a>p & <a>~p"))
    assert is_sat(parse_formula("p & [a^]<a>~p & <a^>true"))
    assert not is_sat(parse_formula("p & [a^][a]~p & <a^>true"))


def test_rule_four_closes_unfulfilled_eventuality():
    s = Solver(parse_formula("<a*>p & [a*]~p"))
    assert s.run() == UNSAT
    s = Solver(parse_formula("<a*>q & [a*](~q & <a>true)"))
    assert s.run() == UNSAT
    assert s.counters.rule4 > 0


def test_node_budget():
    f = parse_formula("<a>(<a>(<a>p)) & [a*]([a^][a^][a^]p | ~p) & ~p")
    s = Solver(f, max_nodes=10)
    assert s.run() == RESOURCE
    with pytest.raises(ResourceExceeded):
        Solver(f, max_nodes=10).is_sat()


def test_time_budget():
    f = parse_formula("<a>(<a>(<a>p)) & [a*]([a^][a^][a^]p | ~p) & ~p")
    assert Solver(f, timeout_ms=0).run() == RESOURCE


def test_constructor_checks():
    f = parse_formula("p")
    with pytest.raises(ValueError):
        Solver(f, scheduler="lifo")
    with pytest.raises(ValueError):
        Solver(f, strategy="bfs")
    with pytest.raises(ValueError):
        Solver()
    with pytest.raises(ValueError):
        Solver(f, seed_state=toy_seed())


def test_stop_when_closed_only_skips_work():
    f = parse_formula("(p & ~p) & <a*>(q | <b>r)")
    early = Solver(f)
    late = Solver(f, stop_when_closed=False)
    assert early.run() == late.run() == UNSAT
    assert len(early.g) <= len(late.g)


def test_applicable_rule_none_when_finished():
    s = Solver(parse_formula(TOY))
    s.run()
    assert s.applicable_rule() is None


def test_debug_catches_a_self_pair():
    s = Solver(parse_formula(TOY), debug=True)
    s.run()
    x = next(x for x in s.g.ids() if isinstance(s.g[x].sts, Open) and s.g[x].eventualities())
    phi = s.g[x].eventualities()[0]
    s.g[x].sts = Open({phi: frozenset({(x, phi)})}, frozenset())
    s.g.touched.append(x)
    with pytest.raises(InvariantViolation):
        s._check_touched()


def test_debug_catches_a_reopened_node():
    s = Solver(parse_formula("<a>p & <a>(q & ~q)"), debug=True, stop_when_closed=False)
    s.run()
    x = next(x for x in s.g.ids() if isinstance(s.g[x].sts, Closed))
    s.g[x].sts = Open({}, frozenset())
    s.g.touched.append(x)
    with pytest.raises(InvariantViolation):
        s._check_touched()


def test_kind_counts_cover_expanded_nodes():
    s = Solver(parse_formula(TOY))
    s.run()
    counts = s.kind_counts()
    assert sum(counts.values()) == len(s.g)
