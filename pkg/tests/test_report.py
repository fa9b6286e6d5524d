import json
import re

from cpdl.parser import parse_formula, render
from cpdl.report import STATS_FIELDS, export_dot, export_stats, render_status, solve
from cpdl.graph import Closed, FULFILLED, Open, UNDEF, UNEXP
from cpdl.syntax import Diamond, Lit, Star, Var

from conftest import TOY, run_toy_trace


def test_stats_fields_are_exact():
    report = solve(parse_formula(TOY))
    data = json.loads(export_stats(report))
    assert list(data) == list(STATS_FIELDS)
    assert data["verdict"] == "SAT"
    assert data["rule1"] >= 11
    assert data["nodes_total"] == data["open"] + data["closed"] + sum(
        1 for n in report.solver.g if n.sts in (UNEXP, UNDEF))


def test_trivial_unsat_stats():
    data = json.loads(export_stats(solve(parse_formula("p & ~p"))))
    assert data["verdict"] == "UNSAT"
    assert data["nodes_total"] <= 3
    assert data["rule4"] == 0


def test_model_only_with_certification():
    f = parse_formula(TOY)
    plain = solve(f)
    assert plain.model is None and plain.certification is None
    checked = solve(f, certify_model=True)
    assert checked.model is not None and checked.certification.ok
    unsat = solve(parse_formula("p & ~p"), certify_model=True)
    assert unsat.model is None and unsat.certification is None


def test_status_rendering():
    ev = Diamond(Star(Lit("a")), Var("p"))
    assert render_status(UNEXP) == "unexp"
    assert render_status(Closed(frozenset({frozenset({Var("p")})}))) == "closed alt={{p}}"
    sts = Open({ev: frozenset({(6, ev), (1, ev)})}, frozenset())
    assert render_status(sts) == "open prs={<a*>p: {(1, <a*>p), (6, <a*>p)}} alt={}"
    assert render_status(Open({ev: FULFILLED}, frozenset())) == "open prs={<a*>p: fulfilled} alt={}"


def test_dot_for_the_toy_run():
    s = run_toy_trace()
    dot = export_dot(s.g)
    nodes = re.findall(r'^  n(\d+) \[label="([^"]*)"', dot, re.M)
    assert [int(n) for n, _ in nodes] == list(range(1, 12))
    edges = dict(((int(u), int(v)), lab) for u, v, lab in
                 re.findall(r'^  n(\d+) -> n(\d+)(?: \[label="([^"]*)"\])?;', dot, re.M))
    assert edges[(1, 2)] == "<a><a*>[a^]p"
    assert edges[(4, 1)] == "cs" and edges[(3, 5)] == "cs"
    assert edges[(4, 6)] == "{p}"
    assert edges[(2, 3)] == "" and edges[(2, 4)] == ""
    assert "idx=5" in dict(nodes)["1"] and "closed" in dict(nodes)["3"]
    assert "⤳" in dict(nodes)["3"]


def test_dot_labels_round_trip_through_render():
    s = run_toy_trace()
    dot = export_dot(s.g)
    for lab in re.findall(r'-> n\d+ \[label="([^"{]+)"\]', dot):
        if lab != "cs":
            assert render(parse_formula(lab)) == lab


def test_dot_for_a_tiny_graph():
    report = solve(parse_formula("p & ~p"))
    dot = export_dot(report.solver.g)
    assert dot.count("label=") <= 6 and dot.startswith("digraph")
    assert "tomato" in dot
