"""Solve reports, statistics JSON and DOT export."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

from .certify import check_hintikka, extract_model, model_check
from .graph import CS, Closed, FULFILLED, Open, UNDEF, UNEXP, node_kind
from .parser import render
from .scheduler import Solver

STATS_FIELDS = (
    "verdict", "nodes_total", "states", "alpha_nodes", "beta_nodes", "special_nodes",
    "closed", "open", "rule1", "rule2", "rule3", "rule4", "prs_cache_hits", "time_ms",
)


@dataclass
class Certification:
    hintikka: object
    model_check: bool

    @property
    def ok(self) -> bool:
        return bool(self.hintikka) and self.model_check


@dataclass
class SolveReport:
    verdict: str
    stats: dict
    model: Optional[object] = None
    certification: Optional[Certification] = None
    solver: Optional[Solver] = field(default=None, repr=False)


def collect_stats(solver) -> dict:
    g = solver.g
    kinds = solver.kind_counts()
    c = solver.counters
    return {
        "verdict": solver.verdict,
        "nodes_total": len(g),
        "states": kinds["state"],
        "alpha_nodes": kinds["alpha"],
        "beta_nodes": kinds["beta"],
        "special_nodes": kinds["special"],
        "closed": sum(1 for n in g if isinstance(n.sts, Closed)),
        "open": sum(1 for n in g if isinstance(n.sts, Open)),
        "rule1": c.rule1,
        "rule2": c.rule2,
        "rule3": c.rule3,
        "rule4": c.rule4,
        "prs_cache_hits": solver.engine.cache_hits,
        "time_ms": round(solver.elapsed_ms, 3),
    }


def certify(solver) -> tuple:
    """Extract a model from a SAT run and check it both ways."""
    model = extract_model(solver)
    hint = check_hintikka(model, solver.formula)
    ok = model.w0 is not None and model_check(model, model.w0, solver.formula)
    return model, Certification(hint, ok)


def solve(formula, *, certify_model=False, **options) -> SolveReport:
    """Run the solver; with ``certify_model`` a SAT verdict also gets a checked model."""
    solver = Solver(formula, **options)
    verdict = solver.run()
    model = cert = None
    if certify_model and verdict == "SAT":
        model, cert = certify(solver)
    return SolveReport(verdict, collect_stats(solver), model, cert, solver)


def export_stats(report: SolveReport) -> str:
    return json.dumps({k: report.stats[k] for k in STATS_FIELDS}, indent=2)


# -- text rendering of statuses -----------------------------------------------

def _set(items) -> str:
    return "{" + ", ".join(items) + "}"


def render_alt(alt) -> str:
    parts = sorted(_set(sorted(render(f) for f in s)) for s in alt)
    return _set(parts)


def render_prs(prs) -> str:
    out = []
    for phi in sorted(prs):
        entry = prs[phi]
        if entry is FULFILLED:
            val = "fulfilled"
        else:
            val = _set(f"({y}, {render(psi)})" for y, psi in sorted(entry))
        out.append(f"{render(phi)}: {val}")
    return _set(out)


def render_status(sts) -> str:
    if sts is UNEXP:
        return "unexp"
    if sts is UNDEF:
        return "undef"
    if isinstance(sts, Closed):
        return f"closed alt={render_alt(sts.alt)}"
    return f"open prs={render_prs(sts.prs)} alt={render_alt(sts.alt)}"


def render_trace_entry(e) -> str:
    idx = "-" if e.idx is None else e.idx
    return f"{e.step:5d} rule{e.rule} node={e.node} idx={idx} {render_status(e.status)}"


# -- DOT ------------------------------------------------------------------------

_COLORS = {"closed": "tomato", "open": "palegreen", "undef": "lightgrey", "unexp": "white"}


def _dot_escape(text: str) -> str:
    return text.replace("\\", "\\\\").replace('"', '\\"')


def _edge_label(label) -> str:
    if label is None:
        return ""
    if label is CS:
        return "cs"
    if isinstance(label, frozenset):
        return _set(sorted(render(f) for f in label))
    return render(label)


def export_dot(graph) -> str:
    lines = ["digraph tableau {", "  node [shape=box, style=filled, fontname=monospace];"]
    for node in graph:
        kind = node_kind(node)
        status = render_status(node.sts)
        rows = [
            f"({node.id}) {kind}",
            _set(sorted(render(f) for f in node.gamma)),
        ]
        if node.ann:
            rows.append(", ".join(f"{render(k)} ⤳ {render(v)}" for k, v in sorted(node.ann.items())))
        if node.pst is not None:
            rows.append(f"({node.pst}, {render(node.ppr)})")
        rows.append(f"idx={'-' if node.idx is None else node.idx}")
        rows.append(status)
        color = _COLORS[status.split(" ", 1)[0]]
        label = "\\n".join(_dot_escape(r) for r in rows)
        lines.append(f'  n{node.id} [label="{label}", fillcolor={color}];')
    for node in graph:
        for y in node.children:
            label = next((lab for lab, c in node.labels.items() if c == y), None)
            text = _edge_label(label)
            attr = f' [label="{_dot_escape(text)}"]' if text else ""
            lines.append(f"  n{node.id} -> n{y}{attr};")
    lines.append("}")
    return "\n".join(lines) + "\n"


__all__ = [
    "SolveReport", "Certification", "STATS_FIELDS", "solve", "certify", "collect_stats",
    "export_stats", "export_dot", "render_status", "render_trace_entry",
]
