"""Command line driver.

Modes::

    cpdl solve   --formula F     decide satisfiability
    cpdl certify --formula F     decide, and check an extracted model on SAT
    cpdl oracle  --formula F     search small models by brute force
    cpdl bench                   run the whole corpus

``F`` is a formula or the path of a formula file.  Without ``--formula``,
``--seed N`` picks the N-th seeded random corpus formula.

Exit codes: 10 SAT, 20 UNSAT, 30 no verdict within the budget, 1 usage or
parse error, 3 certification failure, 0 for a finished ``bench``.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor

from .certify import dump_model
from .corpus import full_corpus, random_corpus, random_size
from .oracle import BudgetError, bounded_sat, default_budget, random_formula
from .parser import ParseError, read_formula_file
from .report import export_dot, export_stats, render_trace_entry, solve
from .scheduler import RESOURCE, SAT, UNSAT

EXIT_CODES = {SAT: 10, UNSAT: 20, RESOURCE: 30}
EXIT_USAGE = 1
EXIT_CERT_FAILED = 3


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="cpdl", description="Satisfiability for PDL with converse.")
    p.add_argument("mode", choices=["solve", "certify", "oracle", "bench"])
    p.add_argument("--formula", help="formula text or path to a formula file")
    p.add_argument("--scheduler", choices=["queue", "naive"], default="queue")
    p.add_argument("--seed", type=int, help="random corpus formula (or bench base seed)")
    p.add_argument("--max-nodes", type=int)
    p.add_argument("--timeout", type=int, metavar="MS")
    p.add_argument("--dot", metavar="PATH")
    p.add_argument("--model-out", metavar="PATH")
    p.add_argument("--stats-json", metavar="PATH")
    p.add_argument("--trace", action="store_true", help="pinned strategy with a per-rule log")
    p.add_argument("--worlds", type=int, default=3, help="oracle world bound")
    p.add_argument("--count", type=int, default=500, help="bench: number of random formulas")
    p.add_argument("--jobs", type=int, default=1, help="bench: parallel solver processes")
    return p


def load_formula(args):
    if args.formula is not None:
        text = args.formula
        if os.path.isfile(text):
            with open(text, encoding="utf-8") as fh:
                text = fh.read()
        return read_formula_file(text)
    if args.seed is not None:
        return random_formula(args.seed, random_size(args.seed))
    raise UsageError(f"{args.mode} needs --formula or --seed")


def _write(path, text):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text)


def _solve_mode(args, out) -> int:
    phi = load_formula(args)
    report = solve(
        phi,
        certify_model=args.mode == "certify",
        scheduler=args.scheduler,
        strategy="trace" if args.trace else "default",
        record=args.trace,
        max_nodes=args.max_nodes,
        timeout_ms=args.timeout,
    )
    if args.trace:
        for entry in report.solver.trace:
            print(render_trace_entry(entry), file=out)
    if args.dot:
        _write(args.dot, export_dot(report.solver.g))
    if args.stats_json:
        _write(args.stats_json, export_stats(report) + "\n")
    print(report.verdict, file=out)
    if report.certification is not None:
        cert = report.certification
        if args.model_out:
            _write(args.model_out, dump_model(report.model))
        if not cert.ok:
            h = cert.hintikka
            why = "model check failed" if h else f"{h.condition} at world {h.world}: {h.detail}"
            print(f"certification failed: {why}", file=sys.stderr)
            return EXIT_CERT_FAILED
        print(f"certified: {len(report.model.worlds) - len(report.model.hidden)} worlds", file=out)
    return EXIT_CODES[report.verdict]


def _oracle_mode(args, out) -> int:
    phi = load_formula(args)
    budget = default_budget(phi, max_worlds=args.worlds)
    model = bounded_sat(phi, budget)
    if model is None:
        print(f"no model with at most {budget.max_worlds} worlds", file=out)
        return EXIT_CODES[RESOURCE]
    text = dump_model(model)
    if args.model_out:
        _write(args.model_out, text)
    print(SAT, file=out)
    out.write(text)
    return EXIT_CODES[SAT]


def _bench_one(item, scheduler, max_nodes, timeout_ms):
    name, phi = item
    report = solve(phi, scheduler=scheduler, max_nodes=max_nodes, timeout_ms=timeout_ms)
    return name, report.stats


def _bench_mode(args, out) -> int:
    if args.formula is not None:
        items = [("formula", load_formula(args))]
    elif args.seed is not None:
        items = random_corpus(args.count, args.seed)
    else:
        items = full_corpus(args.count)
    start = time.perf_counter()
    jobs = [(item, args.scheduler, args.max_nodes, args.timeout) for item in items]
    if args.jobs > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            results = list(pool.map(_bench_one, *zip(*jobs), chunksize=8))
    else:
        results = [_bench_one(*job) for job in jobs]
    tally = {SAT: 0, UNSAT: 0, RESOURCE: 0}
    for name, stats in results:
        tally[stats["verdict"]] += 1
        print(f"{name:24s} {stats['verdict']:8s} nodes={stats['nodes_total']:<6d} "
              f"time_ms={stats['time_ms']:.1f}", file=out)
    wall = (time.perf_counter() - start) * 1000.0
    print(f"total={len(results)} sat={tally[SAT]} unsat={tally[UNSAT]} "
          f"resource={tally[RESOURCE]} wall_ms={wall:.0f}", file=out)
    if args.stats_json:
        _write(args.stats_json, json.dumps([dict(name=n, **s) for n, s in results], indent=2) + "\n")
    return 0


def run_cli(argv, out=None) -> int:
    out = sys.stdout if out is None else out
    try:
        args = build_parser().parse_args(argv)
        if args.mode == "oracle":
            return _oracle_mode(args, out)
        if args.mode == "bench":
            return _bench_mode(args, out)
        return _solve_mode(args, out)
    except UsageError as e:
        print(f"usage error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetError as e:
        print(f"oracle budget: {e}", file=sys.stderr)
        return EXIT_USAGE


def main():
    sys.exit(run_cli(sys.argv[1:]))


__all__ = ["run_cli", "main", "build_parser", "EXIT_CODES"]
