"""Replay the toy formula's run step by step and write its graph as DOT.

    python3 demos/toy_trace.py [out.dot]
"""

import sys

from cpdl.parser import parse_formula
from cpdl.report import export_dot, render_trace_entry
from cpdl.scheduler import Solver
from cpdl.syntax import Diamond, Lit

phi = parse_formula("<a*>[a^]p")
solver = Solver(seed_state=[phi, Diamond(Lit("a"), phi)], strategy="trace", record=True)
print("verdict:", solver.run())
for entry in solver.trace:
    print(render_trace_entry(entry))
print(solver.counters)

if len(sys.argv) > 1:
    with open(sys.argv[1], "w") as fh:
        fh.write(export_dot(solver.g))
    print("graph written to", sys.argv[1])
