"""Solve a formula, extract and check a model, and compare with brute force.

    python3 demos/certify_and_compare.py "<a*>(p & <b^>q) & [a*]~q"
"""

import sys

from cpdl.certify import check_hintikka, dump_model, model_check
from cpdl.oracle import bounded_sat
from cpdl.parser import parse_formula, render
from cpdl.report import solve

text = sys.argv[1] if len(sys.argv) > 1 else "<a><a*>[a^]p"
phi = parse_formula(text)
print("formula:", render(phi))

report = solve(phi, certify_model=True)
print("verdict:", report.verdict, report.stats)
if report.model is not None:
    m = report.model
    print("hintikka:", check_hintikka(m, phi))
    print("holds at w0:", model_check(m, m.w0, phi))
    print(dump_model(m), end="")

small = bounded_sat(phi)
if small is None:
    print("brute force: no model within the bound")
else:
    print("brute force, smallest model:")
    print(dump_model(small), end="")
