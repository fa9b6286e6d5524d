import pytest

from cpdl.parser import parse_formula
from cpdl.scheduler import Solver
from cpdl.syntax import Diamond, Lit

TOY = "<a><a*>[a^]p"


def toy_seed():
    """The state {phi, <a>phi} the toy run starts from, phi = <a*>[a^]p."""
    phi = parse_formula("<a*>[a^]p")
    return [phi, Diamond(Lit("a"), phi)]


def run_toy_trace(scheduler="queue"):
    s = Solver(seed_state=toy_seed(), strategy="trace", scheduler=scheduler,
               record=True, debug=True)
    s.run()
    return s


@pytest.fixture(scope="session")
def toy_trace():
    return run_toy_trace()


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
