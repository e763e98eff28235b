from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

from famverify.diagram import AngleLinear, Diagram, EquationFamily, Node, PolyPhase
from famverify.fileformat import parse_equation_file
from famverify.phasepoly import LaurentPoly

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"

settings.register_profile("default", deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def load(name: str) -> EquationFamily:
    return parse_equation_file((FIXTURES / name).read_text())


def zx(const=0, **coeffs) -> AngleLinear:
    return AngleLinear.make(Fraction(const) if not isinstance(const, float) else const, coeffs)


def poly(expr_terms: dict) -> PolyPhase:
    """``{(("a", 2),): 1, (): 1}`` style term map to a phase."""
    return PolyPhase(LaurentPoly(expr_terms))


def z_chain(language, kinds_phases, n_in=1, n_out=1):
    """Spiders in a line between ``n_in`` inputs and ``n_out`` outputs."""
    nodes = [Node(f"n{k}", kind, ph) for k, (kind, ph) in enumerate(kinds_phases)]
    ins = [f"i{k}" for k in range(n_in)]
    outs = [f"o{k}" for k in range(n_out)]
    edges = [(s, "n0") for s in ins]
    edges += [(f"n{k}", f"n{k + 1}") for k in range(len(nodes) - 1)]
    edges += [(f"n{len(nodes) - 1}", s) for s in outs]
    return Diagram.build(language, nodes, edges, ins, outs)


@pytest.fixture
def spider_law():
    return load("spider_law.feq")


@pytest.fixture
def join_dimension():
    return load("join_dimension.feq")


# one PASS/FAIL line per acceptance criterion in the terminal summary
_criteria: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or (report.when != "call" and report.passed):
        return
    number, title = mark.args
    ok = report.passed and _criteria.get(number, (title, True))[1]
    _criteria[number] = (title, ok)


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_criteria):
        title, ok = _criteria[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {title}")
