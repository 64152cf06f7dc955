import pytest
import sympy
from hypothesis import settings

from derived_rees.poly import make_ring

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def ring(*names, weights=None, order="degrevlex"):
    weights = weights or [0] * len(names)
    return make_ring(list(zip(names, weights)), order)


def to_sympy(p):
    syms = sympy.symbols(p.ring.names) if p.ring.nvars else ()
    if p.ring.nvars == 1:
        syms = (syms,) if not isinstance(syms, tuple) else syms
    expr = sympy.Integer(0)
    for e, c in p.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for s, k in zip(syms, e):
            term *= s ** k
        expr += term
    return sympy.expand(expr)


def sympy_groebner(polys, names):
    """Reduced, monic Gröbner basis from sympy as a set of expressions."""
    gens = sympy.symbols(names)
    G = sympy.groebner([to_sympy(p) for p in polys], *gens, order="grevlex")
    return {sympy.expand(g / sympy.LC(g, *gens, order="grevlex")) for g in G.exprs}


CENTRES = {
    "x": (("x",), ["x"]),
    "x,y": (("x", "y"), ["x", "y"]),
    "x^2": (("x",), ["x^2"]),
    "x^2,x*y": (("x", "y"), ["x^2", "x*y"]),
    "x,y,z": (("x", "y", "z"), ["x", "y", "z"]),
}


def centre(key):
    from derived_rees.poly import parse_polynomial

    names, gens = CENTRES[key]
    A = ring(*names)
    return A, [parse_polynomial(g, A) for g in gens]


# -- acceptance summary --------------------------------------------------------------

_CRITERIA: dict = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(label): acceptance criterion the test belongs to")


def pytest_runtest_logreport(report):
    label = getattr(report, "criterion", None)
    if label is None:
        return
    ok = _CRITERIA.setdefault(label, True)
    if report.when == "call" or report.outcome != "passed":
        passed = report.outcome == "passed" and not hasattr(report, "wasxfail")
        _CRITERIA[label] = ok and passed


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    m = item.get_closest_marker("criterion")
    if m is not None:
        outcome.get_result().criterion = str(m.args[0])


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")

    def key(label):
        digits = "".join(c for c in label if c.isdigit())
        return int(digits), label

    for label in sorted(_CRITERIA, key=key):
        terminalreporter.write_line(f"criterion {label:<4} {'PASS' if _CRITERIA[label] else 'FAIL'}")
