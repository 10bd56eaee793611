import os

from hypothesis import HealthCheck, settings, strategies as st

from cycnorm.arith import CycElem, CycInt

settings.register_profile(
    "default", max_examples=int(os.environ.get("CYCNORM_EXAMPLES", "60")), deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")


def cycints(ell: int, mag: int = 60, nonzero: bool = False):
    s = st.tuples(*[st.integers(-mag, mag)] * (ell - 1)).map(lambda c: CycInt(c, ell))
    return s.filter(bool) if nonzero else s


def elems(ell: int, mag: int = 60):
    """Nonzero integral elements."""
    return cycints(ell, mag, nonzero=True).map(lambda a: CycElem.of(a, ell))


def fractions_(ell: int, mag: int = 30):
    return st.tuples(elems(ell, mag), elems(ell, mag)).map(lambda t: t[0] / t[1])


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
