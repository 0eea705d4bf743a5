import pytest
from hypothesis import HealthCheck, settings

from fqpolylog import FieldTower, RatFunc, TPoly
from fqpolylog.poly import Poly

settings.register_profile(
    "repro",
    derandomize=True,
    deadline=None,
    max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repro")

_CRITERIA: dict = {}


@pytest.fixture
def criterion():
    """Record the outcome of a numbered acceptance criterion."""
    def record(k, ok, detail=""):
        _CRITERIA[k] = (bool(ok), detail)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        line = f"CRITERION {k}: {'PASS' if ok else 'FAIL'}"
        if detail:
            line += f"  ({detail})"
        terminalreporter.write_line(line)


# small helpers shared by the suites

def tower(q):
    return FieldTower.for_q(q)


def rf(F, coeffs, den=None):
    """RatFunc from F_p integer coefficient lists, lowest degree first."""
    num = Poly(F, [F.from_int(c) for c in coeffs])
    d = Poly(F, [F.from_int(c) for c in den]) if den else None
    return RatFunc(num, d)


def th(F, k=1):
    return RatFunc(Poly.monomial(F, 1, k))


def tp(F, rows):
    """TPoly from a list of RatFunc (or int) coefficients in t."""
    return TPoly(F, rows)
