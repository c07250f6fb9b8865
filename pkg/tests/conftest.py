import cmath
import math

import pytest
from hypothesis import settings, strategies as st

from nonclassical.states import StateSpec

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_line():
    """Record one PASS/FAIL line per acceptance criterion; printed in the terminal summary."""

    def record(name: str, ok: bool, detail: str) -> None:
        line = f"{'PASS' if ok else 'FAIL'}  {name}: {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


ALPHA_FIG = cmath.rect(math.sqrt(2 / 3), math.pi / 3)
ALPHA_SMALL = cmath.rect(0.2, math.pi / 3)


@st.composite
def specs(draw, max_m=3, max_alpha=1.2, min_r=0.0, max_r=0.8):
    """Non-degenerate states of moderate size."""
    op = draw(st.sampled_from(["add", "sub"]))
    m = draw(st.integers(0, max_m))
    mod = draw(st.floats(0.0, max_alpha))
    arg = draw(st.floats(0.0, 2 * math.pi))
    r = draw(st.floats(min_r, max_r))
    phi = draw(st.floats(0.0, 2 * math.pi))
    if op == "sub" and m > 0 and r < 1e-3:
        mod = max(mod, 0.1)
    return StateSpec(op, m, cmath.rect(mod, arg), r, phi)

