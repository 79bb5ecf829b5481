import numpy as np
import pytest
from hypothesis import HealthCheck, settings, strategies as st

from gmseq import TwoSidedSequence, make_example, make_family
from gmseq.experiments import random_fixture_family

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


finite = st.floats(min_value=-10, max_value=10, allow_nan=False, allow_infinity=False)


@st.composite
def sequences(draw, max_len=24, real=False, nonzero=False, offsets=(-20, 20)):
    n = draw(st.integers(1, max_len))
    offset = draw(st.integers(*offsets))
    re = draw(st.lists(finite, min_size=n, max_size=n))
    im = [0.0] * n if real else draw(st.lists(finite, min_size=n, max_size=n))
    vals = np.array(re) + 1j * np.array(im)
    if nonzero and not np.any(vals):
        vals[0] = 1.0
    return TwoSidedSequence(offset, vals)


@pytest.fixture(scope="session")
def family():
    return random_fixture_family()


@pytest.fixture(scope="session")
def all_fixtures(family):
    """The random family plus the example and power sequences."""
    extra = [make_example(name, 8) for name in ("prop-5-gap", "prop-6-compensated", "prop-7-lacunary")]
    extra += [make_family("power", [a], 256) for a in (0.6, 0.75, 0.9)]
    extra += [make_family("random-gm", [s], 200) for s in range(5)]
    extra += [TwoSidedSequence.delta(), TwoSidedSequence.delta(3, 2 - 1j)]
    return list(family) + extra


ACCEPTANCE_LINES = []


@pytest.fixture
def acceptance():
    """Record one ``criterion -> PASS/FAIL`` line, printed in the terminal summary."""
    def record(number, title, passed, detail=""):
        line = f"criterion {number} {'PASS' if passed else 'FAIL'}: {title}"
        if detail:
            line += f" ({detail})"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return passed
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
