import numpy as np
import pytest
from hypothesis import settings, strategies as st

from langlands_abelian.torus_geometry import CohomologyClass, random_period_matrix, validate_period_matrix

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

TAUS = (1j, 0.3 + 1.2j)


@pytest.fixture(params=TAUS, ids=["tau=i", "tau=0.3+1.2i"])
def elliptic(request):
    return validate_period_matrix(request.param)


@pytest.fixture
def genus2():
    return random_period_matrix(2, np.random.default_rng(2024))


def classes(genus, bound=5):
    ints = st.integers(-bound, bound)
    return st.lists(ints, min_size=2 * genus, max_size=2 * genus).map(CohomologyClass.from_flat)


def unit_coords(genus):
    return st.lists(st.floats(0, 1, exclude_max=True), min_size=2 * genus, max_size=2 * genus)


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call":
                continue
            props = dict(rep.user_properties)
            if "criterion" in props:
                lines.append((props["criterion"], "PASS" if outcome == "passed" else "FAIL", props.get("detail", "")))
    if lines:
        terminalreporter.section("acceptance criteria")
        for crit, status, detail in sorted(lines):
            terminalreporter.write_line(f"{status} criterion {crit} {detail}".rstrip())
