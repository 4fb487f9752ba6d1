import pathlib
import sys

import pytest

sys.path.insert(0, str(pathlib.Path(__file__).parent))

from ssdlab.ring_core import RingSpec, make_ring

F2 = RingSpec.zn(2)
FIXTURE_SPECS = {
    "zn6": RingSpec.zn(6),
    "zn5": RingSpec.zn(5),
    "f2xf2": RingSpec.product(F2, F2),
    "ut2f2": RingSpec.ut2(F2),
    "m2f2": RingSpec.matrix2(F2),
    "m2z3": RingSpec.matrix2(RingSpec.zn(3)),
    "zn2xzn3": RingSpec.product(F2, RingSpec.zn(3)),
}


@pytest.fixture(params=sorted(FIXTURE_SPECS))
def fixture_ring(request):
    return make_ring(FIXTURE_SPECS[request.param])


@pytest.fixture
def ut2():
    return make_ring(RingSpec.ut2(F2))


@pytest.fixture
def m2():
    return make_ring(RingSpec.matrix2(F2))


@pytest.fixture
def f2xf2():
    return make_ring(RingSpec.product(F2, F2))


@pytest.fixture
def qm2():
    return make_ring(RingSpec.rational_matrix2())


ACCEPTANCE_LINES: dict = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[key])
