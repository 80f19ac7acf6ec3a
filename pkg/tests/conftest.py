import pytest

from fracgelfand.constants import Params

# (n, s) pairs exercised throughout; (8, 0.28206) sits on the stability boundary
ACCEPTANCE_SET = [(2, 0.5), (3, 0.5), (4, 0.3), (8, 0.28206)]
WIDE_SET = ACCEPTANCE_SET + [(1, 0.3), (2, 0.9), (5, 0.05), (12, 0.95)]


@pytest.fixture(params=ACCEPTANCE_SET, ids=lambda ns: f"n{ns[0]}-s{ns[1]}")
def acc_params(request):
    return Params(*request.param)


@pytest.fixture(params=WIDE_SET, ids=lambda ns: f"n{ns[0]}-s{ns[1]}")
def wide_params(request):
    return Params(*request.param)


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
