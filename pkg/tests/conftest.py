import pytest

_RESULTS: dict[int, tuple[str, str]] = {}


class CriterionReport:
    def __init__(self, number: int):
        self.number = number

    def record(self, passed: bool, detail: str) -> None:
        _RESULTS[self.number] = ("PASS" if passed else "FAIL", detail)


@pytest.fixture
def criterion(request):
    marker = request.node.get_closest_marker("criterion")
    return CriterionReport(marker.args[0])


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(n): acceptance criterion number")


def pytest_terminal_summary(terminalreporter):
    if not _RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in range(1, 13):
        status, detail = _RESULTS.get(n, ("FAIL", "no result recorded"))
        terminalreporter.write_line(f"criterion {n:2d}: {status}  {detail}")
