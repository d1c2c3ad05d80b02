import pytest


def pytest_addoption(parser):
    parser.addoption("--deep", action="store_true", default=False,
                     help="also run the multi-minute maximality scans for q=11 and q=13")


def pytest_configure(config):
    config.addinivalue_line("markers", "deep: maximality scans for q >= 11 (enable with --deep)")


def pytest_collection_modifyitems(config, items):
    if config.getoption("--deep"):
        return
    skip = pytest.mark.skip(reason="needs --deep")
    for item in items:
        if "deep" in item.keywords:
            item.add_marker(skip)


CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line: ``criterion(label, ok, detail)``."""
    def record(label: str, ok: bool, detail: str = "") -> None:
        CRITERIA[label] = (ok, detail)
        print(f"{'PASS' if ok else 'FAIL'} {label} {detail}")
    return record


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for label in sorted(CRITERIA):
        ok, detail = CRITERIA[label]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'} {label} {detail}")
