import pytest

CRITERIA: dict[str, tuple[bool, str]] = {}


@pytest.fixture
def criterion(request):
    """Record one acceptance line per criterion; printed in the terminal summary."""
    name = request.node.name

    def report(ok: bool, detail: str):
        CRITERIA[name] = (ok, detail)

    yield report
    rep = getattr(request.node, "rep_call", None)
    if rep is not None and rep.failed:
        ok, detail = CRITERIA.get(name, (False, ""))
        CRITERIA[name] = (False, detail or "assertion failed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    if rep.when == "call":
        item.rep_call = rep


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(CRITERIA):
        ok, detail = CRITERIA[name]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  {name}  {detail}")
