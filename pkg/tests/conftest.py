import pytest

from meanking import _kernels

BACKENDS = ["numba", "numpy"] if _kernels.NUMBA_AVAILABLE else ["numpy"]

_criteria: dict[str, dict] = {}


@pytest.fixture(params=BACKENDS)
def backend(request):
    prev = _kernels.set_backend(request.param)
    yield request.param
    _kernels.set_backend(prev)


def pytest_runtest_logreport(report):
    cid = getattr(report, "criterion", None)
    if cid is None:
        return
    entry = _criteria.setdefault(cid[0], {"text": cid[1], "outcomes": []})
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        entry["outcomes"].append(report.outcome == "passed")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        outcome.get_result().criterion = mark.args


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for cid in sorted(_criteria, key=lambda c: int(c[2:])):
        e = _criteria[cid]
        ok = bool(e["outcomes"]) and all(e["outcomes"])
        terminalreporter.write_line(f"{cid:<5} {'PASS' if ok else 'FAIL'}  {e['text']}  ({len(e['outcomes'])} cases)")
