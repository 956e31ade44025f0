import time

import pytest

from hopfcert.builders import build_A_pq, build_script_A, build_taft
from hopfcert.doubles import drinfeld_double
from hopfcert.pipelines import taft_pipeline


@pytest.fixture(scope="session")
def taft3():
    return build_taft(3)


@pytest.fixture(scope="session")
def taft3_double(taft3):
    return drinfeld_double(taft3)


@pytest.fixture(scope="session")
def taft_run():
    return taft_pipeline(3)


@pytest.fixture(scope="session")
def a0():
    return build_script_A(7, 3, 2, 0)


@pytest.fixture(scope="session")
def apq():
    """A(7,3) with its double and quotient map (the expensive end-to-end build)."""
    t0 = time.perf_counter()
    res = build_A_pq(7, 3, 2)
    res.report.timings["fixture wall"] = time.perf_counter() - t0
    return res


_CRITERIA: dict[int, list[tuple[str, str]]] = {}


def pytest_runtest_logreport(report):
    crit = getattr(report, "criterion", None)
    if crit is None:
        return
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        _CRITERIA.setdefault(crit, []).append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is not None:
        rep.criterion = mark.args[0]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for crit in sorted(_CRITERIA):
        results = _CRITERIA[crit]
        ok = all(o == "passed" for _, o in results)
        failed = [n for n, o in results if o != "passed"]
        line = f"criterion {crit}: {'PASS' if ok else 'FAIL'} ({len(results) - len(failed)}/{len(results)} checks)"
        if failed:
            line += " failing: " + ", ".join(failed)
        tr.write_line(line)
