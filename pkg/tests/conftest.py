import sys
from collections import defaultdict
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA = defaultdict(list)


@pytest.fixture(autouse=True, scope="session")
def _isolated_cache(tmp_path_factory):
    mp = pytest.MonkeyPatch()
    mp.setenv("PRIMEFRAC_CACHE", str(tmp_path_factory.mktemp("cache")))
    yield
    mp.undo()


def pytest_runtest_logreport(report):
    marks = getattr(report, "criterion_ids", None)
    if not marks:
        return
    if report.when == "call" or report.outcome != "passed":
        for cid in marks:
            _CRITERIA[cid].append((report.nodeid.split("::")[-1], report.outcome))


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    rep.criterion_ids = [m.args[0] for m in item.iter_markers("criterion")]


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")

    def key(cid):
        digits = "".join(c for c in cid if c.isdigit())
        return int(digits or 0), cid

    for cid in sorted(_CRITERIA, key=key):
        results = _CRITERIA[cid]
        failed = [name for name, outcome in results if outcome != "passed"]
        status = "FAIL" if failed else "PASS"
        detail = f"  failing: {', '.join(failed)}" if failed else ""
        tr.write_line(f"criterion {cid}: {status} ({len(results) - len(failed)}/{len(results)} checks){detail}")
