import sys
import time
from contextlib import contextmanager
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

from kalmqa.pipeline import load_resources  # noqa: E402

FIXTURES = HERE / "fixtures"
GOLDEN = HERE / "golden"

# criterion number -> (passed, seconds, title)
ACCEPTANCE = {}


@contextmanager
def _timed(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        elapsed = time.perf_counter() - start
        assert elapsed < limit, f"took {elapsed:.2f} s, limit {limit} s"
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        # a criterion run in several cases passes only if every case passes
        if number in ACCEPTANCE:
            prev_ok, prev_elapsed = ACCEPTANCE[number][:2]
            ok, elapsed = ok and prev_ok, max(elapsed, prev_elapsed)
        ACCEPTANCE[number] = (ok, elapsed, title, limit)


@pytest.fixture
def criterion():
    return _timed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, seconds, title, limit = ACCEPTANCE[number]
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(
            f"criterion {number}: {status}  {title}  ({seconds:.2f} s, limit {limit} s)")


@pytest.fixture(scope="session")
def kb_text():
    return (FIXTURES / "kb.txt").read_text(encoding="utf-8")


@pytest.fixture(scope="session")
def resources(kb_text):
    return load_resources(kb_text)


def read_labels(name):
    out = []
    for line in (FIXTURES / name).read_text(encoding="utf-8").splitlines():
        q, _, ans = line.partition("\t")
        out.append((q, frozenset(a for a in ans.split("|") if a)))
    return out
