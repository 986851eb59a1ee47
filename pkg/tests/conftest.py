import contextlib
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_CRITERIA: list[str] = []


@pytest.fixture
def criterion():
    """Context manager recording one PASS/FAIL line with its wall time."""

    @contextlib.contextmanager
    def record(number: int, title: str, limit: float):
        start = time.perf_counter()
        detail = {"text": ""}
        try:
            yield detail
        except BaseException as exc:
            took = time.perf_counter() - start
            _CRITERIA.append(f"criterion {number} FAIL  {title} ({took:.1f}s) {type(exc).__name__}: {exc}".splitlines()[0])
            raise
        took = time.perf_counter() - start
        ok = took < limit
        shown = f"{took * 1000:.3f}ms, limit {limit * 1000:g}ms" if limit < 1 else f"{took:.1f}s, limit {limit:g}s"
        line = f"criterion {number} {'PASS' if ok else 'FAIL'}  {title} ({shown})"
        if detail["text"]:
            line += f"  {detail['text']}"
        _CRITERIA.append(line)
        assert ok, f"took {took:.1f}s, limit {limit:g}s"

    return record


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_CRITERIA, key=lambda s: int(s.split()[1])):
            terminalreporter.write_line(line)
