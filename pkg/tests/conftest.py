from __future__ import annotations

import time
from contextlib import contextmanager

import pytest

_RESULTS = pytest.StashKey[list]()


def pytest_configure(config):
    config.stash[_RESULTS] = []


@pytest.fixture
def criterion(request):
    """Context manager recording one acceptance criterion as PASS or FAIL."""
    results = request.config.stash[_RESULTS]

    @contextmanager
    def check(number: int, title: str):
        notes: list[str] = []
        t0 = time.perf_counter()
        try:
            yield notes
        except BaseException as e:
            msg = str(e).strip().splitlines()[0] if str(e).strip() else type(e).__name__
            results.append((number, title, False, msg, time.perf_counter() - t0))
            raise
        results.append((number, title, True, "; ".join(notes), time.perf_counter() - t0))

    return check


def pytest_terminal_summary(terminalreporter, config):
    results = config.stash.get(_RESULTS, [])
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail, secs in sorted(results):
        line = f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title} [{secs:.2f}s]"
        if detail:
            line += f"  {detail}"
        terminalreporter.write_line(line)
