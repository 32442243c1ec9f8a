import contextlib
import time

import pytest

_CRITERIA = []


class _Recorder:
    def __init__(self, request):
        self.request = request

    @contextlib.contextmanager
    def __call__(self, label: str, limit_s: float):
        """Time the body, enforce the runtime limit and record one PASS/FAIL line."""
        info = {"detail": ""}
        t0 = time.perf_counter()
        try:
            yield info
            elapsed = time.perf_counter() - t0
            assert elapsed < limit_s, f"runtime {elapsed:.1f}s exceeds {limit_s}s"
        except BaseException as exc:
            elapsed = time.perf_counter() - t0
            msg = str(exc).splitlines()[0] if str(exc) else type(exc).__name__
            line = f"FAIL  {label}  ({elapsed:.1f}s)  {info['detail']}  [{msg}]"
            _CRITERIA.append(line)
            print(line)
            raise
        line = f"PASS  {label}  ({elapsed:.1f}s)  {info['detail']}"
        _CRITERIA.append(line)
        print(line)


@pytest.fixture
def criterion(request):
    return _Recorder(request)


def pytest_terminal_summary(terminalreporter):
    if _CRITERIA:
        terminalreporter.section("acceptance criteria")
        for line in _CRITERIA:
            terminalreporter.write_line(line)
