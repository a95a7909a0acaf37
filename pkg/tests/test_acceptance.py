"""Acceptance criteria, each at its stated size and time budget.

Run ``pytest tests/test_acceptance.py`` (a summary line per criterion is
printed at the end) or ``python3 tests/test_acceptance.py``.
"""

import subprocess
import sys
import time

import pytest

from ellimod import verify

# criterion -> seconds allowed (None: no budget stated)
BUDGETS = {1: 1.0, 2: 1.0, 3: 1.0, 4: None, 5: 30.0, 6: 60.0, 7: None, 8: None, 9: None, 10: None, 11: None}
CALLS = {
    5: lambda d: verify.check_regularity_law(d, samples=1000),
    6: lambda d: verify.check_canonical(d, samples=1000),
}

RESULTS: list[str] = []


def _record(number: int, name: str, ok: bool, seconds: float, note: str = "") -> str:
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:2d}: {name} ({seconds:.2f}s){' ' + note if note else ''}"
    RESULTS.append(line)
    print(line)
    return line


@pytest.mark.parametrize("number,name,fn", verify.CRITERIA, ids=[f"criterion_{n}" for n, _, _ in verify.CRITERIA])
def test_criterion(number, name, fn):
    call = CALLS.get(number, fn)
    result = verify._timed(number, name, call)
    budget = BUDGETS[number]
    in_time = budget is None or result.seconds < budget
    note = "; ".join(result.detail[:3])
    if not in_time:
        note = f"over budget {budget}s " + note
    _record(number, name, result.passed and in_time, result.seconds, note)
    assert result.passed, result.detail
    assert in_time, f"took {result.seconds:.2f}s, budget {budget}s"


def test_criterion_12_cli_verify():
    start = time.perf_counter()
    proc = subprocess.run([sys.executable, "-m", "ellimod", "verify"], capture_output=True, text=True)
    seconds = time.perf_counter() - start
    ok = proc.returncode == 0 and seconds < 300
    _record(12, "CLI verify runs suites 1-11 and exits 0 within 5 minutes", ok, seconds)
    assert proc.returncode == 0, proc.stderr
    assert proc.stderr.count("[PASS]") == 11
    assert seconds < 300


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))
