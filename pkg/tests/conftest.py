import os
import sys

import numpy as np
import pytest

from fracnls.grid import GridSpec, random_field

ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, title: str, ok: bool, detail: str) -> None:
    line = f"[criterion {number}] {'PASS' if ok else 'FAIL'} {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line, file=sys.stderr)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip("]"))):
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def rel(a, b):
    a, b = np.asarray(a), np.asarray(b)
    return float(np.max(np.abs(a - b)) / max(np.max(np.abs(b)), 1e-300))


def corpus(M, n, sigma=1.0, seed0=0):
    g = GridSpec(M)
    return [random_field(g, sigma, seed0 + i) for i in range(n)]


@pytest.fixture
def tmp_out(tmp_path):
    return os.fspath(tmp_path)
