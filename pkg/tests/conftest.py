import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def bin_sine(T, k, amp=1.0, phase=0.0):
    t = np.arange(T)
    return amp * np.sin(2 * np.pi * k * t / T + phase)


@pytest.fixture
def sine4096():
    return bin_sine(4096, 256)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    if mod is None or not mod.LINES:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.LINES):
        terminalreporter.write_line(mod.LINES[num])
