import math
import sys
from pathlib import Path

import pytest
from hypothesis import settings

sys.path.insert(0, str(Path(__file__).parent))

from lemniwedge.config import WedgeConfig
from lemniwedge.reconstruct import solution

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def cfg():
    return WedgeConfig(math.pi / 2)


@pytest.fixture(scope="session")
def sol(cfg):
    return solution(cfg)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from acceptance_report import LINES
    lines = config.stash.get(LINES, {})
    if not lines:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(lines):
        terminalreporter.write_line(lines[k])
