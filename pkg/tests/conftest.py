from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

from helpers import GROUPS, GeneratedGroup, write_group  # noqa: E402


@pytest.fixture(scope="session")
def groups(tmp_path_factory: pytest.TempPathFactory) -> dict[str, GeneratedGroup]:
    base = tmp_path_factory.mktemp("generated")
    return {name: write_group(base / name, specs) for name, specs in GROUPS.items()}


@pytest.fixture(scope="session")
def mypy_cache(tmp_path_factory: pytest.TempPathFactory) -> Path:
    return tmp_path_factory.mktemp("mypy_cache")


def pytest_terminal_summary(terminalreporter: pytest.TerminalReporter) -> None:
    from helpers import ACCEPTANCE

    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(ACCEPTANCE):
            terminalreporter.write_line(ACCEPTANCE[n])
