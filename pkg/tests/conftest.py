from functools import lru_cache

import pytest

from opbnonlocal import instance as _instance

# criterion number -> (passed, description, detail); filled by test_acceptance
ACCEPTANCE: dict[int, tuple[bool, str, str]] = {}


@lru_cache(maxsize=None)
def cached_instance(name: str, seed: int):
    return _instance(name, seed)


@pytest.fixture
def inst():
    return cached_instance


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        ok, desc, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"{'PASS' if ok else 'FAIL'}  criterion {n:>2}: {desc}  [{detail}]")
