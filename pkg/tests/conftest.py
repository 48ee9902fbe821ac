from pathlib import Path

import pytest

from ksso import Automaton, load_automaton

DATA = Path(__file__).parent / "data"
GOLDEN = Path(__file__).parent / "golden"

# (criterion, passed, detail) rows collected by test_acceptance
ACCEPTANCE_RESULTS: list[tuple[str, bool, str]] = []


@pytest.fixture
def example() -> Automaton:
    return load_automaton(DATA / "example.aut")


@pytest.fixture
def fixture_d() -> Automaton:
    # state 2 is declared but has no incoming transition
    return Automaton.build(
        states=["0", "1", "2", "3"],
        observable=["a", "b"],
        unobservable=["u"],
        transitions=[("0", "u", "1"), ("1", "b", "3")],
        initials=["0"],
        secrets=["1"],
    )


@pytest.fixture
def fixture_c() -> Automaton:
    return Automaton.build(
        states=["0", "1"],
        observable=["a"],
        unobservable=[],
        transitions=[("0", "a", "1")],
        initials=["0"],
        secrets=["1"],
    )


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
