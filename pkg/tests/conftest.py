import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from quandle.constructions import builtin_systems
from quandle.groups import Letter
from quandle.rewrite import letters

settings.register_profile("suite", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("suite")

ACCEPTANCE = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): an acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    marker = item.get_closest_marker("criterion")
    if marker is not None and rep.when == "call":
        ACCEPTANCE[marker.args[0]] = (marker.args[1], rep.outcome)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.write_sep("=", "acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, outcome = ACCEPTANCE[number]
        verdict = "PASS" if outcome == "passed" else "FAIL"
        terminalreporter.write_line(f"criterion {number:2d} {verdict}  {title}")


@pytest.fixture(scope="session")
def builtins():
    return builtin_systems()


def letter_strategy(sys, cap=3):
    return st.sampled_from(letters(sys, cap))


def word_strategy(sys, max_size=8, cap=3):
    return st.lists(letter_strategy(sys, cap), max_size=max_size).map(tuple)


def L(i, v=1):
    return Letter(i, v)
