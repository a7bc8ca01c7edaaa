import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", deadline=None, max_examples=60,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", deadline=None, max_examples=200,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def gq2():
    from wcgame.construct import build_gq
    return build_gq(2)


@pytest.fixture(scope="session")
def boundary7():
    from wcgame.enumeration import enumerate_decomposable
    return enumerate_decomposable(7, 2)


# acceptance criteria: one pass/fail line each in the terminal summary
_criteria: list[tuple[int, str, str, str]] = []


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    if rep.when == "call" or (rep.when == "setup" and not rep.passed):
        detail = "; ".join(str(v) for k, v in item.user_properties if k == "detail")
        _criteria.append((mark.args[0], mark.args[1], "PASS" if rep.passed else "FAIL", detail))


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, verdict, detail in sorted(_criteria):
        line = f"criterion {number:2d} {verdict}: {title}"
        terminalreporter.write_line(line + (f" [{detail}]" if detail else ""))
