import pytest


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None:
        return
    n = mark.args[0]
    if rep.when == "setup" and rep.skipped:
        print(f"\nACCEPTANCE {n} SKIP")
    elif rep.when == "call":
        verdict = "PASS" if rep.passed else ("SKIP" if rep.skipped else "FAIL")
        print(f"\nACCEPTANCE {n} {verdict}")
