import numpy as np
import pytest

from magnon_steering import default_spec, drift_matrix, stability


def random_spec(rng, lam_max=0.49):
    """Spec drawn over r in [0,2], Lambda in [0, lam_max], Gamma_k in [0,8], T in [0,1] K."""
    return default_spec(rng.uniform(0, 2), rng.uniform(0, lam_max)).in_kappa_units(
        gamma_1=rng.uniform(0, 8), gamma_2=rng.uniform(0, 8)
    ).replace(temperature=rng.uniform(0, 1.0))


def random_stable_specs(seed, count, **kw):
    rng = np.random.default_rng(seed)
    out = []
    while len(out) < count:
        s = random_spec(rng, **kw)
        if stability(drift_matrix(s)).is_stable:
            out.append(s)
    return out


@pytest.fixture
def baseline():
    return default_spec()


# --- acceptance reporting ---------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(number, title): acceptance criterion")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or report.when == "teardown":
        return
    number, title = mark.args
    if report.failed or (report.when == "call" and number not in _CRITERIA):
        # a setup failure counts; a later call result only overrides a pass
        prev = _CRITERIA.get(number, (title, True))[1]
        _CRITERIA[number] = (title, prev and report.passed)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_CRITERIA):
        title, ok = _CRITERIA[number]
        terminalreporter.write_line(f"criterion {number:>2} {'PASS' if ok else 'FAIL'}  {title}")
