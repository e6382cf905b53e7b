from ..selftest import exact_report, numeric_report, run_selftest
from ..utils import DEFAULT_TOLERANCES


def test_exact_identities():
    report = exact_report()
    assert report.passed, report.failures()
    assert len(report) > 20


def test_selftest_passes():
    report = run_selftest(seed=0, samples=5)
    assert report.passed, report.failures()
    suites = set(report.stats().index)
    assert {"exact", "derivative", "regular", "critical", "symmetry"} <= suites


def test_numeric_report_is_reproducible():
    a = numeric_report(seed=4, samples=3).to_json()
    b = numeric_report(seed=4, samples=3).to_json()
    assert a == b


def test_zero_tolerances_fail():
    report = numeric_report(tolerances=DEFAULT_TOLERANCES.scaled(0), samples=3)
    assert not report.passed
    # the exact checks do not depend on tolerances
    assert exact_report().passed


def test_selftest_records_every_suite():
    report = run_selftest(samples=3)
    assert len(report) > len(exact_report())
    assert report.passed, report.failures()
    failed = run_selftest(tolerances=DEFAULT_TOLERANCES.scaled(0), samples=3)
    assert not failed.passed
