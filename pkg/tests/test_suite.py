import pytest

from auxcheck.explorer import FAIL
from auxcheck.suite import CASES, run_suite, select

from . import logger


def test_select():
    quick = select()
    assert quick and not any(case.long for case in quick)
    assert len(select(long=True)) == len(CASES)
    assert [case.name for case in select(names=["HourS => HourMin"])] == ["HourS => HourMin"]
    assert select(names=["no such case"]) == []


def test_expected_failures_are_documented():
    failing = {case.name for case in CASES if case.expected == FAIL}
    assert failing == {"AfekSimplified naive mapping", "Read misses a completed write"}


def test_quick_clock_cases():
    results = run_suite(names=["HourS stutter conditions", "HourS => HourMin"])
    assert [r.as_expected for r in results] == [True, True]


@pytest.mark.slow
def test_acceptance_suite():
    results = run_suite(workers=4)
    for result in results:
        logger.info(f"{result.case.name}: {result.verdict.status}")
    unexpected = [r.case.name for r in results if not r.as_expected]
    assert not unexpected, f"Unexpected verdicts: {unexpected}"


@pytest.mark.slow
def test_long_afek_model():
    results = run_suite(long=True, workers=4, names=[c.name for c in CASES if c.long])
    assert results and all(r.as_expected for r in results)


@pytest.mark.slow
def test_verdict_json_does_not_depend_on_workers():
    for case in select():
        sequential = case.run(1, None).to_json()
        parallel = case.run(4, None).to_json()
        assert sequential == parallel, f"{case.name}: verdict JSON differs between 1 and 4 workers"
