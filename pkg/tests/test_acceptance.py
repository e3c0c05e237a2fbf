"""The nine acceptance criteria at their stated parameters.

Each test prints one [PASS]/[FAIL] line; conftest.py repeats them in the
terminal summary.  Criteria 5b and 8 (as stated) do not hold and are strict
xfails: the computation runs, prints FAIL, and asserts the failure.
"""

import pytest

from staircase import verify as vf

LINES = []


def report(res, max_seconds=None):
    line = res.line()
    if max_seconds is not None and res.seconds > max_seconds:
        line += f" [runtime over {max_seconds}s]"
    LINES.append(line)
    print(line)
    return res


def test_criterion_1_exact_values():
    res = report(vf.check_exact_values((2, 3, 4, 5)), 5)
    assert res.passed and res.seconds < 5


def test_criterion_2_minimum():
    res = report(vf.check_minimum(2), 120)
    assert res.passed and res.seconds < 120


def test_criterion_3_incenter():
    assert report(vf.check_incenter()).passed


def test_criterion_4_gap_law():
    assert report(vf.check_gap_law((2, 3), 12)).passed


@pytest.mark.parametrize("s", [2, 3])
def test_criterion_5a_remark_max(s):
    assert report(vf.check_remark_max(s, 30)).passed


@pytest.mark.xfail(strict=True, reason="I(3/13, inf) = 9/13 > 2/3; the stated bound is false")
@pytest.mark.parametrize("s", [2, 3])
def test_criterion_5b_remark_bound(s):
    assert report(vf.check_remark_bound(s, 30)).passed


def test_criterion_6_dichotomy():
    assert report(vf.check_dichotomy(2, 50)).passed


def test_criterion_7_limits():
    assert report(vf.check_limits(2)).passed


@pytest.mark.xfail(strict=True, reason="V_{-n,1} for n <= 12 stops covering (1, y) at y = 13/sqrt(143)")
def test_criterion_8_covering_as_stated():
    res = report(vf.check_covering(0.01, 12, "8"), 60)
    assert res.passed and res.seconds < 60


def test_criterion_8_covering_enlarged_family():
    res = report(vf.check_covering(0.01, 80, "8*"), 60)
    assert res.passed and res.seconds < 60


def test_criterion_9_identities():
    res = report(vf.check_identities(n_k=10_000, n_inv=500, n_sum=200, s_values=(2, 3, 4), max_s=8))
    assert res.passed
