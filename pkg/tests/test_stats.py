import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import chi2, chisquare

from unbiased.oracle import SamplerSpec, empirical_dist
from unbiased.sampler import SampleReport, StageTelemetry
from unbiased.stats import chi2_critical_999, chi_square_uniform, flip_cost_summary


def test_perfectly_uniform():
    res = chi_square_uniform([100, 100, 100, 100])
    assert res.statistic == 0 and res.passed and res.dof == 3


def test_two_bucket_statistic():
    assert chi_square_uniform([110, 90]).statistic == pytest.approx(2.0)


def test_extreme_deviation_fails():
    res = chi_square_uniform([1000, 0])
    assert res.statistic == pytest.approx(1000.0)
    assert not res.passed


@pytest.mark.parametrize("counts", [[], [10], [1, 2, 3], [0, 0]])
def test_preconditions(counts):
    with pytest.raises(ValueError):
        chi_square_uniform(counts)


@pytest.mark.parametrize("dof", list(range(1, 31)))
def test_critical_table(dof):
    assert chi2_critical_999(dof) == pytest.approx(chi2.ppf(0.999, dof), rel=1e-12)


@pytest.mark.parametrize("dof", [31, 40, 60, 100, 500, 5000])
def test_wilson_hilferty_tail(dof):
    assert chi2_critical_999(dof) == pytest.approx(chi2.ppf(0.999, dof), rel=3e-3)


@settings(max_examples=100)
@given(st.lists(st.integers(5, 500), min_size=2, max_size=20), st.randoms())
def test_statistic_matches_scipy_and_is_permutation_invariant(counts, rnd):
    ref = chisquare(counts).statistic
    assert chi_square_uniform(counts).statistic == pytest.approx(ref, rel=1e-9, abs=1e-9)
    shuffled = counts[:]
    rnd.shuffle(shuffled)
    assert chi_square_uniform(shuffled).statistic == pytest.approx(ref, rel=1e-9, abs=1e-9)


@settings(max_examples=100)
@given(st.integers(2, 12), st.integers(5, 50), st.data())
def test_zero_statistic_iff_equal(k, per, data):
    counts = data.draw(st.lists(st.integers(0, 2 * per), min_size=k, max_size=k))
    if sum(counts) < 5 * k:
        return
    if sum(counts) % k == 0:
        assert (chi_square_uniform(counts).statistic == 0) == (len(set(counts)) == 1)


def test_singleton_summary():
    s = flip_cost_summary([SampleReport(0, 4, (StageTelemetry(2, 1, (1, 0)),))])
    assert (s.mean, s.variance, s.min, s.max) == (4, 0, 4, 4)
    assert s.rejection_rates == {2: 0.5}


def test_summary_needs_reports():
    with pytest.raises(ValueError):
        flip_cost_summary([])


def test_rejection_rate_von_neumann():
    run = empirical_dist(SamplerSpec("prime", 2, 0.5), 10**5, seed=31, keep_reports=True)
    s = flip_cost_summary(run.reports)
    assert abs(s.rejection_rates[2] - 0.5) < 0.01


def test_mean_flips_p3():
    run = empirical_dist(SamplerSpec("prime", 3, 0.5), 10**5, seed=32, keep_reports=True)
    s = flip_cost_summary(run.reports)
    assert abs(s.mean - 4) < 0.15
    assert s.mean == pytest.approx(run.mean_flips)
    assert s.min == 3 and s.max % 3 == 0
