import math

import numpy as np
import pytest
from scipy.integrate import quad

from featsel.dataset import Dataset, synthetic_gaussian
from featsel.errors import DomainError, ValidationError
from featsel.ttest import (INFINITE_SEPARATION, TTestResult, ecdf, feature_pvalues, pooled_t,
    pvalue_summary, rank_by_pvalue, rank_by_tstat, reg_inc_beta, student_two_sided_p, welch_t)

def beta_cdf_by_quadrature(a, b, x):
    log_norm = math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
    density = lambda t: math.exp(log_norm + (a - 1) * math.log(t) + (b - 1) * math.log1p(-t))
    mode = (a - 1) / (a + b - 2) if a + b > 2 else None
    points = [mode] if mode is not None and 0 < mode < x else None
    value, _ = quad(density, 0, x, points=points, epsabs=1e-13, epsrel=1e-12, limit=200)
    return value

class TestRegIncBeta:
    def test_uniform(self):
        assert reg_inc_beta(1, 1, 0.3) == pytest.approx(0.3, abs=1e-12)

    def test_boundaries(self):
        assert reg_inc_beta(5, 2, 0) == 0.0
        assert reg_inc_beta(5, 2, 1) == 1.0

    def test_polynomial_case(self):
        x = 0.25
        exact = 12 * (x ** 2 / 2 - 2 * x ** 3 / 3 + x ** 4 / 4)
        assert exact == pytest.approx(0.26171875, abs=1e-12)
        assert reg_inc_beta(2, 3, x) == pytest.approx(exact, abs=1e-12)

    def test_quadrature(self):
        rng = np.random.default_rng(1)
        for _ in range(60):
            a, b = rng.uniform(1.0, 20.0, size=2)
            x = rng.uniform(0.01, 0.99)
            assert reg_inc_beta(a, b, x) == pytest.approx(beta_cdf_by_quadrature(a, b, x),
                abs=1e-9)

    def test_symmetry(self):
        rng = np.random.default_rng(7)
        for _ in range(300):
            a, b = rng.uniform(0.5, 200.0, size=2)
            x = rng.uniform(0.0, 1.0)
            assert reg_inc_beta(a, b, x) + reg_inc_beta(b, a, 1 - x) == pytest.approx(1.0,
                abs=1e-10)

    @pytest.mark.parametrize('a, b, x', [(0, 1, 0.5), (1, -2, 0.5), (1, 1, -0.1), (1, 1, 1.5)])
    def test_domain(self, a, b, x):
        with pytest.raises(DomainError):
            reg_inc_beta(a, b, x)


class TestWelch:
    def test_identical_samples(self):
        result = welch_t([1.0, 2.0, 3.0], [1.0, 2.0, 3.0])
        assert result.t == 0.0
        assert result.p == 1.0

    def test_reference_values(self):
        result = welch_t([1, 2, 3, 4], [3, 4, 5, 6])
        assert result.t == pytest.approx(-2.19089023, abs=1e-8)
        assert result.df == pytest.approx(6.0, abs=1e-12)
        assert result.p == pytest.approx(0.0708, abs=1e-4)

    def test_infinite_separation(self):
        result = welch_t([0, 0], [1, 1])
        assert result.p == 0.0
        assert result.t == -INFINITE_SEPARATION
        assert welch_t([1, 1], [0, 0]).t == INFINITE_SEPARATION

    def test_constant_equal_samples(self):
        result = welch_t([2.5, 2.5, 2.5], [2.5, 2.5])
        assert (result.t, result.p) == (0.0, 1.0)

    def test_constants_that_are_not_doubles(self):
        # The sample means carry rounding noise: the variances come out near 1e-34, not 0.
        result = welch_t([0.1, 0.1, 0.1], [0.7, 0.7, 0.7])
        assert result.p == 0.0
        assert result.t == -INFINITE_SEPARATION
        assert result.df == 4
        result = pooled_t([0.3] * 4, [0.1] * 3)
        assert (result.t, result.p, result.df) == (INFINITE_SEPARATION, 0.0, 5)
        assert welch_t([0.1] * 3, [0.1] * 7)[1:] == (0.0, 8.0, 1.0)

    def test_constant_columns(self):
        values = np.array([[0.1, 0.1, 1.0]] * 3 + [[0.7, 0.1, 2.0]] * 3)
        values[:, 2] += np.arange(6) * 0.01
        results = feature_pvalues(Dataset(values, [0, 0, 0, 1, 1, 1]), range(6))
        assert (results[0].t, results[0].p) == (-INFINITE_SEPARATION, 0.0)
        assert (results[1].t, results[1].p) == (0.0, 1.0)
        assert 0.0 < results[2].p < 1.0

    def test_antisymmetry(self):
        rng = np.random.default_rng(3)
        for _ in range(50):
            xs = rng.normal(0, 1, size=rng.integers(2, 12))
            ys = rng.normal(0.5, 2, size=rng.integers(2, 12))
            forward = welch_t(xs, ys)
            backward = welch_t(ys, xs)
            assert backward.t == -forward.t
            assert backward.df == forward.df
            assert backward.p == forward.p

    def test_shift_scale_invariance(self):
        rng = np.random.default_rng(4)
        for _ in range(50):
            xs = rng.normal(0, 1, size=8)
            ys = rng.normal(1, 1.5, size=11)
            base = welch_t(xs, ys)
            moved = welch_t(3.7 * xs - 12.0, 3.7 * ys - 12.0)
            np.testing.assert_allclose([moved.t, moved.df, moved.p], [base.t, base.df, base.p],
                rtol=1e-9, atol=1e-10)

    def test_small_samples(self):
        with pytest.raises(ValidationError):
            welch_t([1.0], [1.0, 2.0])


def test_pooled_matches_welch_on_equal_sizes():
    rng = np.random.default_rng(5)
    xs = rng.normal(0, 1, size=9)
    ys = rng.normal(1, 3, size=9)
    pooled = pooled_t(xs, ys)
    assert pooled.t == pytest.approx(welch_t(xs, ys).t, rel=1e-12)
    assert pooled.df == 16.0

def test_pooled_df():
    assert pooled_t([1, 2, 4], [3, 5, 6, 9, 10]).df == 6.0

def test_p_monotone_in_t():
    ts = np.linspace(0, 50, 2001)
    for df in (1.0, 2.5, 10.0, 100.0):
        ps = np.array([student_two_sided_p(t, df) for t in ts])
        assert np.all(np.diff(ps) <= 1e-15)
        assert np.all((ps >= 0) & (ps <= 1))


class TestFeaturePvalues:
    def test_matches_welch_per_column(self, two_class):
        results = feature_pvalues(two_class, np.arange(two_class.n_obs))
        assert len(results) == two_class.n_features
        for j in range(two_class.n_features):
            column = two_class.values[:, j]
            expected = welch_t(column[two_class.labels == 0], column[two_class.labels == 1])
            assert results[j].feature_index == j
            assert results[j].t == pytest.approx(expected.t, rel=1e-12)
            assert results[j].p == pytest.approx(expected.p, rel=1e-12, abs=1e-300)

    def test_label_feature(self):
        labels = np.repeat([0, 1], 5)
        values = np.column_stack([labels.astype(float), np.arange(10.0)])
        results = feature_pvalues(Dataset(values, labels), np.arange(10))
        assert results[0].p == 0.0

    def test_single_feature(self):
        ds = Dataset([[0.1], [0.4], [1.2], [1.5]], [0, 0, 1, 1])
        assert len(feature_pvalues(ds, range(4))) == 1

    def test_three_classes(self):
        ds = Dataset(np.arange(12.0).reshape(6, 2), [0, 0, 1, 1, 2, 2])
        with pytest.raises(ValidationError):
            feature_pvalues(ds, range(6))

    def test_null_uniformity(self):
        ds = synthetic_gaussian((100, 100), 2000, [], 0.0, seed=12)
        ps = np.array([r.p for r in feature_pvalues(ds, range(ds.n_obs))])
        assert 0.02 <= np.mean(ps < 0.05) <= 0.08


class TestRanking:
    def make(self, ps, ts=None):
        ts = ts if ts is not None else [1.0] * len(ps)
        return [TTestResult(i, t, 10.0, p) for i, (p, t) in enumerate(zip(ps, ts))]

    def test_by_pvalue(self):
        assert rank_by_pvalue(self.make([0.5, 0.01, 0.3])) == [1, 2, 0]

    def test_tie_on_p_goes_to_larger_t(self):
        assert rank_by_pvalue(self.make([0.0, 0.0], [3.0, -9.0])) == [1, 0]

    def test_tie_on_everything_goes_to_lower_index(self):
        assert rank_by_pvalue(self.make([0.2, 0.2, 0.2])) == [0, 1, 2]

    def test_input_order_irrelevant(self):
        results = self.make([0.4, 0.1, 0.7, 0.2], [1.0, 2.0, 0.5, 1.5])
        assert rank_by_pvalue(results[::-1]) == rank_by_pvalue(results) == [1, 3, 0, 2]

    def test_is_permutation(self, two_class):
        ranking = rank_by_pvalue(feature_pvalues(two_class, range(two_class.n_obs)))
        assert sorted(ranking) == list(range(two_class.n_features))

    def test_by_tstat(self):
        results = self.make([0.01, 0.02, 0.02], [2.0, -5.0, 5.0])
        assert rank_by_tstat(results) == [1, 2, 0]


def test_pvalue_summary():
    results = [TTestResult(i, 0.0, 1.0, p) for i, p in enumerate([0.0005, 0.01, 0.2, 0.04])]
    assert pvalue_summary(results) == {0.05: 3, 0.001: 1}


class TestEcdf:
    def test_counting(self):
        curve = ecdf([0.3, 0.1, 0.2])
        assert curve.evaluate(0.2) == pytest.approx(2 / 3)
        assert curve.evaluate(0.3) == 1.0
        assert curve.evaluate(0.05) == 0.0
        assert curve.points() == [(0.1, 1 / 3), (0.2, 2 / 3), (0.3, 1.0)]

    def test_monotone_and_right_continuous(self):
        values = np.random.default_rng(2).uniform(size=50)
        curve = ecdf(values)
        assert np.all(np.diff(curve.cumulative) > 0)
        assert curve.cumulative[-1] == 1.0
        for v in values:
            assert curve.evaluate(np.nextafter(v, 2)) == curve.evaluate(v)
            assert curve.evaluate(np.nextafter(v, -1)) < curve.evaluate(v)

    def test_ties(self):
        assert ecdf([0.5, 0.5, 0.1]).evaluate(0.5) == 1.0

    def test_rejects_bad_input(self):
        with pytest.raises(ValidationError):
            ecdf([])
        with pytest.raises(ValidationError):
            ecdf([0.1, np.inf])
