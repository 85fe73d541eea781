"""Univariate filter: two-sample t-tests per feature, exact p-values, ranking and ECDF."""

from __future__ import division

import logging
import math
import sys
from collections import namedtuple

import numpy as np
from scipy.special import betaln

from .errors import DomainError, ValidationError

logger = logging.getLogger(__name__)

# feature_index is -1 until the caller fills it in.
TTestResult = namedtuple('TTestResult', 'feature_index t df p')

# When both samples have zero variance and different means, the separation is infinite. We
# report a finite t of the largest double, signed like the mean difference, with p = 0.
INFINITE_SEPARATION = sys.float_info.max

LENTZ_TINY = 1e-300
LENTZ_EPS = 1e-15
LENTZ_MAX_ITER = 10000

def _beta_continued_fraction(a, b, x):
    # Modified Lentz evaluation of the continued fraction for I_x(a, b) (Numerical Recipes'
    # betacf). Converges quickly for x < (a + 1) / (a + b + 2).
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < LENTZ_TINY:
        d = LENTZ_TINY
    d = 1.0 / d
    h = d
    for m in range(1, LENTZ_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < LENTZ_TINY:
            d = LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < LENTZ_TINY:
            c = LENTZ_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < LENTZ_TINY:
            d = LENTZ_TINY
        c = 1.0 + aa / c
        if abs(c) < LENTZ_TINY:
            c = LENTZ_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < LENTZ_EPS:
            return h
    raise DomainError("incomplete beta continued fraction did not converge for "
        "a={!r}, b={!r}, x={!r}".format(a, b, x))

def reg_inc_beta(a, b, x):
    """Regularized incomplete beta function I_x(a, b)."""
    a = float(a)
    b = float(b)
    x = float(x)
    if not (a > 0 and b > 0 and math.isfinite(a) and math.isfinite(b)):
        raise DomainError("reg_inc_beta needs a > 0 and b > 0, got a={!r}, b={!r}".format(a, b))
    if not 0.0 <= x <= 1.0:
        raise DomainError("reg_inc_beta needs 0 <= x <= 1, got x={!r}".format(x))
    if x == 0.0:
        return 0.0
    if x == 1.0:
        return 1.0
    log_front = a * math.log(x) + b * math.log1p(-x) - betaln(a, b)
    if x > (a + 1.0) / (a + b + 2.0):
        result = 1.0 - math.exp(log_front) * _beta_continued_fraction(b, a, 1.0 - x) / b
    else:
        result = math.exp(log_front) * _beta_continued_fraction(a, b, x) / a
    return min(1.0, max(0.0, result))

def student_two_sided_p(t, df):
    """P(|T| >= |t|) for Student's t with ``df`` degrees of freedom."""
    if t == 0:
        return 1.0
    if abs(t) >= INFINITE_SEPARATION:
        return 0.0
    t2 = t * t
    if not math.isfinite(t2):
        return 0.0
    return reg_inc_beta(df / 2.0, 0.5, df / (df + t2))

def _t_test_columns(first, second, equal_var):
    # Column-wise t statistics and degrees of freedom. first and second are (n1, d) and
    # (n2, d) arrays. Every column's result depends only on that column.
    n1 = first.shape[0]
    n2 = second.shape[0]
    mean1 = first.mean(axis=0)
    mean2 = second.mean(axis=0)
    var1 = first.var(axis=0, ddof=1)
    var2 = second.var(axis=0, ddof=1)
    diff = mean1 - mean2
    if equal_var:
        pooled = ((n1 - 1) * var1 + (n2 - 1) * var2) / (n1 + n2 - 2)
        se2 = pooled * (1.0 / n1 + 1.0 / n2)
        df = np.full(diff.shape, float(n1 + n2 - 2))
    else:
        v1 = var1 / n1
        v2 = var2 / n2
        se2 = v1 + v2
        with np.errstate(divide='ignore', invalid='ignore'):
            df = se2 ** 2 / (v1 ** 2 / (n1 - 1) + v2 ** 2 / (n2 - 1))
    # A constant sample can still show a rounding variance (0.1 is not a double), so
    # constancy is read off the values themselves.
    constant = (np.ptp(first, axis=0) == 0) & (np.ptp(second, axis=0) == 0)
    diff = np.where(constant, first[0] - second[0], diff)
    degenerate = constant | (se2 == 0)
    with np.errstate(divide='ignore', invalid='ignore'):
        t = diff / np.sqrt(se2)
    t[degenerate & (diff == 0)] = 0.0
    separated = degenerate & (diff != 0)
    t[separated] = np.sign(diff[separated]) * INFINITE_SEPARATION
    df[degenerate] = n1 + n2 - 2
    return t, df

def _check_sample_sizes(n1, n2):
    if n1 < 2 or n2 < 2:
        raise ValidationError("t-test needs at least 2 observations per sample, got {} and {}".format(
            n1, n2))

def _single_t_test(xs, ys, equal_var):
    xs = np.asarray(xs, dtype=np.float64).reshape(-1, 1)
    ys = np.asarray(ys, dtype=np.float64).reshape(-1, 1)
    _check_sample_sizes(len(xs), len(ys))
    t, df = _t_test_columns(xs, ys, equal_var)
    t = float(t[0])
    df = float(df[0])
    return TTestResult(-1, t, df, student_two_sided_p(t, df))

def welch_t(xs, ys):
    """Welch's unequal-variance two-sample t-test."""
    return _single_t_test(xs, ys, equal_var=False)

def pooled_t(xs, ys):
    """Student's two-sample t-test with pooled variance."""
    return _single_t_test(xs, ys, equal_var=True)

def feature_pvalues(ds, obs_indices, equal_var=False):
    """Runs the t-test on every feature, splitting ``obs_indices`` by class."""
    obs_indices = np.asarray(obs_indices, dtype=np.intp)
    labels = ds.labels[obs_indices]
    present = np.unique(labels)
    if ds.n_classes > 2 or len(present) != 2:
        raise ValidationError("the t-test filter needs exactly two classes, got {}".format(
            len(present) if ds.n_classes <= 2 else ds.n_classes))
    first = ds.values[obs_indices[labels == present[0]]]
    second = ds.values[obs_indices[labels == present[1]]]
    _check_sample_sizes(len(first), len(second))
    t, df = _t_test_columns(first, second, equal_var)
    results = [TTestResult(j, float(t[j]), float(df[j]), student_two_sided_p(float(t[j]), float(df[j])))
        for j in range(ds.n_features)]
    logger.info("%s t-test on %d features (%d vs %d observations)",
        'pooled' if equal_var else 'Welch', ds.n_features, len(first), len(second))
    return results

def rank_by_pvalue(results):
    """Feature indices by ascending p, then descending |t|, then ascending index."""
    ordered = sorted(results, key=lambda r: (r.p, -abs(r.t), r.feature_index))
    return [r.feature_index for r in ordered]

def rank_by_tstat(results):
    """Feature indices by descending |t|, then ascending p, then ascending index."""
    ordered = sorted(results, key=lambda r: (-abs(r.t), r.p, r.feature_index))
    return [r.feature_index for r in ordered]

def pvalue_summary(results, thresholds=(0.05, 0.001)):
    return dict((threshold, sum(1 for r in results if r.p < threshold)) for threshold in thresholds)

class EcdfCurve(object):
    """Empirical CDF: ``evaluate(q)`` is the fraction of values ``<= q``."""
    def __init__(self, sorted_values, cumulative):
        self.sorted_values = sorted_values
        self.cumulative = cumulative

    def __len__(self):
        return len(self.sorted_values)

    def evaluate(self, q):
        count = np.searchsorted(self.sorted_values, q, side='right')
        return count / len(self.sorted_values)

    def points(self):
        return list(zip(self.sorted_values.tolist(), self.cumulative.tolist()))


def ecdf(values):
    values = np.asarray(values, dtype=np.float64).ravel()
    if values.size == 0:
        raise ValidationError("ecdf needs at least one value")
    if not np.all(np.isfinite(values)):
        raise ValidationError("ecdf needs finite values")
    sorted_values = np.sort(values, kind='stable')
    n = len(sorted_values)
    cumulative = np.arange(1, n + 1) / n
    sorted_values.setflags(write=False)
    cumulative.setflags(write=False)
    return EcdfCurve(sorted_values, cumulative)
