"""Gaussian discriminant classifiers: LDA (pooled covariance) and QDA (per-class covariance)."""

from __future__ import division

import logging

import numpy as np
import scipy.linalg as la

from .errors import FeasibilityError, SingularityError, ValidationError

logger = logging.getLogger(__name__)

class Kind(object):
    Linear = 'linear'
    Quadratic = 'quadratic'

    ALL = (Linear, Quadratic)
    # Command line spelling.
    ALIASES = {'lda': Linear, 'qda': Quadratic, Linear: Linear, Quadratic: Quadratic}

    @staticmethod
    def normalize(kind):
        try:
            return Kind.ALIASES[kind]
        except KeyError:
            raise ValidationError("unknown classifier kind {!r}".format(kind))

    @staticmethod
    def short(kind):
        return 'lda' if Kind.normalize(kind) == Kind.Linear else 'qda'

# A Cholesky pivot whose square is this small relative to its own diagonal entry means that
# column is a linear combination of the previous ones, up to rounding. The ratio does not
# depend on the units of the features.
PIVOT_TOLERANCE = 1e-13

def max_features(class_counts, kind):
    """Largest subset size a ridge-free fit can handle.

    QDA needs ``n_c >= d + 1`` in every class, LDA needs ``n - n_classes >= d``.
    """
    kind = Kind.normalize(kind)
    counts = [int(c) for c in class_counts]
    if kind == Kind.Quadratic:
        return min(counts) - 1
    else:
        return sum(counts) - len(counts)

def cholesky_factor(matrix, which):
    """Lower Cholesky factor of ``matrix``; :class:`SingularityError` names ``which`` on failure."""
    try:
        factor = la.cholesky(matrix, lower=True, check_finite=True)
    except (la.LinAlgError, ValueError):
        raise SingularityError("covariance of {} is not positive definite".format(which), which)
    pivots = np.diag(factor) ** 2
    scale = np.maximum(np.diag(matrix), np.finfo(float).tiny)
    if not np.all(np.isfinite(pivots)) or np.any(pivots <= PIVOT_TOLERANCE * scale):
        raise SingularityError("covariance of {} is singular".format(which), which)
    return factor

def log_det(factor):
    return 2.0 * float(np.sum(np.log(np.diag(factor))))

class DiscriminantModel(object):
    """A fitted Gaussian discriminant.

    ``covariance_factors`` holds one lower Cholesky factor per class (quadratic) or a single
    shared one (linear); ``log_dets`` follows the same layout.
    """
    def __init__(self, kind, feature_subset, class_means, covariance_factors, log_dets, log_priors,
            ridge, class_counts):
        self.kind = kind
        self.feature_subset = tuple(int(j) for j in feature_subset)
        self.class_means = class_means
        self.covariance_factors = covariance_factors
        self.log_dets = log_dets
        self.log_priors = log_priors
        self.ridge = ridge
        self.class_counts = class_counts

    def __repr__(self):
        return '<DiscriminantModel {} d={} counts={}>'.format(self.kind, self.dimension,
            list(self.class_counts))

    @property
    def dimension(self):
        return len(self.feature_subset)

    @property
    def n_classes(self):
        return len(self.log_priors)

    def _factor(self, c):
        if self.kind == Kind.Linear:
            return self.covariance_factors[0], self.log_dets[0]
        return self.covariance_factors[c], self.log_dets[c]

    def scores(self, rows):
        """Discriminant scores, shape ``(n_rows, n_classes)``.

        score_c(x) = -1/2 log|S_c| - 1/2 (x - m_c)' S_c^-1 (x - m_c) + log prior_c
        """
        rows = np.atleast_2d(np.asarray(rows, dtype=np.float64))
        if rows.shape[1] != self.dimension:
            raise ValidationError("expected rows of length {}, got {}".format(self.dimension,
                rows.shape[1]))
        result = np.empty((rows.shape[0], self.n_classes))
        for c in range(self.n_classes):
            factor, logdet = self._factor(c)
            centered = rows - self.class_means[c]
            whitened = la.solve_triangular(factor, centered.T, lower=True)
            mahalanobis = np.sum(whitened ** 2, axis=0)
            result[:, c] = -0.5 * logdet - 0.5 * mahalanobis + self.log_priors[c]
        return result

    def predict_many(self, rows):
        # argmax returns the first maximum, so ties go to the lower class id.
        return np.argmax(self.scores(rows), axis=1)


def fit(ds, obs_indices, feature_subset, kind, ridge=0.0):
    kind = Kind.normalize(kind)
    ridge = float(ridge)
    if ridge < 0:
        raise ValidationError("ridge must be >= 0, got {}".format(ridge))
    obs_indices = np.asarray(obs_indices, dtype=np.intp)
    feature_subset = [int(j) for j in feature_subset]
    d_sub = len(feature_subset)
    if d_sub < 1:
        raise ValidationError("can't fit a classifier on an empty feature subset")
    if min(feature_subset) < 0 or max(feature_subset) >= ds.n_features:
        raise ValidationError("feature subset out of range [0, {})".format(ds.n_features))
    counts = ds.class_counts(obs_indices)
    if np.any(counts < 2):
        raise FeasibilityError("every class needs at least 2 observations, got counts {}".format(
            list(counts)))
    bound = max_features(counts, kind)
    if ridge == 0 and d_sub > bound:
        raise FeasibilityError("{} features are too many for {} with class counts {}".format(
            d_sub, kind, list(counts)), bound)
    values = ds.submatrix(obs_indices, feature_subset)
    labels = ds.labels[obs_indices]
    n_classes = ds.n_classes
    means = np.empty((n_classes, d_sub))
    scatters = []
    for c in range(n_classes):
        members = values[labels == c]
        means[c] = members.mean(axis=0)
        centered = members - means[c]
        scatters.append(centered.T.dot(centered))
    ridge_term = ridge * np.eye(d_sub)
    if kind == Kind.Linear:
        pooled = sum(scatters) / (len(obs_indices) - n_classes) + ridge_term
        factors = [cholesky_factor(pooled, 'pooled')]
    else:
        factors = [cholesky_factor(scatter / (counts[c] - 1) + ridge_term, 'class %d' % c)
            for c, scatter in enumerate(scatters)]
    log_dets = np.array([log_det(factor) for factor in factors])
    log_priors = np.log(counts / counts.sum())
    return DiscriminantModel(kind, feature_subset, means, factors, log_dets, log_priors, ridge,
        counts)

def predict(model, row):
    row = np.asarray(row, dtype=np.float64)
    if row.ndim != 1 or len(row) != model.dimension:
        raise ValidationError("expected a row of length {}, got shape {}".format(model.dimension,
            row.shape))
    if not np.all(np.isfinite(row)):
        raise ValidationError("row contains non-finite values")
    return int(model.predict_many(row[np.newaxis, :])[0])

def misclassified(model, ds, obs_indices):
    obs_indices = np.asarray(obs_indices, dtype=np.intp)
    predictions = model.predict_many(ds.submatrix(obs_indices, model.feature_subset))
    return int(np.sum(predictions != ds.labels[obs_indices]))

def mce(model, ds, obs_indices):
    """Misclassified count divided by the number of observations."""
    obs_indices = np.asarray(obs_indices, dtype=np.intp)
    if obs_indices.size == 0:
        raise ValidationError("mce needs at least one observation")
    return misclassified(model, ds, obs_indices) / len(obs_indices)
