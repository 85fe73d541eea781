"""Wrapper engine: cross-validated subset scoring and sequential search.

Evaluators are losses (lower is better). A criterion that should be maximised, like the
Mahalanobis separation J, is plugged in negated.
"""

from __future__ import division

import itertools
import logging
import math
from collections import namedtuple
from concurrent.futures import ThreadPoolExecutor

import numpy as np
import scipy.linalg as la

from .discriminant import fit, mce, max_features, cholesky_factor, Kind
from .errors import (FeasibilityError, SingularityError, SelectionError, ValidationError)

logger = logging.getLogger(__name__)

EXHAUSTIVE_CAP = 200000

Score = namedtuple('Score', 'value per_fold')
# feature is the index added (forward) or removed (backward); None for the initial full set
# of a backward search.
Step = namedtuple('Step', 'feature subset score per_fold')

class Direction(object):
    Forward = 'forward'
    Backward = 'backward'

class StopMode(object):
    FirstLocalMin = 'first-local-min'
    RangeMin = 'range-min'

    ALIASES = {'local-min': FirstLocalMin, 'range-min': RangeMin, FirstLocalMin: FirstLocalMin}

    @staticmethod
    def normalize(mode):
        try:
            return StopMode.ALIASES[mode]
        except KeyError:
            raise ValidationError("unknown stop rule {!r}".format(mode))

class StopReason(object):
    FirstLocalMin = 'first-local-min'
    MaxSizeReached = 'max-size-reached'
    CandidatesExhausted = 'candidates-exhausted'
    RangeMin = 'range-min'

class StopRule(object):
    """When a sequential search stops and which of its steps it keeps.

    ``first-local-min`` stops as soon as a step scores strictly worse than the previous one;
    equal scores keep the search going. ``range-min`` runs to ``max_size`` and keeps the best
    step. In both modes ties go to the smaller subset when ``prefer_smaller`` is set.
    ``max_size`` of None lets the caller decide.
    """
    def __init__(self, mode=StopMode.FirstLocalMin, max_size=None, prefer_smaller=True):
        self.mode = StopMode.normalize(mode)
        if max_size is not None and max_size < 1:
            raise ValidationError("max_size must be at least 1, got {}".format(max_size))
        self.max_size = max_size
        self.prefer_smaller = prefer_smaller

    def __repr__(self):
        return '<StopRule {} max_size={}>'.format(self.mode, self.max_size)

    def designated(self, steps):
        """Index of the step the rule keeps among ``steps``."""
        best = min(step.score for step in steps)
        matching = [i for i, step in enumerate(steps) if step.score == best]
        size = lambda i: len(steps[i].subset)
        return min(matching, key=size) if self.prefer_smaller else max(matching, key=size)


class SelectionTrace(object):
    def __init__(self, direction, steps, stop_reason, selected_step):
        self.direction = direction
        self.steps = steps
        self.stop_reason = stop_reason
        self.selected_step = selected_step

    def __repr__(self):
        return '<SelectionTrace {} steps={} selected={} ({})>'.format(self.direction,
            len(self.steps), list(self.selected), self.stop_reason)

    @property
    def selected(self):
        if self.selected_step is None:
            return ()
        return self.steps[self.selected_step].subset

    @property
    def scores(self):
        return [step.score for step in self.steps]


#--- Evaluators
def cv_mce(ds, train_indices, subset, folds, kind, ridge=0.0):
    """Mean misclassification error over the folds of ``folds``.

    Fold k's model is fit on ``train_indices`` minus fold k and scored on fold k. Returns
    ``(mean, per_fold)``; the mean is unweighted.
    """
    if set(np.asarray(train_indices).tolist()) != set(folds.indices.tolist()):
        raise ValidationError("fold assignment does not cover the training indices")
    per_fold = []
    for k in range(folds.k):
        fold = folds.fold_indices(k)
        if len(fold) == 0:
            raise ValidationError("fold {} is empty".format(k))
        try:
            model = fit(ds, folds.train_indices(k), subset, kind, ridge)
        except FeasibilityError as e:
            error = FeasibilityError("fold {}: {}".format(k, e))
            error.bound = e.bound
            raise error
        except SingularityError as e:
            bound = max_features(ds.class_counts(folds.train_indices(k)), kind)
            raise SingularityError("fold {}: {} (max_features bound: {})".format(k, e, bound),
                e.which)
        per_fold.append(mce(model, ds, fold))
    return sum(per_fold) / len(per_fold), per_fold

class CrossValidatedError(object):
    """``cv_mce`` bound to a dataset, its folds and a classifier."""
    def __init__(self, ds, train_indices, folds, kind, ridge=0.0):
        self.ds = ds
        self.train_indices = train_indices
        self.folds = folds
        self.kind = Kind.normalize(kind)
        self.ridge = ridge

    def __call__(self, subset):
        mean, per_fold = cv_mce(self.ds, self.train_indices, subset, self.folds, self.kind,
            self.ridge)
        return Score(mean, tuple(per_fold))

    def bound(self):
        """Largest subset every fold's training portion can fit without ridge."""
        return min(max_features(self.ds.class_counts(self.folds.train_indices(k)), self.kind)
            for k in range(self.folds.k))


def mahalanobis_J(ds, obs_indices, subset):
    """(m1 - m0)' S^-1 (m1 - m0) with S the pooled within-class covariance over ``subset``."""
    obs_indices = np.asarray(obs_indices, dtype=np.intp)
    labels = ds.labels[obs_indices]
    classes = np.unique(labels)
    if len(classes) != 2:
        raise ValidationError("J needs exactly two classes, got {}".format(len(classes)))
    values = ds.submatrix(obs_indices, subset)
    first = values[labels == classes[0]]
    second = values[labels == classes[1]]
    if len(first) < 2 or len(second) < 2:
        raise ValidationError("J needs at least 2 observations per class")
    scatter = np.zeros((values.shape[1], values.shape[1]))
    for members in (first, second):
        centered = members - members.mean(axis=0)
        scatter += centered.T.dot(centered)
    dof = len(obs_indices) - 2
    if dof < values.shape[1]:
        raise SingularityError("pooled covariance of {} features from {} observations is "
            "singular".format(values.shape[1], len(obs_indices)), 'pooled')
    factor = cholesky_factor(scatter / dof, 'pooled')
    whitened = la.solve_triangular(factor, second.mean(axis=0) - first.mean(axis=0), lower=True)
    return float(np.dot(whitened, whitened))

class MahalanobisCriterion(object):
    """Negated J, so that the selection engine can minimise it."""
    def __init__(self, ds, train_indices):
        self.ds = ds
        self.train_indices = train_indices

    def __call__(self, subset):
        return Score(-mahalanobis_J(self.ds, self.train_indices, subset), ())


def _as_score(result):
    if isinstance(result, Score):
        return result
    return Score(float(result), ())

#--- Search
class _CandidatePool(object):
    # Scores all candidate subsets of one step, in candidate order. Infeasible subsets come
    # back as None.
    def __init__(self, evaluator, workers):
        self.evaluator = evaluator
        self.workers = max(1, int(workers))
        self.executor = None

    def __enter__(self):
        if self.workers > 1:
            self.executor = ThreadPoolExecutor(max_workers=self.workers)
        return self

    def __exit__(self, *exc_info):
        if self.executor is not None:
            self.executor.shutdown()

    def _evaluate(self, subset):
        try:
            return _as_score(self.evaluator(subset))
        except (FeasibilityError, SingularityError) as e:
            logger.debug("skipping subset %s: %s", list(subset), e)
            return None

    def evaluate(self, subsets):
        if self.executor is None:
            return [self._evaluate(subset) for subset in subsets]
        return list(self.executor.map(self._evaluate, subsets))


def _best(changes, scores):
    # Lowest score wins; ties go to the earliest change in candidate order.
    best = None
    for change, score in zip(changes, scores):
        if score is None:
            continue
        if best is None or score.value < best[1].value:
            best = (change, score)
    return best

def _check_candidates(ds, candidates):
    candidates = [int(c) for c in candidates]
    if not candidates:
        raise ValidationError("no candidate features")
    if len(set(candidates)) != len(candidates):
        raise ValidationError("candidate features contain duplicates")
    if min(candidates) < 0 or max(candidates) >= ds.n_features:
        raise ValidationError("candidate features out of range [0, {})".format(ds.n_features))
    return candidates

def sequential_select(ds, train_indices, candidates, direction, evaluator, stop, max_size=None,
        workers=1):
    """Greedy sequential forward (or backward) selection over ``candidates``.

    Forward search starts from the empty set and adds, at each step, the candidate whose
    addition gives the lowest evaluator score. Backward search starts from all candidates
    and removes one feature per step. ``max_size`` (or ``stop.max_size``) is the largest
    subset reached going forward and the smallest one going backward.
    """
    candidates = _check_candidates(ds, candidates)
    if max_size is None:
        max_size = stop.max_size
    logger.info("%s selection over %d candidates (%d training observations), stop=%s",
        direction, len(candidates), len(train_indices), stop.mode)
    with _CandidatePool(evaluator, workers) as pool:
        if direction == Direction.Forward:
            return _forward(candidates, pool, stop, max_size)
        elif direction == Direction.Backward:
            return _backward(candidates, pool, stop, max_size)
        raise ValidationError("unknown direction {!r}".format(direction))

def _log_step(step, skipped):
    logger.info("step %d: feature %s -> score %.6f%s", len(step.subset), step.feature,
        step.score, " (%d infeasible skipped)" % skipped if skipped else '')

def _worsened(steps):
    return len(steps) >= 2 and steps[-1].score > steps[-2].score

def _forward(candidates, pool, stop, max_size):
    limit = len(candidates) if max_size is None else min(int(max_size), len(candidates))
    if limit < 1:
        raise ValidationError("max_size must be at least 1")
    current = []
    remaining = list(candidates)
    steps = []
    reason = None
    while len(current) < limit:
        subsets = [tuple(current + [feature]) for feature in remaining]
        scores = pool.evaluate(subsets)
        best = _best(remaining, scores)
        if best is None:
            if not steps:
                raise SelectionError("no candidate subset of size 1 is feasible")
            reason = StopReason.CandidatesExhausted
            break
        feature, score = best
        current.append(feature)
        remaining.remove(feature)
        steps.append(Step(feature, tuple(current), score.value, score.per_fold))
        _log_step(steps[-1], sum(1 for s in scores if s is None))
        if stop.mode == StopMode.FirstLocalMin and _worsened(steps):
            reason = StopReason.FirstLocalMin
            break
    if reason is None:
        if stop.mode == StopMode.RangeMin:
            reason = StopReason.RangeMin
        else:
            reason = StopReason.MaxSizeReached
    return _finish(Direction.Forward, steps, reason, stop)

def _backward(candidates, pool, stop, max_size):
    floor = 1 if max_size is None else int(max_size)
    if not 1 <= floor <= len(candidates):
        raise ValidationError("backward max_size must be within [1, {}]".format(len(candidates)))
    current = list(candidates)
    initial = pool.evaluate([tuple(current)])[0]
    if initial is None:
        raise SelectionError("the full candidate set of {} features is infeasible".format(
            len(current)))
    steps = [Step(None, tuple(current), initial.value, initial.per_fold)]
    reason = None
    while len(current) > floor:
        subsets = [tuple(f for f in current if f != feature) for feature in current]
        scores = pool.evaluate(subsets)
        best = _best(current, scores)
        if best is None:
            reason = StopReason.CandidatesExhausted
            break
        feature, score = best
        current.remove(feature)
        steps.append(Step(feature, tuple(current), score.value, score.per_fold))
        _log_step(steps[-1], sum(1 for s in scores if s is None))
        if stop.mode == StopMode.FirstLocalMin and _worsened(steps):
            reason = StopReason.FirstLocalMin
            break
    if reason is None:
        if stop.mode == StopMode.RangeMin:
            reason = StopReason.RangeMin
        else:
            reason = StopReason.MaxSizeReached
    return _finish(Direction.Backward, steps, reason, stop)

def _finish(direction, steps, reason, stop):
    selected = stop.designated(steps)
    trace = SelectionTrace(direction, steps, reason, selected)
    logger.info("selection stopped (%s) after %d steps; kept %d features with score %.6f",
        reason, len(steps), len(trace.selected), steps[selected].score)
    return trace

def exhaustive_best_subset(ds, train_indices, candidates, size, evaluator, cap=EXHAUSTIVE_CAP):
    """Exact argmin of ``evaluator`` over all ``size``-subsets of ``candidates``.

    Subsets are visited in lexicographic order of the sorted candidates and the first minimum
    is kept. Refuses to run when there are more than ``cap`` combinations.
    """
    candidates = sorted(_check_candidates(ds, candidates))
    size = int(size)
    if not 1 <= size <= len(candidates):
        raise ValidationError("size must be within [1, {}], got {}".format(len(candidates), size))
    count = math.comb(len(candidates), size)
    if count > cap:
        raise SelectionError("exhaustive search over {} subsets exceeds the cap of {}".format(
            count, cap))
    best = None
    for subset in itertools.combinations(candidates, size):
        try:
            score = _as_score(evaluator(subset))
        except (FeasibilityError, SingularityError) as e:
            logger.debug("skipping subset %s: %s", list(subset), e)
            continue
        if best is None or score.value < best[1]:
            best = (subset, score.value)
    if best is None:
        raise SelectionError("no feasible subset of size {}".format(size))
    return best
