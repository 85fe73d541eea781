"""The two end-to-end experiments: the filter curve and filter-then-wrapper selection.

Only the training portion of the holdout split is used for p-values, rankings, folds and
fitting. The test portion is touched once per fitted model, to compute its test MCE.
"""

from __future__ import division

import logging
import os.path as op
import time
from contextlib import contextmanager

from .config import CsvSource, Criterion, RankBy, TTestKind
from .dataset import (derive_seed, holdout_split, load_csv, stratified_folds,
    synthetic_gaussian)
from .discriminant import Kind, fit, max_features, mce
from .errors import FeatselError, PipelineError, SingularityError, ValidationError
from .report import ComparisonReport, ExperimentKind, ExperimentReport
from .selection import (CrossValidatedError, Direction, MahalanobisCriterion,
    sequential_select)
from .ttest import ecdf, feature_pvalues, pvalue_summary, rank_by_pvalue, rank_by_tstat

logger = logging.getLogger(__name__)

# Sub-stream of the run seed used for the cross-validation folds. The holdout split uses
# the run seed itself.
FOLD_STREAM = 1

class Stage(object):
    Load = 'load'
    Split = 'split'
    Filter = 'filter'
    Curve = 'curve'
    Folds = 'folds'
    Selection = 'selection'
    Refit = 'refit'

@contextmanager
def stage(name):
    # Annotates component errors with the stage they happened in.
    try:
        yield
    except PipelineError:
        raise
    except FeatselError as e:
        raise PipelineError(name, e)

def load_dataset(cfg):
    source = cfg.data_source
    with stage(Stage.Load):
        if isinstance(source, CsvSource):
            return load_csv(source.path, source.label_column)
        return synthetic_gaussian(source.n_per_class, source.features, source.informative,
            source.delta, source.covariance_mode, source.seed, source.variance_ratio)

def planted_features(cfg):
    """Informative features of a synthetic data source; empty for CSV data."""
    if isinstance(cfg.data_source, CsvSource):
        return ()
    return tuple(sorted(set(cfg.data_source.informative)))

class _Ranking(object):
    # Split, t-test results and feature ranking shared by both experiments.
    def __init__(self, cfg, ds, prefilter):
        cfg.check_against(ds, prefilter)
        with stage(Stage.Split):
            self.split = holdout_split(ds, cfg.resolved_train_count(ds.n_obs), cfg.stratified,
                cfg.seed)
        train = self.split.train_indices
        logger.info("holdout split: %d training, %d test observations", len(train),
            len(self.split.test_indices))
        with stage(Stage.Filter):
            self.results = feature_pvalues(ds, train, equal_var=cfg.ttest == TTestKind.Pooled)
            if cfg.rank_by == RankBy.TStat:
                self.ranking = rank_by_tstat(self.results)
            else:
                self.ranking = rank_by_pvalue(self.results)
            self.ecdf = ecdf([r.p for r in self.results])
        self.pvalue_counts = pvalue_summary(self.results)
        self.bound = max_features(ds.class_counts(train), cfg.classifier)
        logger.info("%s", ', '.join('%d features with p < %g' % (count, threshold)
            for threshold, count in sorted(self.pvalue_counts.items(), reverse=True)))


def _load(cfg, dataset):
    return dataset if dataset is not None else load_dataset(cfg)

def _feasible_grid(cfg, ds, bound):
    limit = ds.n_features if cfg.ridge > 0 else min(ds.n_features, bound)
    grid = [k for k in cfg.filter_grid if k <= limit]
    dropped = [k for k in cfg.filter_grid if k > limit]
    if dropped:
        logger.warning("dropping grid points %s above the feasibility limit of %d features",
            ', '.join(str(k) for k in dropped), limit)
    if not grid:
        raise PipelineError(Stage.Curve, ValidationError("no grid point is within the "
            "feasibility limit of {} features (max_features bound: {})".format(limit, bound)))
    return grid

def run_filter_experiment(cfg, dataset=None):
    """Test MCE of the classifier on the top-k ranked features, for every k of the grid."""
    started = time.perf_counter()
    ds = _load(cfg, dataset)
    ranked = _Ranking(cfg, ds, prefilter=False)
    train = ranked.split.train_indices
    test = ranked.split.test_indices
    curve = []
    with stage(Stage.Curve):
        for k in _feasible_grid(cfg, ds, ranked.bound):
            try:
                model = fit(ds, train, ranked.ranking[:k], cfg.classifier, cfg.ridge)
            except SingularityError as e:
                logger.warning("skipping k=%d: %s", k, e)
                continue
            curve.append((k, mce(model, ds, test)))
            logger.info("k=%d: test MCE %.4f", k, curve[-1][1])
    if not curve:
        raise PipelineError(Stage.Curve, ValidationError("every grid point was singular"))
    report = ExperimentReport(ExperimentKind.Filter, cfg.items(), ds, ranked.split,
        ranked.ranking, ranked.pvalue_counts, ranked.ecdf, ranked.bound, filter_curve=curve)
    report.selected_features = tuple(ranked.ranking[:report.best_k])
    report.final_test_mce = dict(curve)[report.best_k]
    report.elapsed = time.perf_counter() - started
    logger.info("filter (%s): best k=%d with test MCE %.4f (%.1fs)", Kind.short(cfg.classifier),
        report.best_k, report.final_test_mce, report.elapsed)
    return report

def _wrapper_evaluator(cfg, ds, train, folds, refit_bound):
    if cfg.criterion == Criterion.Mahalanobis:
        # J needs n_train - 2 >= d; the final refit needs the classifier bound.
        bound = len(train) - 2
        if cfg.ridge == 0:
            bound = min(bound, refit_bound)
        return MahalanobisCriterion(ds, train), bound
    evaluator = CrossValidatedError(ds, train, folds, cfg.classifier, cfg.ridge)
    bound = evaluator.bound() if cfg.ridge == 0 else None
    return evaluator, bound

def run_wrapper_experiment(cfg, dataset=None):
    """Prefilters the top ``prefilter_k`` ranked features and runs forward selection on them.

    The selected subset is refit on the whole training portion and scored on the test
    portion.
    """
    started = time.perf_counter()
    ds = _load(cfg, dataset)
    ranked = _Ranking(cfg, ds, prefilter=True)
    train = ranked.split.train_indices
    candidates = ranked.ranking[:cfg.prefilter_k]
    with stage(Stage.Folds):
        folds = stratified_folds(train, ds.labels[train], cfg.folds,
            derive_seed(cfg.seed, FOLD_STREAM))
    evaluator, bound = _wrapper_evaluator(cfg, ds, train, folds, ranked.bound)
    max_size = cfg.stop.max_size
    if max_size is None:
        max_size = len(candidates) if bound is None else max(1, min(len(candidates), bound))
    logger.info("wrapper: %d candidates, max subset size %d", len(candidates), max_size)
    with stage(Stage.Selection):
        trace = sequential_select(ds, train, candidates, Direction.Forward, evaluator,
            cfg.stop, max_size, cfg.workers)
    with stage(Stage.Refit):
        model = fit(ds, train, trace.selected, cfg.classifier, cfg.ridge)
        final = mce(model, ds, ranked.split.test_indices)
    report = ExperimentReport(ExperimentKind.Wrapper, cfg.items(), ds, ranked.split,
        ranked.ranking, ranked.pvalue_counts, ranked.ecdf, ranked.bound, trace=trace,
        selected_features=trace.selected, final_test_mce=final)
    report.elapsed = time.perf_counter() - started
    logger.info("wrapper (%s): %d features selected, test MCE %.4f (%.1fs)",
        Kind.short(cfg.classifier), len(trace.selected), final, report.elapsed)
    return report

def run_experiment(cfg, dataset=None):
    if cfg.command == ExperimentKind.Filter:
        return run_filter_experiment(cfg, dataset)
    return run_wrapper_experiment(cfg, dataset)

def run_comparison(cfg, dataset=None):
    """Filter and wrapper experiments under QDA and LDA, on the same data and split."""
    ds = _load(cfg, dataset)
    reports = {}
    for approach in ComparisonReport.APPROACHES:
        for classifier in ComparisonReport.CLASSIFIERS:
            sub = cfg.derive(command=approach, classifier=classifier,
                out_dir=op.join(cfg.out_dir, '{}-{}'.format(approach, classifier)))
            reports[(approach, classifier)] = run_experiment(sub, ds)
    return ComparisonReport(reports)
