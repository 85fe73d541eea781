"""Experiment reports and the files they are written to.

Output directory layout::

    summary.csv   key,value rows (config echo, split, p-value counts, results)
    curve.csv     k,test_mce (filter curve; header only for wrapper runs)
    ecdf.csv      p,cumulative
    trace.csv     step,feature,size,cv_mean,fold_1..fold_k (header only for filter runs)
    plots/        curve.svg, ecdf.svg, trace.svg

Every number is formatted deterministically and timings are never written, so identical
inputs give byte-identical files.
"""

import logging
import os.path as op

from .dataset import write_csv
from .plots import LineChart
from .util import (ensure_dir, file_digest, format_float, format_mce, write_rows,
    write_with)

logger = logging.getLogger(__name__)

class ExperimentKind(object):
    Filter = 'filter'
    Wrapper = 'wrapper'

class ExperimentReport(object):
    """Everything an experiment run produced.

    ``split`` and ``ranking`` stay in memory for checks and library use; only what is listed
    in the module docstring goes to disk. ``elapsed`` is wall-clock seconds and is only
    logged.
    """
    def __init__(self, kind, config_items, dataset, split, ranking, pvalue_counts, ecdf,
            feasibility_bound, filter_curve=None, trace=None, selected_features=(),
            final_test_mce=None, elapsed=0.0):
        self.kind = kind
        self.config_items = list(config_items)
        self.dataset = dataset
        self.split = split
        self.ranking = list(ranking)
        self.pvalue_counts = pvalue_counts
        self.ecdf = ecdf
        self.feasibility_bound = feasibility_bound
        self.filter_curve = list(filter_curve or [])
        self.trace = trace
        self.selected_features = tuple(selected_features)
        self.final_test_mce = final_test_mce
        self.elapsed = elapsed

    def __repr__(self):
        return '<ExperimentReport {} selected={} mce={}>'.format(self.kind,
            len(self.selected_features), self.final_test_mce)

    @property
    def best_k(self):
        if not self.filter_curve:
            return None
        # Ties go to the smaller k.
        return min(self.filter_curve, key=lambda point: (point[1], point[0]))[0]

    def summary_rows(self):
        ds = self.dataset
        rows = list(self.config_items)
        rows += [
            ('n_obs', ds.n_obs),
            ('n_features', ds.n_features),
            ('n_classes', ds.n_classes),
        ]
        rows += [('label_%d' % i, name) for i, name in enumerate(ds.class_names)]
        rows += [
            ('train_count', len(self.split.train_indices)),
            ('test_count', len(self.split.test_indices)),
            ('feasibility_bound', self.feasibility_bound),
        ]
        for threshold in sorted(self.pvalue_counts, reverse=True):
            rows.append(('pvalues_below_%g' % threshold, self.pvalue_counts[threshold]))
        if self.kind == ExperimentKind.Filter:
            best = dict(self.filter_curve).get(self.best_k)
            rows += [
                ('curve_points', len(self.filter_curve)),
                ('best_k', self.best_k),
                ('best_k_test_mce', format_mce(best) if best is not None else ''),
            ]
        if self.trace is not None:
            rows += [
                ('steps', len(self.trace.steps)),
                ('stop_reason', self.trace.stop_reason),
            ]
        rows += [
            ('selected_size', len(self.selected_features)),
            ('selected_features', ';'.join(str(j) for j in self.selected_features)),
            ('selected_names', ';'.join(ds.feature_name(j) for j in self.selected_features)),
            ('final_test_mce', format_mce(self.final_test_mce)),
        ]
        return [(key, str(value)) for key, value in rows]

    def trace_rows(self):
        fold_count = 0
        if self.trace is not None and self.trace.steps:
            fold_count = len(self.trace.steps[0].per_fold)
        header = ['step', 'feature', 'size', 'cv_mean'] + ['fold_%d' % (i + 1)
            for i in range(fold_count)]
        rows = [header]
        if self.trace is not None:
            for number, step in enumerate(self.trace.steps, start=1):
                feature = '' if step.feature is None else str(step.feature)
                rows.append([str(number), feature, str(len(step.subset)), format_float(step.score)]
                    + [format_float(v) for v in step.per_fold])
        return rows


class ComparisonReport(object):
    """Filter and wrapper results under both classifiers, keyed by ``(approach, 'qda'|'lda')``."""
    APPROACHES = (ExperimentKind.Filter, ExperimentKind.Wrapper)
    CLASSIFIERS = ('qda', 'lda')

    def __init__(self, reports):
        self.reports = reports

    def table_rows(self):
        rows = [['approach'] + list(self.CLASSIFIERS)]
        for approach in self.APPROACHES:
            rows.append([approach] + [format_mce(self.reports[(approach, c)].final_test_mce)
                for c in self.CLASSIFIERS])
        return rows


#--- Emission
def curve_chart(report):
    chart = LineChart("Test MCE by number of top-ranked features", "features (k)", "test MCE")
    chart.add_series(report.filter_curve, markers=True)
    return chart

def ecdf_chart(report):
    chart = LineChart("Empirical CDF of p-values", "p-value", "fraction of features",
        xrange=(0.0, 1.0), yrange=(0.0, 1.0))
    chart.add_series([(0.0, 0.0)] + report.ecdf.points(), steps=True)
    return chart

def trace_chart(report):
    chart = LineChart("Selection criterion by subset size", "subset size", "criterion")
    steps = report.trace.steps if report.trace is not None else []
    chart.add_series([(len(step.subset), step.score) for step in steps], markers=True)
    return chart

def emit_report(report, out_dir):
    """Writes the report files under ``out_dir``; returns their paths."""
    ensure_dir(out_dir)
    plots = ensure_dir(op.join(out_dir, 'plots'))
    written = [
        write_rows(op.join(out_dir, 'summary.csv'), [('key', 'value')] + report.summary_rows()),
        write_rows(op.join(out_dir, 'curve.csv'), [('k', 'test_mce')] +
            [(str(k), format_float(v)) for k, v in report.filter_curve]),
        write_rows(op.join(out_dir, 'ecdf.csv'), [('p', 'cumulative')] +
            [(format_float(p), format_float(c)) for p, c in report.ecdf.points()]),
        write_rows(op.join(out_dir, 'trace.csv'), report.trace_rows()),
        write_with(curve_chart(report).save, op.join(plots, 'curve.svg')),
        write_with(ecdf_chart(report).save, op.join(plots, 'ecdf.svg')),
        write_with(trace_chart(report).save, op.join(plots, 'trace.svg')),
    ]
    logger.info("wrote %d files to %s", len(written), out_dir)
    if logger.isEnabledFor(logging.DEBUG):
        for path in written:
            logger.debug("%s sha256 %s", path, file_digest(path))
    return written

def emit_comparison(comparison, out_dir):
    """Writes ``table.csv`` and one report directory per run, e.g. ``wrapper-qda/``."""
    ensure_dir(out_dir)
    written = [write_rows(op.join(out_dir, 'table.csv'), comparison.table_rows())]
    for (approach, classifier) in sorted(comparison.reports):
        subdir = op.join(out_dir, '{}-{}'.format(approach, classifier))
        written += emit_report(comparison.reports[(approach, classifier)], subdir)
    return written

def emit_dataset(ds, out_dir, planted):
    """Writes ``data.csv`` (label column ``label``) and ``planted.csv`` for the synth command."""
    ensure_dir(out_dir)
    data_path = op.join(out_dir, 'data.csv')
    write_with(lambda path: write_csv(ds, path), data_path)
    planted_path = write_rows(op.join(out_dir, 'planted.csv'),
        [('feature', )] + [(str(j), ) for j in planted])
    return [data_path, planted_path]
