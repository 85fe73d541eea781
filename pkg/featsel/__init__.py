from __future__ import print_function

import logging
import sys

from .config import parse_config
from .errors import ConfigError, FeatselError
from .pipeline import (load_dataset, planted_features, run_comparison, run_filter_experiment,
    run_wrapper_experiment)
from .report import emit_comparison, emit_dataset, emit_report

__version__ = '0.1.0'

LOG_LEVELS = [logging.WARNING, logging.INFO, logging.DEBUG]

def _run(cfg):
    if cfg.command == 'synth':
        ds = load_dataset(cfg)
        emit_dataset(ds, cfg.out_dir, planted_features(cfg))
        print("wrote {}x{} dataset to {}".format(ds.n_obs, ds.n_features, cfg.out_dir))
    elif cfg.command == 'compare':
        comparison = run_comparison(cfg)
        emit_comparison(comparison, cfg.out_dir)
        for row in comparison.table_rows():
            print('{:<10}{:>8}{:>8}'.format(*row))
    else:
        if cfg.command == 'filter':
            report = run_filter_experiment(cfg)
            print("best k: {}".format(report.best_k))
        else:
            report = run_wrapper_experiment(cfg)
            print("selected: {}".format(' '.join(report.dataset.feature_name(j)
                for j in report.selected_features)))
        emit_report(report, cfg.out_dir)
        print("final test MCE: {:.4f}".format(report.final_test_mce))

def main(argv=None):
    if argv is None:
        argv = sys.argv[1:]
    try:
        cfg = parse_config(argv)
    except ConfigError as e:
        print("featsel: error: {}".format(e), file=sys.stderr)
        return 2
    level = LOG_LEVELS[min(cfg.verbosity, len(LOG_LEVELS) - 1)]
    logging.basicConfig(level=level, stream=sys.stderr,
        format='%(levelname)s %(name)s: %(message)s')
    try:
        _run(cfg)
    except ConfigError as e:
        print("featsel: error: {}".format(e), file=sys.stderr)
        return 2
    except FeatselError as e:
        print("featsel: error: {}".format(e), file=sys.stderr)
        return 1
    return 0
