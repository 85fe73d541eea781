"""Experiment configuration: defaults, ``key = value`` config files and the command line.

Values are layered: built-in defaults, then the config file given with ``--config``, then
command line flags.
"""

from argparse import ArgumentParser, SUPPRESS
from collections import namedtuple

from .dataset import CovarianceMode, SEED_LIMIT
from .discriminant import Kind
from .errors import ConfigError, UsageError, ValidationError
from .selection import StopRule, StopMode
from .util import parse_grid, parse_index_set

COMMANDS = ['filter', 'wrapper', 'synth', 'compare']

CsvSource = namedtuple('CsvSource', 'path label_column')
SyntheticSource = namedtuple('SyntheticSource',
    'n_per_class features informative delta covariance_mode variance_ratio seed')

class TTestKind(object):
    Welch = 'welch'
    Pooled = 'pooled'

class RankBy(object):
    PValue = 'p'
    TStat = 't'

class Criterion(object):
    CrossValidatedError = 'cv-mce'
    Mahalanobis = 'mahalanobis'

def _int(token):
    return int(token)

def _float(token):
    return float(token)

def _bool(token):
    lowered = str(token).strip().lower()
    if lowered in {'1', 'true', 'yes', 'on'}:
        return True
    if lowered in {'0', 'false', 'no', 'off'}:
        return False
    raise ValueError(token)

def _pair(token):
    parts = [int(p) for p in str(token).split(',')]
    if len(parts) != 2:
        raise ValueError(token)
    return tuple(parts)

def _choice(*choices):
    def convert(token):
        token = str(token).strip()
        if token not in choices:
            raise ValueError(token)
        return token
    return convert

# key: (converter, default). Keys double as config file keys and, with '-' instead of '_', as
# long flag names.
SETTINGS = {
    'data': (str, None),
    'label_col': (str, 'label'),
    'seed': (_int, 0),
    'train_count': (_int, None),
    'stratify': (_bool, True),
    'classifier': (_choice('lda', 'qda'), 'qda'),
    'ridge': (_float, 0.0),
    'folds': (_int, 10),
    'prefilter_k': (_int, 150),
    'grid': (parse_grid, list(range(5, 71, 5))),
    'stop': (_choice('local-min', 'range-min'), 'local-min'),
    'max_size': (_int, None),
    'out': (str, 'featsel-out'),
    'workers': (_int, 1),
    'ttest': (_choice(TTestKind.Welch, TTestKind.Pooled), TTestKind.Welch),
    'rank_by': (_choice(RankBy.PValue, RankBy.TStat), RankBy.PValue),
    'criterion': (_choice(Criterion.CrossValidatedError, Criterion.Mahalanobis),
        Criterion.CrossValidatedError),
    'n_per_class': (_pair, (108, 108)),
    'features': (_int, 1000),
    'informative': (parse_index_set, list(range(10))),
    'delta': (_float, 1.0),
    'covariance': (_choice(*CovarianceMode.ALL), CovarianceMode.Identity),
    'variance_ratio': (_float, 9.0),
    'data_seed': (_int, None),
}

class PipelineConfig(object):
    """Everything an experiment run depends on.

    ``train_count`` and ``stop.max_size`` may be None; they are resolved against the data at
    run time (see :mod:`featsel.pipeline`).
    """
    def __init__(self, command='wrapper', data_source=None, seed=0, train_count=None,
            stratified=True, classifier=Kind.Quadratic, ridge=0.0, folds=10, prefilter_k=150,
            filter_grid=None, stop=None, out_dir='featsel-out', workers=1,
            ttest=TTestKind.Welch, rank_by=RankBy.PValue, criterion=Criterion.CrossValidatedError,
            verbosity=0):
        self.command = command
        if data_source is None:
            data_source = default_synthetic_source(seed)
        self.data_source = data_source
        self.seed = seed
        self.train_count = train_count
        self.stratified = stratified
        self.classifier = Kind.normalize(classifier)
        self.ridge = ridge
        self.folds = folds
        self.prefilter_k = prefilter_k
        self.filter_grid = list(filter_grid) if filter_grid is not None else list(range(5, 71, 5))
        self.stop = stop if stop is not None else StopRule()
        self.out_dir = out_dir
        self.workers = workers
        self.ttest = ttest
        self.rank_by = rank_by
        self.criterion = criterion
        self.verbosity = verbosity
        self.validate()

    def __repr__(self):
        return '<PipelineConfig {} {} seed={}>'.format(self.command, self.classifier, self.seed)

    def validate(self):
        if not 0 <= self.seed < SEED_LIMIT:
            raise ConfigError("seed must be a 64-bit unsigned integer, got {}".format(self.seed))
        if self.train_count is not None and self.train_count < 1:
            raise ConfigError("train_count must be at least 1, got {}".format(self.train_count))
        if self.ridge < 0:
            raise ConfigError("ridge must be >= 0, got {}".format(self.ridge))
        if self.folds < 2:
            raise ConfigError("folds must be at least 2, got {}".format(self.folds))
        if self.prefilter_k < 1:
            raise ConfigError("prefilter_k must be at least 1, got {}".format(self.prefilter_k))
        if self.workers < 1:
            raise ConfigError("workers must be at least 1, got {}".format(self.workers))
        grid = self.filter_grid
        if not grid:
            raise ConfigError("the filter grid is empty")
        if grid[0] < 1 or any(b <= a for a, b in zip(grid, grid[1:])):
            raise ConfigError("the filter grid must be strictly increasing and >= 1, got {}".format(
                grid))

    def check_against(self, ds, prefilter=True):
        """Checks the invariants that depend on the data.

        ``prefilter`` is False for the filter experiment, which has no candidate pool.
        """
        if self.train_count is not None and self.train_count >= ds.n_obs:
            raise ConfigError("train_count ({}) must be smaller than the number of observations "
                "({})".format(self.train_count, ds.n_obs))
        if prefilter and self.prefilter_k > ds.n_features:
            raise ConfigError("prefilter_k ({}) exceeds the number of features ({})".format(
                self.prefilter_k, ds.n_features))

    def resolved_train_count(self, n_obs):
        if self.train_count is not None:
            return self.train_count
        # 160 of 216 observations, the split of the reference experiment.
        return min(n_obs - 1, max(1, int(round(n_obs * 160 / 216))))

    def items(self):
        """Config echo as ``(key, value)`` string pairs, in a fixed order."""
        source = self.data_source
        result = [('command', self.command)]
        if isinstance(source, CsvSource):
            result += [('data', source.path), ('label_col', source.label_column)]
        else:
            result += [
                ('n_per_class', '%d;%d' % tuple(source.n_per_class)),
                ('features', source.features),
                ('informative', ';'.join(str(i) for i in source.informative)),
                ('delta', source.delta),
                ('covariance', source.covariance_mode),
                ('variance_ratio', source.variance_ratio),
                ('data_seed', source.seed),
            ]
        result += [
            ('seed', self.seed),
            ('train_count', 'auto' if self.train_count is None else self.train_count),
            ('stratify', self.stratified),
            ('classifier', Kind.short(self.classifier)),
            ('ridge', self.ridge),
            ('folds', self.folds),
            ('prefilter_k', self.prefilter_k),
            ('grid', ';'.join(str(k) for k in self.filter_grid)),
            ('stop', self.stop.mode),
            ('max_size', 'auto' if self.stop.max_size is None else self.stop.max_size),
            ('ttest', self.ttest),
            ('rank_by', self.rank_by),
            ('criterion', self.criterion),
        ]
        return [(key, str(value)) for key, value in result]

    def derive(self, **changes):
        """A copy of this config with some attributes replaced."""
        attrs = dict(command=self.command, data_source=self.data_source, seed=self.seed,
            train_count=self.train_count, stratified=self.stratified, classifier=self.classifier,
            ridge=self.ridge, folds=self.folds, prefilter_k=self.prefilter_k,
            filter_grid=self.filter_grid, stop=self.stop, out_dir=self.out_dir,
            workers=self.workers, ttest=self.ttest, rank_by=self.rank_by,
            criterion=self.criterion, verbosity=self.verbosity)
        attrs.update(changes)
        return PipelineConfig(**attrs)


def default_synthetic_source(seed=0):
    values = dict((key, default) for key, (_, default) in SETTINGS.items())
    return _synthetic_source(values, seed)

def _synthetic_source(values, seed):
    data_seed = values['data_seed'] if values['data_seed'] is not None else seed
    return SyntheticSource(values['n_per_class'], values['features'], tuple(values['informative']),
        values['delta'], values['covariance'], values['variance_ratio'], data_seed)

def _convert(key, token, origin):
    converter, _ = SETTINGS[key]
    try:
        return converter(token)
    except (TypeError, ValueError):
        raise UsageError("{}: invalid value {!r} for {}".format(origin, token, key))

def read_config_file(path):
    """Reads ``key = value`` lines; ``#`` starts a comment. Returns converted values."""
    try:
        with open(path, 'rt', encoding='utf-8') as fp:
            lines = fp.readlines()
    except EnvironmentError as e:
        raise ConfigError("can't read config file {}: {}".format(path, e.strerror))
    result = {}
    for lineno, line in enumerate(lines, start=1):
        line = line.split('#', 1)[0].strip()
        if not line:
            continue
        if '=' not in line:
            raise ConfigError("{}:{}: expected 'key = value', got {!r}".format(path, lineno, line))
        key, value = (part.strip() for part in line.split('=', 1))
        key = key.replace('-', '_')
        if key not in SETTINGS:
            raise ConfigError("{}:{}: unknown key {!r}".format(path, lineno, key))
        result[key] = _convert(key, value, '{}:{}'.format(path, lineno))
    return result

class _ArgumentParser(ArgumentParser):
    # argparse exits on errors; we want an exception carrying the message instead.
    def error(self, message):
        raise UsageError(message)


def _build_parser():
    parser = _ArgumentParser(prog='featsel', description="Filter and wrapper feature selection with LDA/QDA.")
    parser.add_argument('command', choices=COMMANDS,
        help="filter: t-test ranking and test MCE curve; wrapper: prefilter then sequential "
        "forward selection; synth: write a synthetic dataset; compare: filter and wrapper "
        "under both classifiers")
    parser.add_argument('--config', default=SUPPRESS, help="Path of a 'key = value' config file")
    parser.add_argument('-v', '--verbose', action='count', default=0,
        help="Log progress (-vv for debug output)")
    flags = [
        ('--data', 'data', "CSV file to read (omit to generate synthetic data)"),
        ('--label-col', 'label_col', "Name or 0-based index of the label column"),
        ('--seed', 'seed', "64-bit seed of the split, the folds and the synthetic data"),
        ('--train-count', 'train_count', "Number of training observations"),
        ('--stratify', 'stratify', "Stratify the holdout split (yes/no)"),
        ('--classifier', 'classifier', "lda or qda"),
        ('--ridge', 'ridge', "Ridge added to covariance diagonals"),
        ('--folds', 'folds', "Cross-validation folds"),
        ('--prefilter-k', 'prefilter_k', "Top ranked features kept as wrapper candidates"),
        ('--grid', 'grid', "Filter curve feature counts, A:B:STEP or a comma list"),
        ('--stop', 'stop', "local-min or range-min"),
        ('--max-size', 'max_size', "Largest subset the wrapper reaches"),
        ('--out', 'out', "Output directory"),
        ('--workers', 'workers', "Threads evaluating candidate subsets"),
        ('--ttest', 'ttest', "welch or pooled"),
        ('--rank-by', 'rank_by', "Rank features by p-value (p) or |t| (t)"),
        ('--criterion', 'criterion', "Wrapper criterion: cv-mce or mahalanobis"),
        ('--n-per-class', 'n_per_class', "Synthetic class sizes, A,B"),
        ('--features', 'features', "Synthetic feature count"),
        ('--informative', 'informative', "Synthetic informative features: a count or i,j,k"),
        ('--delta', 'delta', "Synthetic mean shift of informative features"),
        ('--covariance', 'covariance', "identity, scaled or distinct"),
        ('--variance-ratio', 'variance_ratio', "Class 1 variance multiplier (distinct mode)"),
        ('--data-seed', 'data_seed', "Seed of the synthetic data (defaults to --seed)"),
    ]
    for flag, dest, help in flags:
        parser.add_argument(flag, dest=dest, default=SUPPRESS, help=help)
    return parser

def parse_config(args, config_file=None):
    """Builds a :class:`PipelineConfig` from command line ``args``.

    ``config_file`` (or ``--config``) supplies values the command line doesn't set. ``-v``
    flags end up in ``config.verbosity``.
    """
    parser = _build_parser()
    namespace = parser.parse_args(args)
    values = dict((key, default) for key, (_, default) in SETTINGS.items())
    config_file = getattr(namespace, 'config', config_file)
    if config_file:
        values.update(read_config_file(config_file))
    for key in SETTINGS:
        if hasattr(namespace, key):
            values[key] = _convert(key, getattr(namespace, key), '--' + key.replace('_', '-'))
    if values['data']:
        data_source = CsvSource(values['data'], values['label_col'])
    else:
        data_source = _synthetic_source(values, values['seed'])
    if values['max_size'] is not None and values['max_size'] < 1:
        raise UsageError("--max-size: must be at least 1, got {}".format(values['max_size']))
    try:
        config = PipelineConfig(command=namespace.command, data_source=data_source,
            seed=values['seed'], train_count=values['train_count'], stratified=values['stratify'],
            classifier=values['classifier'], ridge=values['ridge'], folds=values['folds'],
            prefilter_k=values['prefilter_k'], filter_grid=values['grid'],
            stop=StopRule(StopMode.normalize(values['stop']), values['max_size']),
            out_dir=values['out'], workers=values['workers'], ttest=values['ttest'],
            rank_by=values['rank_by'], criterion=values['criterion'], verbosity=namespace.verbose)
    except (ConfigError, ValidationError) as e:
        raise UsageError(str(e))
    return config
