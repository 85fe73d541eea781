"""Data model: the observation matrix, holdout splits, stratified folds and synthetic data.

All randomness flows from explicit 64-bit seeds through numpy's ``PCG64`` bit generator, so
every function here is a pure function of its arguments.
"""

import csv
import logging
import math

import numpy as np

from .errors import DataError, ValidationError

logger = logging.getLogger(__name__)

SEED_LIMIT = 2 ** 64
LABEL_HEADER = 'label'

class CovarianceMode(object):
    Identity = 'identity'
    # Per-feature standard deviations drawn once and shared by both classes.
    Scaled = 'scaled'
    # Class 1 gets a variance multiplier on its informative features.
    Distinct = 'distinct'

    ALL = (Identity, Scaled, Distinct)

def check_seed(seed):
    seed = int(seed)
    if not 0 <= seed < SEED_LIMIT:
        raise ValidationError("seed must be a 64-bit unsigned integer, got {}".format(seed))
    return seed

def make_rng(seed):
    return np.random.Generator(np.random.PCG64(check_seed(seed)))

def derive_seed(seed, stream):
    """Returns the seed of independent sub-stream ``stream`` of ``seed``."""
    seq = np.random.SeedSequence(check_seed(seed), spawn_key=(int(stream), ))
    return int(seq.generate_state(1, np.uint64)[0])

def _readonly(array):
    array.setflags(write=False)
    return array

class Dataset(object):
    """An ``n_obs x n_features`` real matrix with one class id per row.

    Labels are dense ids ``0..n_classes-1``. ``class_names`` records the original label text
    of each id (the remapping done by :func:`load_csv`).
    """
    def __init__(self, values, labels, feature_names=None, class_names=None):
        values = np.array(values, dtype=np.float64)
        labels = np.array(labels)
        if values.ndim != 2:
            raise ValidationError("values must be a 2-D matrix")
        n_obs, n_features = values.shape
        if n_obs < 2:
            raise ValidationError("a dataset needs at least 2 observations, got {}".format(n_obs))
        if n_features < 1:
            raise ValidationError("a dataset needs at least 1 feature")
        if labels.shape != (n_obs, ):
            raise ValidationError("expected {} labels, got {}".format(n_obs, labels.size))
        if labels.dtype.kind not in 'iu':
            if labels.dtype.kind == 'f' and np.all(np.mod(labels, 1) == 0):
                labels = labels.astype(np.intp)
            else:
                raise ValidationError("labels must be integer class ids")
        labels = labels.astype(np.intp)
        if labels.min() < 0:
            raise ValidationError("labels must be non-negative")
        if not np.all(np.isfinite(values)):
            row, col = np.argwhere(~np.isfinite(values))[0]
            raise ValidationError("non-finite value at observation {}, feature {}".format(row, col))
        counts = np.bincount(labels)
        if np.any(counts == 0):
            missing = int(np.flatnonzero(counts == 0)[0])
            raise ValidationError("class {} has no observation; labels must be dense".format(missing))
        if len(counts) < 2:
            raise ValidationError("a dataset needs at least 2 classes")
        if feature_names is not None:
            feature_names = tuple(str(name) for name in feature_names)
            if len(feature_names) != n_features:
                raise ValidationError("expected {} feature names, got {}".format(
                    n_features, len(feature_names)))
        if class_names is None:
            class_names = tuple(str(c) for c in range(len(counts)))
        else:
            class_names = tuple(str(name) for name in class_names)
            if len(class_names) != len(counts):
                raise ValidationError("expected {} class names, got {}".format(
                    len(counts), len(class_names)))
        self.values = _readonly(values)
        self.labels = _readonly(labels)
        self.feature_names = feature_names
        self.class_names = class_names

    def __repr__(self):
        return '<Dataset {}x{} classes={}>'.format(self.n_obs, self.n_features, self.n_classes)

    @property
    def n_obs(self):
        return self.values.shape[0]

    @property
    def n_features(self):
        return self.values.shape[1]

    @property
    def n_classes(self):
        return len(self.class_names)

    def class_counts(self, obs_indices=None):
        labels = self.labels if obs_indices is None else self.labels[np.asarray(obs_indices, dtype=np.intp)]
        return np.bincount(labels, minlength=self.n_classes)

    def feature_name(self, index):
        if self.feature_names is None:
            return 'f%d' % index
        return self.feature_names[index]

    def submatrix(self, obs_indices, feature_subset):
        return self.values[np.ix_(np.asarray(obs_indices, dtype=np.intp),
            np.asarray(feature_subset, dtype=np.intp))]

    def replace_values(self, obs_indices, new_values):
        """Returns a copy of the dataset with rows ``obs_indices`` replaced by ``new_values``."""
        values = np.array(self.values)
        values[np.asarray(obs_indices, dtype=np.intp)] = new_values
        return Dataset(values, self.labels, self.feature_names, self.class_names)


class HoldoutSplit(object):
    def __init__(self, train_indices, test_indices, seed, stratified):
        self.train_indices = _readonly(np.asarray(train_indices, dtype=np.intp))
        self.test_indices = _readonly(np.asarray(test_indices, dtype=np.intp))
        self.seed = seed
        self.stratified = stratified

    def __repr__(self):
        return '<HoldoutSplit train={} test={}>'.format(len(self.train_indices), len(self.test_indices))


class FoldAssignment(object):
    """``fold_of[i]`` is the fold of observation ``indices[i]``."""
    def __init__(self, indices, fold_of, k, seed):
        self.indices = _readonly(np.asarray(indices, dtype=np.intp))
        self.fold_of = _readonly(np.asarray(fold_of, dtype=np.intp))
        self.k = k
        self.seed = seed

    def __repr__(self):
        return '<FoldAssignment k={} sizes={}>'.format(self.k, list(self.sizes()))

    def sizes(self):
        return np.bincount(self.fold_of, minlength=self.k)

    def fold_indices(self, fold):
        return self.indices[self.fold_of == fold]

    def train_indices(self, fold):
        return self.indices[self.fold_of != fold]


#--- CSV
def _parse_label_column(header, label_column):
    if isinstance(label_column, int):
        index = label_column
    elif label_column in header:
        index = header.index(label_column)
    elif str(label_column).lstrip('-').isdigit():
        index = int(label_column)
    else:
        raise DataError("label column {!r} is not in the header".format(label_column), row=1)
    if not -len(header) <= index < len(header):
        raise DataError("label column index {} out of range".format(index), row=1)
    return index % len(header)

def load_csv(path, label_column):
    """Reads a comma separated file with a header row into a :class:`Dataset`.

    ``label_column`` is a header name or a 0-based column index. Labels are remapped to dense
    ids in order of first appearance; the original label text is kept in
    ``Dataset.class_names``.
    """
    try:
        fp = open(path, 'rt', newline='', encoding='utf-8')
    except EnvironmentError as e:
        raise DataError("can't open {}: {}".format(path, e.strerror))
    with fp:
        rows = [(lineno, row) for lineno, row in enumerate(csv.reader(fp), start=1) if row]
    if not rows:
        raise DataError("{} is empty".format(path))
    _, header = rows[0]
    header = [name.strip() for name in header]
    label_index = _parse_label_column(header, label_column)
    if len(rows) < 2:
        raise DataError("{} has a header but no data rows".format(path))
    feature_columns = [i for i in range(len(header)) if i != label_index]
    if not feature_columns:
        raise DataError("{} has no feature column".format(path), row=1)
    values = np.empty((len(rows) - 1, len(feature_columns)), dtype=np.float64)
    label_ids = {}
    labels = []
    for obs, (lineno, row) in enumerate(rows[1:]):
        if len(row) != len(header):
            raise DataError("expected {} cells, got {}".format(len(header), len(row)), row=lineno)
        label = row[label_index].strip()
        if not label:
            raise DataError("empty label", row=lineno, column=header[label_index])
        labels.append(label_ids.setdefault(label, len(label_ids)))
        for j, col in enumerate(feature_columns):
            cell = row[col].strip()
            try:
                value = float(cell)
            except ValueError:
                raise DataError("{!r} is not a number".format(cell), row=lineno, column=header[col])
            if not math.isfinite(value):
                raise DataError("{!r} is not a finite number".format(cell), row=lineno,
                    column=header[col])
            values[obs, j] = value
    if len(label_ids) < 2:
        raise DataError("{} contains a single class ({!r})".format(path, next(iter(label_ids))))
    class_names = sorted(label_ids, key=label_ids.get)
    feature_names = [header[col] for col in feature_columns]
    logger.info("loaded %s: %d observations, %d features, classes %s", path, values.shape[0],
        values.shape[1], ', '.join('%s=%d' % (name, i) for i, name in enumerate(class_names)))
    return Dataset(values, labels, feature_names, class_names)

def write_csv(ds, path):
    """Writes ``ds`` in the dialect :func:`load_csv` reads, label column last."""
    header = [ds.feature_name(j) for j in range(ds.n_features)] + [LABEL_HEADER]
    with open(path, 'wt', newline='', encoding='utf-8') as fp:
        writer = csv.writer(fp, lineterminator='\n')
        writer.writerow(header)
        for values, label in zip(ds.values, ds.labels):
            writer.writerow([repr(float(v)) for v in values] + [ds.class_names[label]])

#--- Splits
def _proportional_allocation(counts, total):
    # Largest remainder apportionment: every class gets floor(quota) and the leftover units
    # go to the largest fractional parts (lower class id first on ties). Each allocation is
    # then within 1 of its exact quota.
    quotas = counts * total / counts.sum()
    allocation = np.floor(quotas).astype(np.intp)
    leftover = int(total - allocation.sum())
    order = sorted(range(len(counts)), key=lambda c: (-(quotas[c] - allocation[c]), c))
    for c in order[:leftover]:
        allocation[c] += 1
    return allocation

def holdout_split(ds, train_count, stratified=True, seed=0):
    """Splits observations into ``train_count`` training and ``n_obs - train_count`` test rows.

    In stratified mode each class contributes in proportion to its size, which requires every
    class to end up with at least one training and one test observation.
    """
    seed = check_seed(seed)
    train_count = int(train_count)
    if not 1 <= train_count <= ds.n_obs - 1:
        raise ValidationError("train_count must be within [1, {}], got {}".format(
            ds.n_obs - 1, train_count))
    rng = make_rng(seed)
    if not stratified:
        perm = rng.permutation(ds.n_obs)
        return HoldoutSplit(np.sort(perm[:train_count]), np.sort(perm[train_count:]), seed, False)
    counts = ds.class_counts()
    allocation = _proportional_allocation(counts, train_count)
    for c, (count, allotted) in enumerate(zip(counts, allocation)):
        if allotted < 1 or allotted >= count:
            raise ValidationError("can't stratify {} training observations: class {} ({} "
                "observations) would get {} in training and {} in test".format(
                train_count, ds.class_names[c], count, allotted, count - allotted))
    train, test = [], []
    for c in range(ds.n_classes):
        members = rng.permutation(np.flatnonzero(ds.labels == c))
        train.append(members[:allocation[c]])
        test.append(members[allocation[c]:])
    return HoldoutSplit(np.sort(np.concatenate(train)), np.sort(np.concatenate(test)), seed, True)

def stratified_folds(ds_indices, labels, k, seed=0):
    """Partitions ``ds_indices`` into ``k`` folds that each represent every class.

    Each class is shuffled (Fisher-Yates) and dealt round-robin to the folds; the deal
    continues where the previous class stopped, so fold sizes differ by at most one overall
    and per class.
    """
    seed = check_seed(seed)
    indices = np.asarray(ds_indices, dtype=np.intp)
    labels = np.asarray(labels, dtype=np.intp)
    k = int(k)
    if labels.shape != indices.shape:
        raise ValidationError("expected one label per index ({}), got {}".format(
            len(indices), len(labels)))
    if k < 2:
        raise ValidationError("fold count must be at least 2, got {}".format(k))
    if k > len(indices):
        raise ValidationError("can't make {} folds out of {} observations".format(k, len(indices)))
    classes = np.unique(labels)
    counts = {int(c): int(np.sum(labels == c)) for c in classes}
    small = [c for c, count in counts.items() if count < k]
    if small:
        logger.warning("classes %s have fewer than %d observations; some folds will miss them",
            ', '.join('%d (%d)' % (c, counts[c]) for c in small), k)
    rng = make_rng(seed)
    fold_of = np.empty(len(indices), dtype=np.intp)
    position = 0
    for c in classes:
        members = rng.permutation(np.flatnonzero(labels == c))
        fold_of[members] = (position + np.arange(len(members))) % k
        position += len(members)
    return FoldAssignment(indices, fold_of, k, seed)

#--- Synthetic data
def synthetic_gaussian(n_per_class, d, informative, delta, covariance_mode=CovarianceMode.Identity,
        seed=0, variance_ratio=9.0):
    """Two Gaussian classes that differ only on the ``informative`` features.

    Class 0 has mean 0 everywhere, class 1 has mean ``delta`` on informative features and 0
    elsewhere. Rows are class 0 first, then class 1. Draws come from one
    ``standard_normal`` (ziggurat) call of shape ``(n, d)``, taken after the per-feature
    scales in ``scaled`` mode.
    """
    seed = check_seed(seed)
    n0, n1 = (int(n) for n in n_per_class)
    if n0 < 2 or n1 < 2:
        raise ValidationError("each class needs at least 2 observations, got {}".format((n0, n1)))
    d = int(d)
    if d < 1:
        raise ValidationError("feature count must be at least 1")
    informative = np.unique(np.asarray(list(informative), dtype=np.intp))
    if informative.size and (informative[0] < 0 or informative[-1] >= d):
        raise ValidationError("informative features must lie in [0, {})".format(d))
    if covariance_mode not in CovarianceMode.ALL:
        raise ValidationError("unknown covariance mode {!r}".format(covariance_mode))
    if variance_ratio <= 0:
        raise ValidationError("variance ratio must be positive")
    rng = make_rng(seed)
    if covariance_mode == CovarianceMode.Scaled:
        scales = rng.uniform(0.5, 2.0, size=d)
    else:
        scales = np.ones(d)
    values = rng.standard_normal((n0 + n1, d)) * scales
    if covariance_mode == CovarianceMode.Distinct:
        values[n0:, informative] *= math.sqrt(variance_ratio)
    values[n0:, informative] += delta
    labels = np.repeat(np.array([0, 1], dtype=np.intp), [n0, n1])
    return Dataset(values, labels, ['f%d' % j for j in range(d)])
