import numpy as np
import pytest

from featsel.config import PipelineConfig, SyntheticSource
from featsel.dataset import Dataset, synthetic_gaussian
from featsel.errors import FeasibilityError

def synthetic_source(n_per_class=(40, 40), features=60, informative=range(5), delta=1.5,
        covariance_mode='identity', variance_ratio=9.0, seed=0):
    return SyntheticSource(tuple(n_per_class), features, tuple(informative), delta,
        covariance_mode, variance_ratio, seed)

def small_config(**changes):
    """A config that runs in well under a second."""
    attrs = dict(data_source=synthetic_source(), seed=0, classifier='lda', folds=5,
        prefilter_k=20, filter_grid=range(2, 21, 2))
    attrs.update(changes)
    return PipelineConfig(**attrs)

class ScriptedEvaluator(object):
    """Scores a subset by its size only, from ``scores[size - 1]``; counts its calls."""
    def __init__(self, scores, infeasible=lambda subset: False):
        self.scores = scores
        self.infeasible = infeasible
        self.calls = []

    def __call__(self, subset):
        self.calls.append(tuple(subset))
        if self.infeasible(subset):
            raise FeasibilityError("scripted infeasible subset")
        return self.scores[len(subset) - 1]


@pytest.fixture
def two_class():
    return synthetic_gaussian((30, 30), 8, [0, 1], 2.0, seed=3)

@pytest.fixture
def separable():
    # Feature 2 is the label plus tiny noise; features 0 and 1 are noise.
    rng = np.random.default_rng(42)
    labels = np.repeat([0, 1], 20)
    values = rng.standard_normal((40, 3))
    values[:, 2] = labels * 10.0 + 0.1 * rng.standard_normal(40)
    return Dataset(values, labels)

@pytest.fixture
def small_cfg():
    return small_config()
