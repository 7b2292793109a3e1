import numpy as np
import pytest

from kernel_graph import build_graph
from schemas import Dataset, KernelSpec, SimilarityGraph


@pytest.fixture
def make_instance():
    """Random RBF instance on the unit cube: returns (data, graph, labels)."""

    def make(seed, n, m, dim=3, bandwidth=0.5, binary=False):
        rng = np.random.default_rng(seed)
        inputs = rng.random((n + m, dim))
        labels = (rng.random(n) < 0.5).astype(float) if binary else rng.random(n)
        data = Dataset(inputs=inputs, labels=labels, n_labeled=n, n_unlabeled=m)
        return data, build_graph(data, KernelSpec(bandwidth=bandwidth)), labels

    return make


@pytest.fixture
def make_graph():
    """SimilarityGraph straight from a weight matrix, degrees as row sums."""

    def make(w, n_labeled):
        w = np.asarray(w, dtype=float)
        return SimilarityGraph(w=w, degrees=w.sum(axis=1), n_labeled=n_labeled)

    return make
