import logging

import numpy as np

from exception import EmptyNeighborhoodError, InvalidArgumentError
from kernel_graph import cross_similarity
from schemas import Dataset, KernelSpec, ScoreVector
from utility.settings import Settings

logger = logging.getLogger(__name__)


def _weighted_means(weights: np.ndarray, labels: np.ndarray) -> np.ndarray:
    # weights: one row per query, one column per labeled point
    totals = weights.sum(axis=1)
    empty = np.flatnonzero(totals < Settings.nw_underflow)
    if empty.size:
        raise EmptyNeighborhoodError(
            f"all kernel weights underflow at query {int(empty[0])}", index=int(empty[0])
        )
    return (weights @ labels) / totals


def nw_estimate(labeled_inputs, labels, query, kernel: KernelSpec) -> float:
    """
    Nadaraya-Watson estimate at `query`: the kernel-weighted mean of the labels,
    summing over labeled points only.
    """
    x = np.atleast_2d(np.asarray(labeled_inputs, dtype=np.float64))
    y = np.asarray(labels, dtype=np.float64).ravel()
    q = np.asarray(query, dtype=np.float64).reshape(1, -1)
    if x.shape[0] < 1 or x.shape[0] != y.shape[0]:
        raise InvalidArgumentError("need one label per labeled input and at least one")
    if q.shape[1] != x.shape[1]:
        raise InvalidArgumentError(f"query has dimension {q.shape[1]}, inputs {x.shape[1]}")
    return float(_weighted_means(cross_similarity(q, x, kernel), y)[0])


def nw_batch(data: Dataset, kernel: KernelSpec) -> ScoreVector:
    """
    Nadaraya-Watson estimate at every unlabeled point of `data`.

    \n**param** data: labeled-then-unlabeled point set
    \n**param** kernel: kernel family and bandwidth
    \n**return**: ScoreVector of the m estimates; its lam is 0 by convention. An underflowed
    neighborhood raises EmptyNeighborhoodError carrying the unlabeled row index.
    """
    weights = cross_similarity(data.unlabeled_inputs, data.labeled_inputs, kernel)
    estimates = _weighted_means(weights, data.labels)
    logger.debug("computed %d Nadaraya-Watson estimates", estimates.shape[0])
    return ScoreVector(values=estimates, lam=0.0)
