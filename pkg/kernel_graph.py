import logging

import numpy as np
from scipy.spatial.distance import cdist, pdist, squareform

from exception import InvalidArgumentError
from schemas import Dataset, GraphBlocks, KernelFamily, KernelSpec, SimilarityGraph

logger = logging.getLogger(__name__)


def _gaussian_rbf(sq_dist, bandwidth: float):
    return np.exp(-np.asarray(sq_dist) / bandwidth**2)


# New families only need an entry here; K is evaluated on squared distances.
_KERNELS = {KernelFamily.GAUSSIAN_RBF: _gaussian_rbf}


def kernel_values(sq_dist, kernel: KernelSpec):
    return _KERNELS[kernel.family](sq_dist, kernel.bandwidth)


def rbf_similarity(x, y, bandwidth: float) -> float:
    """
    Gaussian RBF similarity exp(-||x - y||^2 / bandwidth^2) between two points.

    \n**param** x: first point
    \n**param** y: second point, same length as `x`
    \n**param** bandwidth: kernel scale, must be positive
    \n**return**: a real in (0, 1], equal to 1 exactly when x == y.
    """
    x = np.asarray(x, dtype=np.float64).ravel()
    y = np.asarray(y, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise InvalidArgumentError(f"dimension mismatch: {x.shape[0]} vs {y.shape[0]}")
    if not bandwidth > 0:
        raise InvalidArgumentError("bandwidth must be positive")
    diff = x - y
    return float(_gaussian_rbf(diff @ diff, bandwidth))


def cross_similarity(a, b, kernel: KernelSpec) -> np.ndarray:
    """Similarities between every row of `a` and every row of `b`."""
    return kernel_values(cdist(a, b, metric="sqeuclidean"), kernel)


def build_graph(data: Dataset, kernel: KernelSpec) -> SimilarityGraph:
    """
    Builds the dense similarity graph w_ij = K((X_i - X_j)/h) over all n+m points.

    Each pair is evaluated once and mirrored, so W is exactly symmetric; self-loops
    are kept (w_ii = K(0)) and enter the degrees.

    \n**param** data: the labeled-then-unlabeled point set
    \n**param** kernel: kernel family and bandwidth
    \n**return**: SimilarityGraph with W, its row-sum degrees and the labeled count.
    """
    sq = pdist(data.inputs, metric="sqeuclidean")
    w = squareform(kernel_values(sq, kernel))
    np.fill_diagonal(w, kernel_values(0.0, kernel))
    logger.debug("built %dx%d similarity graph, bandwidth %g", *w.shape, kernel.bandwidth)
    return SimilarityGraph(w=w, degrees=w.sum(axis=1), n_labeled=data.n_labeled)


def laplacian(graph: SimilarityGraph) -> np.ndarray:
    """Unnormalized Laplacian L = D - W."""
    return np.diag(graph.degrees) - graph.w


def partition(graph: SimilarityGraph) -> GraphBlocks:
    n = graph.n_labeled
    if graph.n_unlabeled < 1:
        raise InvalidArgumentError("partition needs at least one unlabeled point")
    w, d = graph.w, graph.degrees
    return GraphBlocks(
        w11=w[:n, :n],
        w12=w[:n, n:],
        w21=w[n:, :n],
        w22=w[n:, n:],
        d11=np.diag(d[:n]),
        d22=np.diag(d[n:]),
    )


def smoothness_penalty(graph: SimilarityGraph, f) -> float:
    """Sum over all pairs of w_ij (f_i - f_j)^2; equals 2 f'Lf."""
    f = np.asarray(f, dtype=np.float64)
    if f.shape != (graph.size,):
        raise InvalidArgumentError("score vector must have one entry per node")
    diff = f[:, None] - f[None, :]
    return float(np.sum(graph.w * diff**2))
