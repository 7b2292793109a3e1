import logging
import math
from typing import Optional

import numpy as np
from scipy.linalg import LinAlgError, cho_factor, cho_solve, lu_factor, lu_solve
from scipy.sparse.csgraph import connected_components

from exception import InvalidArgumentError, NonConvergenceError, SingularSystemError
from kernel_graph import laplacian, partition, smoothness_penalty
from schemas import FixedPointOptions, ScoreVector, SimilarityGraph
from utility.settings import Settings

logger = logging.getLogger(__name__)


class Factorization:
    """
    Factorization of a square system, SPD (Cholesky) first and pivoted LU on failure.

    A system is declared singular when a pivot falls to or below `singular_rtol` times
    the largest diagonal magnitude of the matrix.
    """

    def __init__(self, a, name: str = "system", symmetric: bool = True, indices=None):
        a = np.asarray(a, dtype=np.float64)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise InvalidArgumentError(f"{name} must be a square matrix, got {a.shape}")
        self.name = name
        self.size = a.shape[0]
        threshold = Settings.singular_rtol * float(np.max(np.abs(np.diag(a)), initial=0.0))

        self.kind = None
        if symmetric:
            try:
                c, lower = cho_factor(a, lower=False)
                self.kind, self._factors = "cholesky", (c, lower)
                pivots = np.diag(c) ** 2
            except LinAlgError:
                logger.warning("%s is not positive definite, falling back to LU", name)
        if self.kind is None:
            lu, piv = lu_factor(a, check_finite=True)
            self.kind, self._factors = "lu", (lu, piv)
            pivots = np.abs(np.diag(lu))
        if self.size and np.min(pivots) <= threshold:
            raise SingularSystemError(
                f"{name} is singular or nearly singular "
                f"(smallest pivot {np.min(pivots):.3e}, threshold {threshold:.3e})",
                indices=indices() if callable(indices) else indices,
            )

    def solve(self, b) -> np.ndarray:
        b = np.asarray(b, dtype=np.float64)
        if self.kind == "cholesky":
            return cho_solve(self._factors, b)
        return lu_solve(self._factors, b)

    def inverse(self) -> np.ndarray:
        return self.solve(np.eye(self.size))


def disconnected_unlabeled(graph: SimilarityGraph) -> list:
    """Global indices of unlabeled nodes whose connected component holds no labeled node."""
    _, component = connected_components(graph.w > 0, directed=False)
    labeled = set(component[: graph.n_labeled].tolist())
    return [
        int(i)
        for i in range(graph.n_labeled, graph.size)
        if component[i] not in labeled
    ]


def _check_labels(graph: SimilarityGraph, labels) -> np.ndarray:
    y = np.asarray(labels, dtype=np.float64)
    if y.ndim != 1 or y.shape[0] != graph.n_labeled:
        raise InvalidArgumentError(
            f"expected {graph.n_labeled} labels, got shape {y.shape}"
        )
    if not np.all(np.isfinite(y)):
        raise InvalidArgumentError("labels must be finite")
    return y


def solve_hard(graph: SimilarityGraph, labels) -> ScoreVector:
    """
    Closed-form hard-criterion (harmonic) scores f = (D22 - W22)^-1 W21 Y.

    \n**param** graph: similarity graph with labeled nodes first
    \n**param** labels: the n observed responses
    \n**return**: ScoreVector of the m unlabeled scores with lam = 0.
    """
    y = _check_labels(graph, labels)
    blocks = partition(graph)
    system = Factorization(
        blocks.d22 - blocks.w22,
        name="D22 - W22",
        indices=lambda: disconnected_unlabeled(graph),
    )
    return ScoreVector(values=system.solve(blocks.w21 @ y), lam=0.0)


def solve_hard_fixed_point(
    graph: SimilarityGraph, labels, opts: Optional[FixedPointOptions] = None
) -> ScoreVector:
    """
    Hard-criterion scores by repeating f_a <- sum_i w_ai f_i / sum_i w_ai over the
    unlabeled nodes, labeled entries pinned to Y, starting from zero.

    \n**param** opts: stopping rule; defaults come from Settings
    \n**return**: ScoreVector with lam = 0 once the sup-norm change drops below tolerance.
    """
    if opts is None:
        opts = FixedPointOptions(
            tolerance=Settings.fixed_point_tolerance,
            max_iterations=Settings.fixed_point_max_iterations,
        )
    y = _check_labels(graph, labels)
    n = graph.n_labeled
    if graph.n_unlabeled < 1:
        raise InvalidArgumentError("no unlabeled points to score")
    w21, w22 = graph.w[n:, :n], graph.w[n:, n:]
    d = graph.degrees[n:]
    isolated = np.flatnonzero(d <= 0)
    if isolated.size:
        raise SingularSystemError(
            "unlabeled nodes with zero degree", indices=(isolated + n).tolist()
        )

    pinned = w21 @ y
    f = np.zeros(graph.n_unlabeled)
    change = math.inf
    for iteration in range(1, opts.max_iterations + 1):
        updated = (pinned + w22 @ f) / d
        change = float(np.max(np.abs(updated - f)))
        f = updated
        if change < opts.tolerance:
            logger.debug("fixed point converged after %d sweeps", iteration)
            return ScoreVector(values=f, lam=0.0)
    raise NonConvergenceError(
        f"fixed point did not converge in {opts.max_iterations} sweeps "
        f"(last change {change:.3e})",
        last_iterate=f,
        final_change=change,
        iterations=opts.max_iterations,
    )


def solve_soft(graph: SimilarityGraph, labels, lam: float) -> ScoreVector:
    """
    Soft-criterion scores via the block-inverse closed form

        f = (D22 - W22 - lam W21 A^-1 W12)^-1 W21 A^-1 Y,   A = I + lam (D11 - W11).

    lam = 0 is the hard criterion and is dispatched to `solve_hard`.
    """
    if math.isnan(lam) or lam < 0 or math.isinf(lam):
        raise InvalidArgumentError(
            "solve_soft needs a finite nonnegative lambda; use solve_soft_infinite for inf"
        )
    if lam == 0:
        return solve_hard(graph, labels)
    y = _check_labels(graph, labels)
    blocks = partition(graph)
    inner = Factorization(
        np.eye(graph.n_labeled) + lam * (blocks.d11 - blocks.w11),
        name="I + lam (D11 - W11)",
    )
    inner_w12 = inner.solve(blocks.w12)
    inner_y = inner.solve(y)
    outer = Factorization(
        blocks.d22 - blocks.w22 - lam * (blocks.w21 @ inner_w12),
        name="soft-criterion Schur complement",
        indices=lambda: disconnected_unlabeled(graph),
    )
    return ScoreVector(values=outer.solve(blocks.w21 @ inner_y), lam=lam)


def solve_soft_oracle(graph: SimilarityGraph, labels, lam: float) -> np.ndarray:
    """
    Full (n+m)-vector minimizer of the soft criterion from (V + lam L) f = V (Y, 0),
    with V the indicator of labeled nodes. Needs lam > 0.
    """
    if not (lam > 0 and math.isfinite(lam)):
        raise InvalidArgumentError("the full-system solve needs a finite lambda > 0")
    y = _check_labels(graph, labels)
    n = graph.n_labeled
    indicator = np.zeros(graph.size)
    indicator[:n] = 1.0
    rhs = np.zeros(graph.size)
    rhs[:n] = y
    system = Factorization(
        np.diag(indicator) + lam * laplacian(graph),
        name="V + lam L",
        indices=lambda: disconnected_unlabeled(graph),
    )
    return system.solve(rhs)


def solve_soft_infinite(labels, n_unlabeled: int) -> ScoreVector:
    y = np.asarray(labels, dtype=np.float64).ravel()
    if y.size == 0:
        raise InvalidArgumentError("at least one label is required")
    if n_unlabeled < 1:
        raise InvalidArgumentError("at least one unlabeled point is required")
    return ScoreVector(values=np.full(n_unlabeled, y.mean()), lam=math.inf)


def solve_scores(graph: SimilarityGraph, labels, lam: float) -> ScoreVector:
    """Dispatches on lambda: 0 -> hard, finite -> soft, inf -> label mean."""
    if math.isinf(lam) and lam > 0:
        _check_labels(graph, labels)
        return solve_soft_infinite(labels, graph.n_unlabeled)
    return solve_soft(graph, labels, lam)


def soft_objective(graph: SimilarityGraph, labels, f, lam: float) -> float:
    """sum_{i<=n} (Y_i - f_i)^2 + lam/2 * sum_ij w_ij (f_i - f_j)^2"""
    y = _check_labels(graph, labels)
    f = np.asarray(f, dtype=np.float64)
    loss = float(np.sum((y - f[: graph.n_labeled]) ** 2))
    return loss + 0.5 * lam * smoothness_penalty(graph, f)


def block_inverse(a11, a12, a21, a22) -> np.ndarray:
    """
    Inverse of [[a11, a12], [a21, a22]] from its four blocks:

        [[ S1^-1,                 -S1^-1 a12 a22^-1 ],
         [ -S2^-1 a21 a11^-1,      S2^-1            ]]

    with S1 = a11 - a12 a22^-1 a21 and S2 = a22 - a21 a11^-1 a12.
    """
    a11, a12, a21, a22 = (np.atleast_2d(np.asarray(b, dtype=np.float64)) for b in (a11, a12, a21, a22))
    p, q = a11.shape[0], a22.shape[0]
    if a11.shape != (p, p) or a22.shape != (q, q) or a12.shape != (p, q) or a21.shape != (q, p):
        raise InvalidArgumentError("blocks do not assemble into a square matrix")

    a11_inv = Factorization(a11, name="a11", symmetric=False).inverse()
    a22_inv = Factorization(a22, name="a22", symmetric=False).inverse()
    s1_inv = Factorization(
        a11 - a12 @ a22_inv @ a21, name="Schur complement of a22", symmetric=False
    ).inverse()
    s2_inv = Factorization(
        a22 - a21 @ a11_inv @ a12, name="Schur complement of a11", symmetric=False
    ).inverse()
    return np.block(
        [
            [s1_inv, -s1_inv @ a12 @ a22_inv],
            [-s2_inv @ a21 @ a11_inv, s2_inv],
        ]
    )
