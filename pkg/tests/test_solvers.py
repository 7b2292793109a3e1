import math

import numpy as np
import pytest

from exception import InvalidArgumentError, NonConvergenceError, SingularSystemError
from kernel_graph import partition
from schemas import FixedPointOptions
from solvers import (
    block_inverse,
    solve_hard,
    solve_hard_fixed_point,
    solve_scores,
    solve_soft,
    solve_soft_infinite,
    solve_soft_oracle,
    soft_objective,
)

RANDOM_SEEDS = range(100)
LAMBDAS = [0.01, 0.1, 1.0, 5.0]


def _sizes(seed):
    rng = np.random.default_rng(10_000 + seed)
    return int(rng.integers(1, 21)), int(rng.integers(1, 21))


@pytest.fixture
def three_node(make_graph):
    # labels (1, 0) on nodes 0, 1; node 2 unlabeled with w_02 = w_12 = c
    c = 0.4
    return make_graph([[1.0, 0.9, c], [0.9, 1.0, c], [c, c, 1.0]], 2)


# HARD CRITERION
def test_hard_three_node_hand_solution(three_node):
    scores = solve_hard(three_node, [1.0, 0.0])
    assert scores.values == pytest.approx([0.5])
    assert scores.lam == 0.0


def test_hard_constant_labels(make_instance):
    _, graph, _ = make_instance(3, 6, 4)
    np.testing.assert_allclose(solve_hard(graph, np.full(6, 0.7)).values, 0.7, rtol=1e-12)


def test_hard_matches_dense_solve(make_instance):
    _, graph, labels = make_instance(1, 5, 3)
    b = partition(graph)
    expected = np.linalg.solve(b.d22 - b.w22, b.w21 @ labels)
    np.testing.assert_allclose(solve_hard(graph, labels).values, expected, rtol=1e-12)


@pytest.mark.parametrize("seed", RANDOM_SEEDS)
def test_hard_residual_and_maximum_principle(make_instance, seed):
    n, m = _sizes(seed)
    _, graph, labels = make_instance(seed, n, m)
    f = solve_hard(graph, labels).values
    b = partition(graph)
    rhs = b.w21 @ labels
    residual = np.max(np.abs((b.d22 - b.w22) @ f - rhs))
    assert residual <= 1e-10 * (1 + np.max(np.abs(rhs)))
    assert np.all(f >= labels.min() - 1e-12)
    assert np.all(f <= labels.max() + 1e-12)


@pytest.mark.parametrize("seed", RANDOM_SEEDS)
def test_fixed_point_agrees_with_closed_form(make_instance, seed):
    n, m = _sizes(seed)
    _, graph, labels = make_instance(seed, n, m)
    opts = FixedPointOptions(tolerance=1e-10, max_iterations=100000)
    iterative = solve_hard_fixed_point(graph, labels, opts).values
    np.testing.assert_allclose(iterative, solve_hard(graph, labels).values, rtol=0, atol=1e-6)


def test_fixed_point_three_node(three_node):
    assert solve_hard_fixed_point(three_node, [1.0, 0.0]).values == pytest.approx([0.5], abs=1e-9)


def test_fixed_point_constant_labels(make_instance):
    _, graph, _ = make_instance(4, 5, 5)
    np.testing.assert_allclose(solve_hard_fixed_point(graph, np.ones(5)).values, 1.0, atol=1e-9)


def test_fixed_point_reports_non_convergence(make_instance):
    _, graph, labels = make_instance(5, 4, 6)
    with pytest.raises(NonConvergenceError) as info:
        solve_hard_fixed_point(graph, labels, FixedPointOptions(tolerance=1e-14, max_iterations=2))
    assert info.value.last_iterate.shape == (6,)
    assert info.value.final_change > 0
    assert info.value.iterations == 2


def test_fixed_point_options_validation():
    with pytest.raises(ValueError):
        FixedPointOptions(tolerance=0.0)
    with pytest.raises(ValueError):
        FixedPointOptions(max_iterations=0)


def test_hard_names_disconnected_unlabeled_nodes(make_graph):
    w = np.array(
        [
            [1.0, 0.5, 0.0, 0.0],
            [0.5, 1.0, 0.0, 0.0],
            [0.0, 0.0, 1.0, 0.0],
            [0.0, 0.0, 0.0, 1.0],
        ]
    )
    graph = make_graph(w, 1)
    with pytest.raises(SingularSystemError) as info:
        solve_hard(graph, [1.0])
    assert info.value.indices == [2, 3]


def test_hard_rejects_wrong_label_count(three_node):
    with pytest.raises(InvalidArgumentError):
        solve_hard(three_node, [1.0])


# SOFT CRITERION
def test_soft_at_zero_is_hard(make_instance):
    _, graph, labels = make_instance(7, 8, 5)
    assert np.array_equal(solve_soft(graph, labels, 0.0).values, solve_hard(graph, labels).values)


def test_soft_large_lambda_collapses_to_mean(make_instance):
    data, graph, _ = make_instance(8, 3, 6, bandwidth=1.0)
    labels = np.array([1.0, 0.0, 1.0])
    np.testing.assert_allclose(solve_soft(graph, labels, 1e6).values, 2 / 3, atol=1e-3)


@pytest.mark.parametrize("seed", RANDOM_SEEDS)
def test_soft_matches_full_system(make_instance, seed):
    n, m = _sizes(seed)
    lam = LAMBDAS[seed % len(LAMBDAS)]
    _, graph, labels = make_instance(seed, n, m)
    block_form = solve_soft(graph, labels, lam).values
    tail = solve_soft_oracle(graph, labels, lam)[n:]
    assert np.max(np.abs(block_form - tail)) <= 1e-8 * max(np.max(np.abs(tail)), 1e-300)


def test_soft_lambda_six_plus_four(make_instance):
    _, graph, labels = make_instance(11, 6, 4)
    tail = solve_soft_oracle(graph, labels, 0.1)[6:]
    np.testing.assert_allclose(solve_soft(graph, labels, 0.1).values, tail, rtol=1e-8)


@pytest.mark.parametrize("seed", range(20))
def test_soft_is_continuous_at_zero(make_instance, seed):
    _, graph, labels = make_instance(seed, 8, 6)
    np.testing.assert_allclose(
        solve_soft(graph, labels, 1e-10).values, solve_hard(graph, labels).values, atol=1e-6
    )


@pytest.mark.parametrize("seed", range(20))
def test_soft_collapses_to_infinite_solution(make_instance, seed):
    _, graph, labels = make_instance(seed, 8, 6)
    np.testing.assert_allclose(
        solve_soft(graph, labels, 1e6).values,
        solve_soft_infinite(labels, 6).values,
        atol=1e-3,
    )


@pytest.mark.parametrize("seed", range(5))
def test_soft_solution_minimizes_objective(make_instance, seed):
    n, m, lam = 6, 5, 0.5
    _, graph, labels = make_instance(seed, n, m)
    full = solve_soft_oracle(graph, labels, lam)
    full[n:] = solve_soft(graph, labels, lam).values
    best = soft_objective(graph, labels, full, lam)
    rng = np.random.default_rng(seed)
    for _ in range(100):
        perturbed = full + 1e-3 * rng.standard_normal(n + m)
        assert best <= soft_objective(graph, labels, perturbed, lam)


def test_soft_rejects_negative_lambda(three_node):
    with pytest.raises(InvalidArgumentError):
        solve_soft(three_node, [1.0, 0.0], -1.0)


# FULL-SYSTEM SOLVE
def test_oracle_two_node_hand_solution(make_graph):
    # (1 + a) f1 - a f2 = 1 and -a f1 + a f2 = 0 give f1 = f2 = 1
    graph = make_graph([[1.0, 0.3], [0.3, 1.0]], 1)
    np.testing.assert_allclose(solve_soft_oracle(graph, [1.0], 1.0), [1.0, 1.0], rtol=1e-12)


def test_oracle_zero_labels(make_instance):
    _, graph, _ = make_instance(2, 4, 3)
    np.testing.assert_array_equal(solve_soft_oracle(graph, np.zeros(4), 1.0), np.zeros(7))


def test_oracle_needs_positive_lambda(three_node):
    with pytest.raises(InvalidArgumentError):
        solve_soft_oracle(three_node, [1.0, 0.0], 0.0)


# LAMBDA = INFINITY
@pytest.mark.parametrize(
    "labels, expected",
    [([1, 0, 1, 0], 0.5), ([1, 1, 1], 1.0), ([0.2, 0.4, 0.9], 0.5)],
)
def test_infinite_lambda_is_label_mean(labels, expected):
    scores = solve_soft_infinite(labels, 4)
    np.testing.assert_allclose(scores.values, expected)
    assert scores.lam == math.inf


def test_infinite_lambda_needs_labels():
    with pytest.raises(InvalidArgumentError):
        solve_soft_infinite([], 3)


def test_dispatch(three_node):
    assert solve_scores(three_node, [1.0, 0.0], math.inf).values == pytest.approx([0.5])
    assert solve_scores(three_node, [1.0, 0.0], 0.0).values == pytest.approx([0.5])


# BLOCK INVERSE
def test_block_inverse_identity():
    out = block_inverse(np.eye(2), np.zeros((2, 3)), np.zeros((3, 2)), np.eye(3))
    np.testing.assert_allclose(out, np.eye(5), atol=1e-15)


def test_block_inverse_scalar_blocks():
    out = block_inverse([[2.0]], [[1.0]], [[1.0]], [[2.0]])
    np.testing.assert_allclose(out, [[2 / 3, -1 / 3], [-1 / 3, 2 / 3]], rtol=1e-12)


@pytest.mark.parametrize("seed", range(10))
def test_block_inverse_matches_dense_inverse(seed):
    rng = np.random.default_rng(seed)
    a = rng.standard_normal((4, 4)) + 4 * np.eye(4)
    out = block_inverse(a[:2, :2], a[:2, 2:], a[2:, :2], a[2:, 2:])
    np.testing.assert_allclose(out, np.linalg.inv(a), atol=1e-10)
    np.testing.assert_allclose(out @ a, np.eye(4), atol=1e-10)


def test_block_inverse_singular_block():
    with pytest.raises(SingularSystemError):
        block_inverse([[1.0]], [[1.0]], [[1.0]], [[0.0]])
