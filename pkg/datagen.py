import logging
import math
from typing import Tuple, Union

import numpy as np
from scipy.special import expit

from exception import InvalidArgumentError
from schemas import Dataset, RngSeed, SimModel, SimModelId, StreamRole

logger = logging.getLogger(__name__)

DIMENSION = 5
MEAN = np.full(DIMENSION, 0.5)
COVARIANCE = np.full((DIMENSION, DIMENSION), 0.05) + 0.05 * np.eye(DIMENSION)
_COVARIANCE_FACTOR = np.linalg.cholesky(COVARIANCE)

INTERCEPT = -1.35
COEFFICIENTS = np.array([2.0, -1.0, 1.0, -1.0, 2.0])


# Random streams
def cell_seed(master_seed: int, replication: int) -> int:
    """64-bit seed of one replication, derived from the master seed alone."""
    master = RngSeed(master_seed=master_seed).master_seed
    state = np.random.SeedSequence(master, spawn_key=(replication,)).generate_state(
        1, dtype=np.uint64
    )
    return int(state[0])


def stream(seed: int, role: StreamRole) -> np.random.Generator:
    """Independent generator for one role of a replication; order of creation is irrelevant."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(role),)))


# Inputs
def sample_truncated_mvn(rng: np.random.Generator, count: int) -> np.ndarray:
    """
    Draws `count` points from N(MEAN, COVARIANCE) in five dimensions and zeroes every
    component that falls outside [0, 1].

    Rows are generated in order, so the first k rows of a larger draw equal a draw of k
    from the same stream.
    """
    if count < 1:
        raise InvalidArgumentError("count must be at least 1")
    x = MEAN + rng.standard_normal((count, DIMENSION)) @ _COVARIANCE_FACTOR.T
    x[(x < 0.0) | (x > 1.0)] = 0.0
    return x


# Regression functions
def _check_points(x) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    if x.shape[-1:] != (DIMENSION,):
        raise InvalidArgumentError(f"points must have {DIMENSION} components, got {x.shape}")
    return x


def logit_model1(x):
    """logit q(x) = -1.35 + 2x1 - x2 + x3 - x4 + 2x5; accepts one point or a row matrix."""
    x = _check_points(x)
    return INTERCEPT + x @ COEFFICIENTS


def logit_model2(x):
    """Model 1 plus the interactions x1 x3 + x2 x4."""
    x = _check_points(x)
    return logit_model1(x) + x[..., 0] * x[..., 2] + x[..., 1] * x[..., 3]


_LOGITS = {SimModelId.MODEL1: logit_model1, SimModelId.MODEL2: logit_model2}


def true_probability(model: Union[SimModel, SimModelId, int], x):
    if isinstance(model, SimModel):
        model = model.id
    return expit(_LOGITS[SimModelId(model)](x))


# Labels
def sample_labels(rng: np.random.Generator, probs) -> np.ndarray:
    probs = np.asarray(probs, dtype=np.float64).ravel()
    if np.any((probs < 0) | (probs > 1)):
        raise InvalidArgumentError("probabilities must lie in [0, 1]")
    return (rng.random(probs.shape[0]) < probs).astype(np.float64)


def bandwidth(n: int) -> float:
    """h_n = (ln n / n)^(1/5)"""
    if n < 2:
        raise InvalidArgumentError("the bandwidth schedule needs n >= 2")
    return (math.log(n) / n) ** 0.2


def sample_dataset(model: SimModelId, n: int, m: int, seed: int) -> Tuple[Dataset, np.ndarray]:
    """
    One simulated replication: truncated-normal inputs, Bernoulli labels on the n labeled
    points and the true probabilities q(X) on the m unlabeled points.

    Each role draws from its own stream, so for a fixed seed the labeled part is shared
    across every m and the unlabeled part across every n.
    """
    labeled = sample_truncated_mvn(stream(seed, StreamRole.LABELED_INPUTS), n)
    unlabeled = sample_truncated_mvn(stream(seed, StreamRole.UNLABELED_INPUTS), m)
    labels = sample_labels(stream(seed, StreamRole.LABELS), true_probability(model, labeled))
    data = Dataset.from_parts(labeled, labels, unlabeled)
    return data, true_probability(model, unlabeled)
