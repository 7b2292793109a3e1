import enum
import math
from pathlib import Path
from typing import List, Optional

import numpy as np
from pydantic import BaseModel, root_validator, validator

from exception import InvalidArgumentError

UINT64_MAX = 2**64 - 1


def _as_float_array(v, ndim: int):
    arr = np.asarray(v, dtype=np.float64)
    if arr.ndim != ndim:
        raise ValueError(f"expected a {ndim}-dimensional array, got shape {arr.shape}")
    return arr


def _check_lambda(v: float) -> float:
    if math.isnan(v) or v < 0:
        raise ValueError("lambda must be nonnegative (inf allowed)")
    return v


class ArrayModel(BaseModel):
    class Config:
        arbitrary_types_allowed = True
        allow_mutation = False


# Kernel classes
class KernelFamily(str, enum.Enum):
    GAUSSIAN_RBF = "rbf"


class KernelSpec(BaseModel):
    family: KernelFamily = KernelFamily.GAUSSIAN_RBF
    bandwidth: float

    @validator("bandwidth")
    def positive_bandwidth(cls, v):
        if not (math.isfinite(v) and v > 0):
            raise ValueError("bandwidth must be a positive finite real")
        return v


# Data classes
class Dataset(ArrayModel):
    inputs: np.ndarray
    labels: np.ndarray
    n_labeled: int
    n_unlabeled: int

    @validator("inputs", pre=True)
    def inputs_matrix(cls, v):
        arr = _as_float_array(v, 2)
        if not np.all(np.isfinite(arr)):
            raise ValueError("inputs contain non-finite entries")
        return arr

    @validator("labels", pre=True)
    def labels_vector(cls, v):
        arr = _as_float_array(v, 1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("labels contain non-finite entries")
        return arr

    @validator("n_labeled", "n_unlabeled")
    def at_least_one(cls, v):
        if v < 1:
            raise ValueError("counts must be at least 1")
        return v

    @root_validator(skip_on_failure=True)
    def consistent_sizes(cls, values):
        n, m = values["n_labeled"], values["n_unlabeled"]
        if values["labels"].shape[0] != n:
            raise ValueError("labels length must equal n_labeled")
        if values["inputs"].shape[0] != n + m:
            raise ValueError("n_labeled + n_unlabeled must equal the row count of inputs")
        return values

    @classmethod
    def from_parts(cls, labeled_inputs, labels, unlabeled_inputs):
        labeled_inputs = np.atleast_2d(np.asarray(labeled_inputs, dtype=np.float64))
        unlabeled_inputs = np.atleast_2d(np.asarray(unlabeled_inputs, dtype=np.float64))
        if labeled_inputs.shape[1] != unlabeled_inputs.shape[1]:
            raise InvalidArgumentError(
                f"labeled inputs have {labeled_inputs.shape[1]} coordinates, "
                f"unlabeled inputs have {unlabeled_inputs.shape[1]}"
            )
        return cls(
            inputs=np.vstack([labeled_inputs, unlabeled_inputs]),
            labels=labels,
            n_labeled=labeled_inputs.shape[0],
            n_unlabeled=unlabeled_inputs.shape[0],
        )

    @property
    def labeled_inputs(self) -> np.ndarray:
        return self.inputs[: self.n_labeled]

    @property
    def unlabeled_inputs(self) -> np.ndarray:
        return self.inputs[self.n_labeled :]


# Graph classes
class SimilarityGraph(ArrayModel):
    w: np.ndarray
    degrees: np.ndarray
    n_labeled: int

    @validator("w", pre=True)
    def similarity_matrix(cls, v):
        arr = _as_float_array(v, 2)
        if arr.shape[0] != arr.shape[1]:
            raise ValueError("similarity matrix must be square")
        if not np.array_equal(arr, arr.T):
            raise ValueError("similarity matrix must be exactly symmetric")
        if np.any(arr < 0) or np.any(arr > 1):
            raise ValueError("similarities must lie in [0, 1]")
        return arr

    @validator("degrees", pre=True)
    def degree_vector(cls, v):
        return _as_float_array(v, 1)

    @root_validator(skip_on_failure=True)
    def degrees_are_row_sums(cls, values):
        w, degrees, n = values["w"], values["degrees"], values["n_labeled"]
        if degrees.shape[0] != w.shape[0]:
            raise ValueError("one degree per node is required")
        if not np.allclose(degrees, w.sum(axis=1), rtol=1e-12, atol=0.0):
            raise ValueError("degrees must equal the row sums of w")
        if not 1 <= n <= w.shape[0]:
            raise ValueError("n_labeled must lie in [1, number of nodes]")
        return values

    @property
    def size(self) -> int:
        return self.w.shape[0]

    @property
    def n_unlabeled(self) -> int:
        return self.w.shape[0] - self.n_labeled


class GraphBlocks(ArrayModel):
    w11: np.ndarray
    w12: np.ndarray
    w21: np.ndarray
    w22: np.ndarray
    d11: np.ndarray
    d22: np.ndarray


# Solver classes
class ScoreVector(ArrayModel):
    values: np.ndarray
    lam: float

    @validator("values", pre=True)
    def finite_scores(cls, v):
        arr = _as_float_array(v, 1)
        if not np.all(np.isfinite(arr)):
            raise ValueError("scores must be finite")
        return arr

    _lam = validator("lam", allow_reuse=True)(_check_lambda)


class FixedPointOptions(BaseModel):
    tolerance: float = 1e-10
    max_iterations: int = 100000

    @validator("tolerance")
    def positive_tolerance(cls, v):
        if not v > 0:
            raise ValueError("tolerance must be positive")
        return v

    @validator("max_iterations")
    def positive_iterations(cls, v):
        if v < 1:
            raise ValueError("max_iterations must be at least 1")
        return v


# Simulation classes
class SimModelId(int, enum.Enum):
    MODEL1 = 1
    MODEL2 = 2


class SimModel(BaseModel):
    id: SimModelId
    dimension: int = 5

    @validator("dimension")
    def five_dimensional(cls, v):
        if v != 5:
            raise ValueError("shipped models are 5-dimensional")
        return v


class StreamRole(int, enum.Enum):
    LABELED_INPUTS = 0
    UNLABELED_INPUTS = 1
    LABELS = 2


class RngSeed(BaseModel):
    master_seed: int

    @validator("master_seed")
    def unsigned_64(cls, v):
        if not 0 <= v <= UINT64_MAX:
            raise ValueError("master_seed must be a 64-bit unsigned integer")
        return v


class ExperimentConfig(BaseModel):
    model: SimModelId
    n_grid: List[int]
    m_grid: List[int]
    lambda_grid: List[float]
    replications: int
    master_seed: int
    output_path: Optional[Path] = None
    workers: int = 1

    @validator("n_grid")
    def labeled_sizes(cls, v):
        if not v or any(n < 2 for n in v):
            raise ValueError("n_grid must be non-empty with every n >= 2")
        return v

    @validator("m_grid")
    def unlabeled_sizes(cls, v):
        if not v or any(m < 1 for m in v):
            raise ValueError("m_grid must be non-empty with every m >= 1")
        return v

    @validator("lambda_grid")
    def lambdas(cls, v):
        if not v:
            raise ValueError("lambda_grid must be non-empty")
        return [_check_lambda(x) for x in v]

    @validator("replications", "workers")
    def positive_count(cls, v):
        if v < 1:
            raise ValueError("must be at least 1")
        return v

    @validator("master_seed")
    def seed_range(cls, v):
        return RngSeed(master_seed=v).master_seed


class RmseRecord(BaseModel):
    model: SimModelId
    n: int
    m: int
    lam: float
    rep: int
    seed: int
    rmse: float

    _lam = validator("lam", allow_reuse=True)(_check_lambda)

    @validator("rmse")
    def finite_nonnegative(cls, v):
        if not (math.isfinite(v) and v >= 0):
            raise ValueError("rmse must be finite and nonnegative")
        return v

    class Config:
        allow_mutation = False


class CellSummary(BaseModel):
    model: SimModelId
    n: int
    m: int
    lam: float
    count: int
    mean_rmse: float
    sd_rmse: float
    se_rmse: float


class CellFailure(BaseModel):
    model: SimModelId
    n: int
    m: int
    rep: int
    error_type: str
    message: str


class SweepResult(BaseModel):
    records: List[RmseRecord]
    failures: List[CellFailure] = []
