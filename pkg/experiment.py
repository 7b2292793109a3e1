import itertools
import logging
import math
from collections import Counter, OrderedDict
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable, List, Optional, Tuple, Union

import numpy as np

from datagen import bandwidth, cell_seed, sample_dataset
from exception import InvalidArgumentError, SslError
from kernel_graph import build_graph
from nadaraya_watson import nw_batch
from schemas import (
    CellFailure,
    CellSummary,
    ExperimentConfig,
    KernelSpec,
    RmseRecord,
    SimModelId,
    SweepResult,
)
from solvers import solve_hard, solve_scores

logger = logging.getLogger(__name__)

PRESET_LAMBDAS = [0.0, 0.01, 0.1, 5.0]
PRESET_N_GRID = [10, 30, 50, 100, 200, 300, 500, 800, 1000, 1500]
PRESET_M_GRID = [30, 60, 100, 300, 500, 1000]


def rmse(truth, estimates) -> float:
    truth = np.asarray(truth, dtype=np.float64).ravel()
    estimates = np.asarray(estimates, dtype=np.float64).ravel()
    if truth.shape != estimates.shape:
        raise InvalidArgumentError(
            f"length mismatch: {truth.shape[0]} truths vs {estimates.shape[0]} estimates"
        )
    if truth.size == 0:
        raise InvalidArgumentError("rmse needs at least one point")
    return float(np.sqrt(np.mean((truth - estimates) ** 2)))


def run_replication(config: ExperimentConfig, n: int, m: int, replication: int) -> List[RmseRecord]:
    """
    One Monte-Carlo replication of a (n, m) cell: a single simulated dataset scored under
    every lambda of the grid and compared with the true probabilities.

    \n**param** config: experiment design (model, lambda grid, master seed)
    \n**param** n: labeled sample size
    \n**param** m: unlabeled sample size
    \n**param** replication: replication index, selects the random streams
    \n**return**: one RmseRecord per lambda, in grid order.
    """
    seed = cell_seed(config.master_seed, replication)
    data, truth = sample_dataset(config.model, n, m, seed)
    graph = build_graph(data, KernelSpec(bandwidth=bandwidth(n)))
    records = []
    for lam in config.lambda_grid:
        try:
            scores = solve_scores(graph, data.labels, lam)
        except SslError as e:
            if hasattr(e, "context"):
                e.context.update(model=int(config.model), n=n, m=m, rep=replication, lam=lam)
            raise
        records.append(
            RmseRecord(
                model=config.model,
                n=n,
                m=m,
                lam=lam,
                rep=replication,
                seed=seed,
                rmse=rmse(truth, scores.values),
            )
        )
    return records


def _run_cell(task: Tuple[ExperimentConfig, int, int, int]) -> Union[List[RmseRecord], CellFailure]:
    config, n, m, rep = task
    try:
        return run_replication(config, n, m, rep)
    except SslError as e:
        logger.error("cell n=%d m=%d rep=%d failed: %s", n, m, rep, e)
        return CellFailure(
            model=config.model,
            n=n,
            m=m,
            rep=rep,
            error_type=type(e).__name__,
            message=str(e),
        )


def sweep(config: ExperimentConfig, workers: Optional[int] = None) -> SweepResult:
    """
    Runs every (n, m, replication) cell of the design. Records come back in canonical
    order (n grid, m grid, replication, lambda grid) whatever the number of workers; a
    failed cell is kept as a CellFailure and does not stop the sweep.
    """
    workers = workers or config.workers
    tasks = [
        (config, n, m, rep)
        for n, m, rep in itertools.product(config.n_grid, config.m_grid, range(config.replications))
    ]
    logger.info("sweep of %d cells on %d worker(s)", len(tasks), workers)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            outcomes = list(pool.map(_run_cell, tasks, chunksize=max(1, len(tasks) // (4 * workers))))
    else:
        outcomes = [_run_cell(task) for task in tasks]

    records, failures = [], []
    for outcome in outcomes:
        if isinstance(outcome, CellFailure):
            failures.append(outcome)
        else:
            records.extend(outcome)
    if failures:
        logger.error("%d of %d cells failed", len(failures), len(tasks))
    return SweepResult(records=records, failures=failures)


def aggregate(records: Iterable[RmseRecord]) -> List[CellSummary]:
    """
    Mean, standard deviation and standard error of rmse per (model, n, m, lambda) cell.

    A lambda listed twice in the grid gives two cells: within a replication the k-th
    record with a given lambda goes to the k-th cell of that lambda.
    """
    cells = OrderedDict()
    seen = Counter()
    for r in records:
        key = (r.model, r.n, r.m, r.rep, r.lam)
        slot = seen[key]
        seen[key] += 1
        cells.setdefault((r.model, r.n, r.m, r.lam, slot), []).append(r.rmse)
    summaries = []
    for (model, n, m, lam, _), values in cells.items():
        values = np.asarray(values)
        sd = float(values.std(ddof=1)) if values.size > 1 else 0.0
        summaries.append(
            CellSummary(
                model=model,
                n=n,
                m=m,
                lam=lam,
                count=values.size,
                mean_rmse=float(values.mean()),
                sd_rmse=sd,
                se_rmse=sd / math.sqrt(values.size),
            )
        )
    return summaries


def figure_config(figure: int, replications: int = 1000, master_seed: int = 0) -> ExperimentConfig:
    """
    Preset designs 1-4: 1 and 3 vary n at m = 30, 2 and 4 vary m at
    n = 100; 3 and 4 use Model 2.
    """
    if figure not in (1, 2, 3, 4):
        raise InvalidArgumentError("figure must be 1, 2, 3 or 4")
    vary_n = figure in (1, 3)
    return ExperimentConfig(
        model=SimModelId.MODEL1 if figure in (1, 2) else SimModelId.MODEL2,
        n_grid=PRESET_N_GRID if vary_n else [100],
        m_grid=[30] if vary_n else PRESET_M_GRID,
        lambda_grid=PRESET_LAMBDAS,
        replications=replications,
        master_seed=master_seed,
    )


def nw_link_statistic(
    model: SimModelId, n: int, m: int, replications: int, master_seed: int
) -> float:
    """
    Mean over replications and unlabeled points of |hard-criterion score - Nadaraya-Watson
    estimate|, both computed on the same simulated data with bandwidth h_n.
    """
    gaps = []
    for rep in range(replications):
        data, _ = sample_dataset(model, n, m, cell_seed(master_seed, rep))
        kernel = KernelSpec(bandwidth=bandwidth(n))
        hard = solve_hard(build_graph(data, kernel), data.labels).values
        gaps.append(np.mean(np.abs(hard - nw_batch(data, kernel).values)))
    return float(np.mean(gaps))
