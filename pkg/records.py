import csv
import logging
from pathlib import Path
from typing import Iterable, List, Union

from decouple import Csv, RepositoryEnv
from pydantic import ValidationError

from exception import InvalidArgumentError, RecordsIOError
from schemas import ExperimentConfig, RmseRecord

logger = logging.getLogger(__name__)

FIELDS = ["model", "n", "m", "lambda", "rep", "seed", "rmse"]

PathLike = Union[str, Path]


def format_float(value: float) -> str:
    """Shortest decimal that reads back to the same double; infinity is `inf`."""
    return repr(float(value))


# RECORDS
def write_records(records: Iterable[RmseRecord], path: PathLike) -> Path:
    path = Path(path)
    try:
        if path.parent and not path.parent.exists():
            path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            writer = csv.writer(f, lineterminator="\n")
            writer.writerow(FIELDS)
            count = 0
            for r in records:
                writer.writerow(
                    [
                        int(r.model),
                        r.n,
                        r.m,
                        format_float(r.lam),
                        r.rep,
                        r.seed,
                        format_float(r.rmse),
                    ]
                )
                count += 1
    except OSError as e:
        logger.error(e)
        raise RecordsIOError(f"cannot write records ({e.strerror})", path) from e
    logger.info("wrote %d records to %s", count, path)
    return path


def read_records(path: PathLike) -> List[RmseRecord]:
    path = Path(path)
    records = []
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            reader = csv.reader(f)
            header = next(reader, None)
            if header != FIELDS:
                raise RecordsIOError(f"unexpected header {header}", path)
            for line, row in enumerate(reader, start=2):
                if len(row) != len(FIELDS):
                    raise RecordsIOError(f"line {line} has {len(row)} fields", path)
                model, n, m, lam, rep, seed, rmse = row
                try:
                    records.append(
                        RmseRecord(
                            model=int(model),
                            n=int(n),
                            m=int(m),
                            lam=float(lam),
                            rep=int(rep),
                            seed=int(seed),
                            rmse=float(rmse),
                        )
                    )
                except (ValueError, ValidationError) as e:
                    raise RecordsIOError(f"line {line} is malformed ({e})", path) from e
    except OSError as e:
        logger.error(e)
        raise RecordsIOError(f"cannot read records ({e.strerror})", path) from e
    except UnicodeDecodeError as e:
        raise RecordsIOError("records file is not valid UTF-8 text", path) from e
    except csv.Error as e:
        raise RecordsIOError(f"malformed CSV ({e})", path) from e
    return records


# CONFIG FILES
_REQUIRED = object()


def _option(entries: dict, key: str, cast=str, default=_REQUIRED):
    if key not in entries:
        if default is _REQUIRED:
            raise InvalidArgumentError(f"missing config key {key}")
        return default
    return cast(entries[key])


def read_config(path: PathLike) -> ExperimentConfig:
    """
    Reads a flat key=value experiment config; grids are comma-separated lists. Only the
    file's own entries are used, environment variables never stand in for a key.

    \n**param** path: the config file
    \n**return**: a validated ExperimentConfig. Missing keys or bad values raise
    InvalidArgumentError, an unreadable file raises RecordsIOError.
    """
    path = Path(path)
    try:
        entries = RepositoryEnv(str(path)).data
    except OSError as e:
        raise RecordsIOError(f"cannot read config ({e.strerror})", path) from e
    except UnicodeDecodeError as e:
        raise RecordsIOError("config file is not valid UTF-8 text", path) from e
    try:
        return ExperimentConfig(
            model=_option(entries, "model", cast=int),
            n_grid=_option(entries, "n_grid", cast=Csv(int)),
            m_grid=_option(entries, "m_grid", cast=Csv(int)),
            lambda_grid=_option(entries, "lambda_grid", cast=Csv(float)),
            replications=_option(entries, "replications", cast=int),
            master_seed=_option(entries, "master_seed", cast=int),
            output_path=_option(entries, "output_path", default=None),
            workers=_option(entries, "workers", cast=int, default=1),
        )
    except InvalidArgumentError as e:
        raise InvalidArgumentError(f"{path}: {e}") from e
    except ValueError as e:
        raise InvalidArgumentError(f"{path}: invalid config ({e})") from e


def write_config(config: ExperimentConfig, path: PathLike) -> Path:
    path = Path(path)
    lines = [
        f"model={int(config.model)}",
        "n_grid=" + ",".join(str(n) for n in config.n_grid),
        "m_grid=" + ",".join(str(m) for m in config.m_grid),
        "lambda_grid=" + ",".join(format_float(x) for x in config.lambda_grid),
        f"replications={config.replications}",
        f"master_seed={config.master_seed}",
        f"workers={config.workers}",
    ]
    if config.output_path is not None:
        lines.append(f"output_path={config.output_path}")
    try:
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    except OSError as e:
        raise RecordsIOError(f"cannot write config ({e.strerror})", path) from e
    return path
