import csv
import logging
from pathlib import Path
from typing import Optional, Tuple

import numpy as np

from exception import InputFileError

logger = logging.getLogger(__name__)


def load_points(path, labeled: bool) -> Tuple[np.ndarray, Optional[np.ndarray]]:
    """
    Reads a comma-separated point file, one point per row. In a labeled file the last
    column is the response.

    \n**param** path: the file to read
    \n**param** labeled: whether the last column holds labels
    \n**return**: (points, labels); labels is None for an unlabeled file.
    """
    path = Path(path)
    rows = []
    width = None
    try:
        with open(path, "r", encoding="utf-8", newline="") as f:
            for line, row in enumerate(csv.reader(f), start=1):
                if not row or all(not cell.strip() for cell in row):
                    continue
                try:
                    values = [float(cell) for cell in row]
                except ValueError:
                    raise InputFileError("non-numeric entry", path, line)
                if width is None:
                    width = len(values)
                    if labeled and width < 2:
                        raise InputFileError("a labeled row needs coordinates and a label", path, line)
                elif len(values) != width:
                    raise InputFileError(
                        f"expected {width} columns, found {len(values)}", path, line
                    )
                if not all(np.isfinite(values)):
                    raise InputFileError("non-finite entry", path, line)
                rows.append(values)
    except OSError as e:
        raise InputFileError(f"cannot open file ({e.strerror})", path) from e
    except UnicodeDecodeError as e:
        raise InputFileError("not valid UTF-8 text", path) from e
    except csv.Error as e:
        raise InputFileError(f"malformed CSV ({e})", path) from e
    if not rows:
        raise InputFileError("file holds no points", path)

    table = np.array(rows, dtype=np.float64)
    logger.debug("read %d rows from %s", table.shape[0], path)
    if labeled:
        return table[:, :-1], table[:, -1]
    return table, None
