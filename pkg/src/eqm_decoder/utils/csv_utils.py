"""
Deterministic CSV output.
"""
import pandas as pd

from ..logging import get_logger
from .files import PathLike, ensure_writable

logger = get_logger(__name__)


def write_csv(path: PathLike, frame: pd.DataFrame, force: bool = False) -> None:
    """
    Write a frame with a header row, ',' separators, '.' decimals and '\\n' line endings.

    Args:
        path: Output file
        frame: Rows to write, columns in output order
        force: Overwrite an existing file
    """
    target = ensure_writable(path, force)
    frame.to_csv(target, index=False, lineterminator="\n", float_format="%.10g")
    logger.info("Wrote CSV", path=str(target), rows=len(frame))


def read_csv(path: PathLike) -> pd.DataFrame:
    return pd.read_csv(path)
