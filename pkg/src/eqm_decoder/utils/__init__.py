"""
Utilities module for the EqM action decoder.
Provides checkpoint, dataset and CSV artifact IO.
"""
from .checkpoint import CHECKPOINT_MAGIC, load_checkpoint, save_checkpoint
from .csv_utils import read_csv, write_csv
from .dataset_io import DATASET_MAGIC, load_dataset, save_dataset
from .files import ByteReader, ensure_writable, read_bytes

__all__ = [
    # Checkpoints
    "CHECKPOINT_MAGIC",
    "load_checkpoint",
    "save_checkpoint",

    # Datasets
    "DATASET_MAGIC",
    "load_dataset",
    "save_dataset",

    # CSV
    "read_csv",
    "write_csv",

    # Files
    "ByteReader",
    "ensure_writable",
    "read_bytes",
]
