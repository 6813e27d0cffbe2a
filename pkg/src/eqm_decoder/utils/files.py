"""
File helpers shared by the artifact writers and readers.
"""
from pathlib import Path
from typing import Union

import numpy as np

from ..errors import ConfigurationError, FormatError

PathLike = Union[str, Path]


def ensure_writable(path: PathLike, force: bool = False) -> Path:
    """
    Refuse to replace an existing file unless forced; create parent directories.

    Args:
        path: Target file
        force: Allow overwriting

    Returns:
        The target as a Path
    """
    target = Path(path)
    if target.exists() and not force:
        raise ConfigurationError(f"{target} already exists (use --force to overwrite)", config_key="force")
    target.parent.mkdir(parents=True, exist_ok=True)
    return target


def read_bytes(path: PathLike) -> bytes:
    source = Path(path)
    if not source.is_file():
        raise ConfigurationError(f"{source} does not exist", config_key="path")
    return source.read_bytes()


class ByteReader:
    """Sequential little-endian reader over a byte buffer."""

    def __init__(self, data: bytes, path: PathLike):
        self.data = data
        self.path = str(path)
        self.offset = 0

    def expect_magic(self, magic: bytes) -> None:
        if self.data[:len(magic)] != magic:
            raise FormatError(f"bad magic, expected {magic!r}", path=self.path)
        self.offset = len(magic)

    def take(self, dtype: str, count: int) -> np.ndarray:
        size = np.dtype(dtype).itemsize * count
        if count < 0 or self.offset + size > len(self.data):
            raise FormatError("file is truncated", path=self.path)
        values = np.frombuffer(self.data, dtype=dtype, count=count, offset=self.offset)
        self.offset += size
        return values.copy()

    def finish(self) -> None:
        if self.offset != len(self.data):
            raise FormatError(f"{len(self.data) - self.offset} unexpected trailing bytes", path=self.path)
