import os
import time
from pathlib import Path
from typing import Union

import pandas as pd

FLOAT_FORMAT = '%.12g'
TIMESTAMP_PREFIX = '# generated '


def prepare_output(path: Union[str, Path]) -> Path:
    """
    Makes sure the parent directory of ``path`` exists and is writable.
    """
    path = Path(path)
    directory = path.parent

    # Ensure the directory exists or create it
    try:
        directory.mkdir(parents=True, exist_ok=True)
    except (PermissionError, OSError) as e:
        raise RuntimeError(f"Cannot create or access directory {directory}: {e}")

    if not directory.is_dir():
        raise NotADirectoryError(f"{directory} is not a directory")
    if not os.access(directory, os.W_OK):
        raise PermissionError(f"Insufficient permissions for directory {directory}")
    return path


def write_table(frame: pd.DataFrame, path: Union[str, Path], *, timestamp: bool = True) -> Path:
    """
    Writes a report as headered CSV with 12 significant digits.

    Args:
        frame (pd.DataFrame): The report; its column order is kept.
        path (str | Path): Destination file.
        timestamp (bool): Prefix the file with a single ``# generated <time>`` line.

    Returns:
        Path: The written file.
    """
    path = prepare_output(path)
    with open(path, 'w', newline='') as handle:
        if timestamp:
            handle.write(f"{TIMESTAMP_PREFIX}{time.strftime('%Y-%m-%dT%H:%M:%S%z')}\n")
        frame.to_csv(handle, index=False, float_format=FLOAT_FORMAT, lineterminator='\n')
    return path


def load_table(path: Union[str, Path]) -> pd.DataFrame:
    """
    Reads a table written by write_table, skipping the timestamp line.
    """
    return pd.read_csv(path, comment='#')

