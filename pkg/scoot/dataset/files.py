"""Atomic file writes shared by images, manifests and reports."""

from pathlib import Path
from typing import Union
import logging
import os
import tempfile

from ..core.types import DataError

logger = logging.getLogger(__name__)


def write_atomic(path: Union[str, Path], data: bytes, error: type = DataError) -> Path:
    """Write ``data`` to ``path`` through a temp file and rename.

    Readers never see a partially written file. I/O failures are raised as
    ``error`` with the destination path in the message.
    """
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        temp_fd, temp_path = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix='.tmp')
    except OSError as e:
        raise error(f"cannot write {path}: {e}") from e

    try:
        with os.fdopen(temp_fd, 'wb') as f:
            f.write(data)
            f.flush()
            os.fsync(f.fileno())
        os.replace(temp_path, path)
    except OSError as e:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise error(f"cannot write {path}: {e}") from e
    except BaseException:
        if os.path.exists(temp_path):
            os.unlink(temp_path)
        raise

    logger.debug("Wrote %d bytes to %s", len(data), path)
    return path
