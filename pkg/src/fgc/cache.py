"""On-disk JSON cache with atomic writes.

Entries that fail to parse or carry a different format version are treated
as missing, so a corrupt file only costs a recomputation.
"""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path

CACHE_VERSION = 1


def default_cache_dir() -> Path:
    env = os.environ.get("FGC_CACHE")
    if env:
        return Path(env)
    return Path.home() / ".cache" / "fgc"


def atomic_write_json(path: Path, data) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            json.dump(data, fh, indent=1)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def read_json(path: Path):
    """Parsed content, or None if the file is missing, corrupt or from another version."""
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, ValueError):
        return None
    if not isinstance(data, dict) or data.get("cache_version") != CACHE_VERSION:
        return None
    return data


def list_entries(cache_dir: Path) -> list[Path]:
    cache_dir = Path(cache_dir)
    if not cache_dir.is_dir():
        return []
    return sorted(p for p in cache_dir.iterdir() if p.suffix == ".json")


def clear(cache_dir: Path) -> int:
    entries = list_entries(cache_dir)
    for p in entries:
        p.unlink()
    return len(entries)
