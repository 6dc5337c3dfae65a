"""On-disk JSON cache with atomic writes (write temporary, then rename)."""

from __future__ import annotations

import json
import os
import tempfile
from pathlib import Path
from typing import Any, Optional

ENV_VAR = "CMLAB_CACHE_DIR"

_override: Optional[Path] = None


def cache_dir() -> Path:
    if _override is not None:
        return _override
    return Path(os.environ.get(ENV_VAR, "cache"))


def set_cache_dir(path) -> None:
    """Redirect the cache for this process; ``None`` restores the default."""
    global _override
    _override = None if path is None else Path(path)


def read_json(relpath: str) -> Optional[Any]:
    path = cache_dir() / relpath
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except FileNotFoundError:
        return None
    except json.JSONDecodeError:
        # a torn file cannot occur with atomic writes; treat foreign junk as a miss
        return None


def write_json(relpath: str, obj: Any) -> Path:
    path = cache_dir() / relpath
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=path.name, suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            json.dump(obj, fh, separators=(",", ":"))
        os.replace(tmp, path)
    except BaseException:
        try:
            os.unlink(tmp)
        except FileNotFoundError:
            pass
        raise
    return path
