"""Run configuration shared by the CLI and long-running searches."""

from __future__ import annotations

import os
from dataclasses import dataclass
from pathlib import Path

from . import cache
from .errors import CMLabError

OUTPUT_FORMATS = ("json", "csv", "table")


@dataclass(frozen=True)
class Config:
    cache_dir: Path = Path("cache")
    default_precision_bits: int = 128
    parallelism: int = 1
    output: str = "json"

    def __post_init__(self):
        if self.default_precision_bits < 64:
            raise ValueError("default_precision_bits must be at least 64")
        if self.parallelism < 1:
            raise ValueError("parallelism must be at least 1")
        if self.output not in OUTPUT_FORMATS:
            raise ValueError(f"output must be one of {OUTPUT_FORMATS}")

    @classmethod
    def from_env(cls, **overrides) -> "Config":
        """Defaults, then CMLAB_CACHE_DIR, then explicit non-None overrides."""
        values = {"cache_dir": Path(os.environ.get(cache.ENV_VAR, "cache"))}
        values.update({k: v for k, v in overrides.items() if v is not None})
        values["cache_dir"] = Path(values["cache_dir"])
        return cls(**values)

    def activate(self) -> None:
        """Point the on-disk cache at cache_dir, creating it if needed."""
        try:
            self.cache_dir.mkdir(parents=True, exist_ok=True)
        except OSError as exc:
            raise CMLabError(f"cache directory {self.cache_dir} is not usable: {exc}") from None
        if not os.access(self.cache_dir, os.W_OK):
            raise CMLabError(f"cache directory {self.cache_dir} is not writable")
        cache.set_cache_dir(self.cache_dir)
