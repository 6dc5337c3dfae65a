import os
from pathlib import Path

import pytest

REPO = Path(__file__).resolve().parent.parent

# a shared warm cache keeps repeated runs fast; tests needing isolation use tmp_cache
os.environ.setdefault("CMLAB_CACHE_DIR", str(REPO / "cache"))

from cmlab import cache, classpoly, hecke, modpoly  # noqa: E402


def clear_memory_caches():
    classpoly.clear_memory_cache()
    modpoly.clear_memory_cache()
    hecke._ss_cached.cache_clear()


@pytest.fixture
def tmp_cache(tmp_path):
    cache.set_cache_dir(tmp_path)
    clear_memory_caches()
    yield tmp_path
    cache.set_cache_dir(None)
    clear_memory_caches()


def pytest_terminal_summary(terminalreporter):
    try:
        from tests.test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for key in sorted(RESULTS, key=lambda k: (int(str(k).rstrip("ab")), str(k))):
            terminalreporter.write_line(RESULTS[key])
