from __future__ import annotations

import os

import pytest


@pytest.fixture(autouse=True, scope="session")
def _private_cache_dir(tmp_path_factory):
    # keep the overlap-graph cache out of the home directory during tests
    old = os.environ.get("BIASLAB_CACHE_DIR")
    os.environ["BIASLAB_CACHE_DIR"] = str(tmp_path_factory.mktemp("omega_cache"))
    yield
    if old is None:
        os.environ.pop("BIASLAB_CACHE_DIR", None)
    else:
        os.environ["BIASLAB_CACHE_DIR"] = old
