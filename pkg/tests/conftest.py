import sys
from pathlib import Path

import pytest

PROJECT_ROOT = Path(__file__).resolve().parents[1]
if str(PROJECT_ROOT) not in sys.path:
    sys.path.insert(0, str(PROJECT_ROOT))

from persistence.database import Database  # noqa: E402


@pytest.fixture
def db(tmp_path):
    """Fresh run store per test."""

    return Database(tmp_path / "runs.db")


@pytest.fixture(autouse=True)
def _unset_seed_override(monkeypatch):
    monkeypatch.delenv("RIGID_GALOIS_SEED", raising=False)
