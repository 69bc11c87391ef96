"""Shared pytest fixtures for qpack tests."""

import json
import math
from collections.abc import Callable
from pathlib import Path
from typing import Any

import numpy as np
import pytest
from dotenv import load_dotenv

from qpack_cli.models import ClusterSpec
from qpack_cli.pipeline import PreparedStrip, prepare

REPO_ROOT = Path(__file__).parent.parent
DATA_DIR = Path(__file__).parent / "data"
CLUSTERS_DIR = REPO_ROOT / "clusters"

TAU = (1.0 + math.sqrt(5.0)) / 2.0

# Load .env file so QPACK_* overrides apply to local runs
env_file = REPO_ROOT / ".env"
if env_file.exists():
    load_dotenv(env_file)


# ============================================================
# Cluster definitions
# ============================================================

FIBONACCI = {"group": "inversion", "shells": [[1.0], [TAU]], "limits": {"radius": 50.0}}

FIBONACCI_K3 = {"group": "inversion", "shells": [[1.0], [TAU], [TAU * TAU]]}

DECAGON_SINGLE = {"group": "dihedral", "m": 5, "shells": [[1.0, 0.0]]}

DECAGONAL_CENTERED = {"group": "dihedral", "m": 5, "shells": [[1.1, 1.3], [1.0, 0.0]]}

DECAGONAL_FIGURE = {
    "group": "dihedral",
    "m": 5,
    "shells": [[1.1, 1.3], [1.0, 0.0]],
    "half_rule": "alternate",
    "shift": -0.3,
    "limits": {"radius": 15.0},
}

ICOSAHEDRAL_THREE_SHELL = {
    "group": "icosahedral",
    "shells": [
        [1.0 / math.sqrt(2.0 + TAU), TAU / math.sqrt(2.0 + TAU), 0.0],
        [2.0 / math.sqrt(3.0), 2.0 / math.sqrt(3.0), 2.0 / math.sqrt(3.0)],
        [3.0, 0.0, 0.0],
    ],
}


def _prepared(data: dict[str, Any]) -> PreparedStrip:
    return prepare(ClusterSpec.model_validate(data))


@pytest.fixture
def tau() -> float:
    """The golden ratio."""
    return TAU


@pytest.fixture(scope="session")
def fibonacci() -> PreparedStrip:
    """n=1, k=2 strip with v-row (1, tau)."""
    return _prepared(FIBONACCI)


@pytest.fixture(scope="session")
def fibonacci_k3() -> PreparedStrip:
    """n=1, k=3 strip with v-row (1, tau, tau^2)."""
    return _prepared(FIBONACCI_K3)


@pytest.fixture(scope="session")
def decagon_single() -> PreparedStrip:
    """n=2, k=5 strip from the single decagon shell (1, 0)."""
    return _prepared(DECAGON_SINGLE)


@pytest.fixture(scope="session")
def decagonal_centered() -> PreparedStrip:
    """n=2, k=10 two-shell decagonal strip, centered window."""
    return _prepared(DECAGONAL_CENTERED)


@pytest.fixture(scope="session")
def decagonal_figure() -> PreparedStrip:
    """n=2, k=10 two-shell decagonal strip matching the plotted fragment."""
    return _prepared(DECAGONAL_FIGURE)


@pytest.fixture(scope="session")
def icosahedral() -> PreparedStrip:
    """n=3, k=31 icosahedron + dodecahedron + icosidodecahedron strip."""
    return _prepared(ICOSAHEDRAL_THREE_SHELL)


@pytest.fixture(scope="session")
def figure_points() -> np.ndarray:
    """Coordinates of the plotted two-shell decagonal fragment (x, y per row)."""
    return np.loadtxt(DATA_DIR / "decagonal_fragment.csv", delimiter=",", skiprows=1)


# ============================================================
# File helpers
# ============================================================


@pytest.fixture
def cluster_file(tmp_path: Path) -> Callable[..., Path]:
    """Write a cluster definition to a temporary JSON file."""

    def _write(data: dict[str, Any] | str, name: str = "cluster.json") -> Path:
        path = tmp_path / name
        path.write_text(data if isinstance(data, str) else json.dumps(data), encoding="utf-8")
        return path

    return _write


@pytest.fixture
def clusters_dir() -> Path:
    """Directory with the sample cluster files shipped in the repository."""
    return CLUSTERS_DIR
