"""
Pytest configuration and shared fixtures.
"""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add the repository root to path for imports
repo_root = Path(__file__).parent.parent
sys.path.insert(0, str(repo_root))

from liesplit.config import CONFIG_ENV_VAR, get_config  # noqa: E402
from liesplit.structures import BilinearStructure  # noqa: E402


CANONICAL_STRUCTURES = {
    "identity-4": lambda: BilinearStructure.identity(4),
    "pq-2-2": lambda: BilinearStructure.pseudo_euclidean(2, 2),
    "pq-3-1": lambda: BilinearStructure.pseudo_euclidean(3, 1),
    "pq-1-4": lambda: BilinearStructure.pseudo_euclidean(1, 4),
    "symplectic-2": lambda: BilinearStructure.symplectic(2),
    "symplectic-3": lambda: BilinearStructure.symplectic(3),
}


@pytest.fixture
def rng():
    """Seeded generator; every test gets the same stream."""
    return np.random.default_rng(20240101)


@pytest.fixture(params=sorted(CANONICAL_STRUCTURES), ids=sorted(CANONICAL_STRUCTURES))
def structure(request):
    """Each canonical bilinear structure in turn."""
    return CANONICAL_STRUCTURES[request.param]()


def build_definite(rng, J: BilinearStructure, spread: float = 1.0) -> np.ndarray:
    """
    A = (P + K) J^-1 with P symmetric positive definite and K skew.

    Then A J = P + K, so the definite factor (HJ for symmetric J, SJ for
    skew J) is exactly P.
    """
    n = J.n
    X = rng.standard_normal((n, n))
    P = X @ X.T / n + spread * np.eye(n)
    Y = rng.standard_normal((n, n))
    K = Y - Y.T
    return (P + K) @ J.inverse


@pytest.fixture
def make_definite():
    """Builder for J-HSS instances whose definite factor is positive definite."""
    return build_definite


@pytest.fixture
def laplacian_1d():
    """tridiag(-1, 2, -1) of the requested size."""
    def build(n: int) -> np.ndarray:
        return 2.0 * np.eye(n) - np.eye(n, k=1) - np.eye(n, k=-1)
    return build


@pytest.fixture
def override_config(tmp_path, monkeypatch):
    """Point get_config at a YAML override for the duration of one test."""
    def apply(text: str) -> None:
        path = tmp_path / "override.yaml"
        path.write_text(text)
        monkeypatch.setenv(CONFIG_ENV_VAR, str(path))
        get_config.cache_clear()
    yield apply
    get_config.cache_clear()
