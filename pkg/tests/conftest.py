"""Shared fixtures for the pohocheck test suite."""

import sys
from pathlib import Path

import numpy as np
import pytest

# Add src to path for imports
src_path = Path(__file__).parent.parent / "src"
if str(src_path) not in sys.path:
    sys.path.insert(0, str(src_path))

from core.spectral import GridMap1D, theta_grid
from core.zoo import resolve_map


@pytest.fixture
def circle_grid():
    """Grid map of a zoo circle map: circle_grid("blaschke:0.5", 1024)."""
    def make(map_id: str, N: int = 1024) -> GridMap1D:
        return resolve_map(map_id).grid(N)
    return make


@pytest.fixture
def identity_1024() -> GridMap1D:
    return resolve_map("identity").grid(1024)


@pytest.fixture
def scalar_map():
    """Scalar grid map from a function of θ."""
    def make(func, N: int = 64) -> GridMap1D:
        return GridMap1D(func(theta_grid(N)))
    return make


@pytest.fixture
def planar():
    return resolve_map


@pytest.fixture
def rng():
    return np.random.default_rng(42)
