"""Shared fixtures for the module_utils unit tests."""

import os

import numpy as np
import pytest

from plugins.module_utils.geometry_core import OneRingFan, TriangleMesh
from plugins.module_utils.synthesis import icosahedron_mesh, octahedron_mesh

FIXTURES = os.path.join(os.path.dirname(os.path.abspath(__file__)), "fixtures")


@pytest.fixture
def fixture_path():
    def _path(name):
        return os.path.join(FIXTURES, name)
    return _path


@pytest.fixture
def octahedron():
    return octahedron_mesh()


@pytest.fixture
def icosahedron():
    return icosahedron_mesh()


@pytest.fixture
def flat_hexagon():
    """Regular unit hexagon fan in the z = 0 plane."""
    theta = np.arange(6) * np.pi / 3.0
    return OneRingFan(np.zeros(3), np.column_stack([np.cos(theta), np.sin(theta), np.zeros(6)]))


@pytest.fixture
def open_fan_mesh():
    """Hexagonal fan with one missing triangle; every vertex is on the boundary."""
    theta = np.arange(6) * np.pi / 3.0
    rim = np.column_stack([np.cos(theta), np.sin(theta), np.zeros(6)])
    vertices = np.vstack([np.zeros(3), rim])
    return TriangleMesh(vertices, [(0, i, i + 1) for i in range(1, 6)])
