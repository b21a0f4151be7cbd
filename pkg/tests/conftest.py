"""Shared pytest configuration.

Points RAAGSCL_HOME at a throwaway directory before any raagscl import so
config and log files never touch the real home directory.
"""

import os
import tempfile

os.environ.setdefault("RAAGSCL_HOME", tempfile.mkdtemp(prefix="raagscl-tests-"))

import pytest  # noqa: E402

from raagscl.raag_core import DefiningGraph  # noqa: E402


@pytest.fixture
def f2() -> DefiningGraph:
    """Free group on a, b."""
    return DefiningGraph.free(["a", "b"])


@pytest.fixture
def z2() -> DefiningGraph:
    """Free abelian group on a, b."""
    return DefiningGraph.free_abelian(["a", "b"])


@pytest.fixture
def path3() -> DefiningGraph:
    """Path a - b - c: b commutes with a and c, a and c do not commute."""
    return DefiningGraph.path(["a", "b", "c"])
