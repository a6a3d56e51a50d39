"""Shared fixtures for the test suite."""

from __future__ import annotations

import io
import os

import numpy as np
import pytest

os.environ.setdefault("XPCC_LOG", "WARNING")

from xpcc import synthetic  # noqa: E402
from xpcc.cloud.model import PointCloud  # noqa: E402
from xpcc.streaming import SummaryEmitter  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def shell() -> PointCloud:
    return synthetic.elliptic_shell()


@pytest.fixture(scope="session")
def stacked() -> PointCloud:
    return synthetic.stacked_cylinders()


@pytest.fixture(scope="session")
def plate() -> PointCloud:
    return synthetic.flat_plate()


@pytest.fixture
def emitter() -> SummaryEmitter:
    return SummaryEmitter(out=io.StringIO())
