"""
Shared fixtures: model parameters at the standard grid points and seeded streams
"""

import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(os.path.dirname(os.path.abspath(__file__))))

from model.params import LAMBDA_C, ModelParams
from samplers.rng import make_rng

SEED = 20240611


@pytest.fixture
def critical() -> ModelParams:
    return ModelParams.critical()


@pytest.fixture
def eighth() -> ModelParams:
    """h = 1/8, m = 3 - 2 sqrt(2)"""
    return ModelParams.from_h(0.125)


@pytest.fixture
def fifth() -> ModelParams:
    """h = 0.2: hulls stay small enough to sample by the hundred"""
    return ModelParams.from_h(0.2)


@pytest.fixture
def half_critical() -> ModelParams:
    return ModelParams.from_lambda(LAMBDA_C / 2)


@pytest.fixture
def rng():
    return make_rng(SEED)
