import pytest

from dressedcavity import SystemParams, dress


@pytest.fixture
def default_params():
    return SystemParams()


@pytest.fixture
def default_frame(default_params):
    return dress(default_params)
