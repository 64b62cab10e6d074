import numpy as np
import pytest

from expression.parser import parse
from quadrature.function_handle import FunctionHandle
from utils.config import ToolkitConfig, set_config


@pytest.fixture(autouse=True)
def default_config(monkeypatch):
    """Every test starts from the built-in defaults."""
    monkeypatch.delenv("FHT_MAX_PANELS", raising=False)
    config = set_config(ToolkitConfig())
    yield config
    set_config(ToolkitConfig())


@pytest.fixture
def chi():
    return FunctionHandle.indicator(-1.0, 1.0)


@pytest.fixture
def half_chi():
    return parse("chi(0,1)")


@pytest.fixture
def interior_points():
    return np.linspace(-0.95, 0.95, 39)


@pytest.fixture
def small_grid(default_config):
    default_config.norms.grid = 1024
    default_config.norms.ladder_depth = 48
    return default_config
