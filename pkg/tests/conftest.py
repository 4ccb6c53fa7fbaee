import pytest

from softedge import derive_config


@pytest.fixture
def unit_cfg():
    """Default config at scale 1: L=16, H=127, steps 0.25 / 1 / 4."""
    return derive_config(1.0)
