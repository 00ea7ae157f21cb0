import pytest

from petrikit.examples import bakery, four_seasons, light_fan, light_fan_steps


@pytest.fixture
def bakery_net():
    return bakery()


@pytest.fixture
def seasons_net():
    return four_seasons()


@pytest.fixture
def lightfan_net():
    return light_fan()


@pytest.fixture
def lightfan_steps():
    return light_fan_steps()
