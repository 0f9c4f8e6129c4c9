import pytest

from eltsim.params import derive, rubidium_config


@pytest.fixture(scope="session")
def config():
    return rubidium_config()


@pytest.fixture(scope="session")
def derived(config):
    return derive(config)
