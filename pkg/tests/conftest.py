from pathlib import Path

import pytest

from kioskbot.gateway import build_wiring, load_config

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def app_config():
    return load_config(FIXTURES / "config.json")


@pytest.fixture(scope="session")
def wiring(app_config):
    return build_wiring(app_config)


@pytest.fixture(scope="session")
def machine_config(wiring):
    return wiring.machine_config
