from pathlib import Path

import pytest

from ppcflow.apps.image import pgm_read

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir():
    return FIXTURES


@pytest.fixture(scope="session")
def camera():
    return pgm_read(FIXTURES / "camera.pgm")


@pytest.fixture(scope="session")
def astronaut():
    return pgm_read(FIXTURES / "astronaut_gray.pgm")
