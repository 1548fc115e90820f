import os

import pytest


@pytest.fixture(scope="session", autouse=True)
def output_folder():
    os.makedirs("output", exist_ok=True)
    yield "output"
