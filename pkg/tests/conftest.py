import random
from pathlib import Path

import pytest

from sopkit.instance import load_instance

FIXTURES = Path(__file__).parent / "fixtures"


@pytest.fixture(scope="session")
def t4():
    return load_instance(FIXTURES / "t4.sop")


@pytest.fixture(scope="session")
def t4_text():
    return (FIXTURES / "t4.sop").read_text()


@pytest.fixture(scope="session")
def t4_soplib_text():
    return (FIXTURES / "t4.soplib").read_text()


@pytest.fixture
def rng():
    return random.Random(0xC0FFEE)
