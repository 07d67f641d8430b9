import numpy as np
import pytest

from slowlight.models import MediumParams
from tests.cells import make_cell, random_cell


@pytest.fixture
def paper_cell() -> MediumParams:
    return make_cell(10.0)


@pytest.fixture
def dephased_cell() -> MediumParams:
    return make_cell(5e3)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(20240517)


@pytest.fixture
def random_cells(rng):
    def draw(count: int = 100, **limits):
        return [random_cell(rng, **limits) for _ in range(count)]

    return draw
