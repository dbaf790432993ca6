import numpy as np
import pytest

from src.core.graphshift import PaperVariant
from src.core.protocol import paper_protocol
from src.core.verify import sanity_protocol


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture
def original_spec():
    return paper_protocol(PaperVariant.ORIGINAL)


@pytest.fixture
def rearranged_spec():
    return paper_protocol(PaperVariant.REARRANGED)


@pytest.fixture(scope="session")
def sanity_spec():
    return sanity_protocol()
