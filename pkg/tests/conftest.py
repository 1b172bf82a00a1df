import os
import tempfile

# keep test runs from writing into the working tree
os.environ.setdefault("MEMCHANNEL_LOG_FILE", os.path.join(tempfile.mkdtemp(prefix="memchannel-"), "test.log"))

import numpy as np
import pytest

from core.spectral import nearest_neighbor_matrix
from core.state import ChannelParams


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def pair_params():
    """n=2 memory channel with off-diagonal squeezing 0.1."""
    return ChannelParams(n=2, eta=0.7, M=0.5, Z=nearest_neighbor_matrix(2, 0.1))


@pytest.fixture
def memoryless_params():
    return ChannelParams.memoryless(3, 0.6, 0.8)
