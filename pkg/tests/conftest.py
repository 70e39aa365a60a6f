import random

import pytest

from msg_lab.gf import GF

# the six fields the randomized batteries rotate through
FIELDS = [GF(2), GF(3), GF(5), GF(7), GF(2, 2), GF(3, 2)]


@pytest.fixture
def rng():
    return random.Random(987654321)
