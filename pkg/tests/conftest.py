import pytest
from numpy.random import PCG64, Generator, SeedSequence


@pytest.fixture
def rng():
    return Generator(PCG64(SeedSequence(20240817)))


def fresh_rng(*key):
    return Generator(PCG64(SeedSequence(key if key else 0)))
