import numpy as np
import pytest

from vandy.nodes import make_node_set


def spread_frequencies(rng, K, floor_fraction=0.2):
    """K frequencies with wrap separation at least ``floor_fraction / K``."""
    d = rng.uniform(floor_fraction, 1.0) / K
    r = rng.uniform(0.0, max(0.0, 1 / K - d), K)
    return (np.arange(K) / K + r) % 1.0


def random_disk_nodes(rng, K, a_lo=0.3, a_hi=1.0):
    return make_node_set(rng.uniform(a_lo, a_hi, K), spread_frequencies(rng, K))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
