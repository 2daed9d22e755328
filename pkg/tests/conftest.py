import numpy as np
import pytest

from boxball import close_config


def random_config(rng, max_len=200, max_density=0.45, anchored=False):
    """Record-closed random configuration for property tests."""
    n = int(rng.integers(1, max_len + 1))
    lam = rng.uniform(0.02, max_density)
    bits = (rng.random(n) < lam).astype(np.int8)
    if anchored:
        bits[0] = 0
    return close_config(bits)


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
