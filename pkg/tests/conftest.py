import numpy as np
import pytest
from hypothesis import settings

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_states(n, seed=7):
    """n random two-qubit density matrices (half pure, half Wishart)."""
    from chargeq.qstate import random_density_matrix

    r = np.random.default_rng(seed)
    return [random_density_matrix(4, r) for _ in range(n)]
