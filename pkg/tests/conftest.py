import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from entmatch.antilinear import AntilinearOp
from entmatch.linalg import random_vector, rng_from_seed

settings.register_profile(
    "default", max_examples=50, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

SQ2 = np.sqrt(2)


def random_op(n: int, seed: int, m: int | None = None) -> AntilinearOp:
    """Haar-random unit-norm operator, i.e. the operator of a random pure state."""
    m = n if m is None else m
    return AntilinearOp(random_vector(n * m, seed).reshape(m, n))


def random_invertible_op(n: int, seed: int, min_sv: float = 1e-3) -> AntilinearOp:
    while True:
        op = random_op(n, seed)
        if np.linalg.svd(op.matrix, compute_uv=False)[-1] > min_sv:
            return op
        seed += 7919


def diag_op(alphas) -> AntilinearOp:
    return AntilinearOp(np.diag(np.asarray(alphas, dtype=complex)))


@pytest.fixture
def rng():
    return rng_from_seed(12345)


@pytest.fixture
def bell_op():
    return AntilinearOp(np.eye(2) / SQ2)


@pytest.fixture
def partial_op():
    return diag_op([np.sqrt(2 / 3), np.sqrt(1 / 3)])
