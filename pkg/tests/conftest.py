import numpy as np
import pytest

from prefaudit.estimation import nll
from prefaudit.model import ComparisonRecord


def central_difference_gradient(theta, data, lam, h=1e-5):
    """Independent finite-difference oracle for the NLL gradient."""
    theta = np.asarray(theta, dtype=np.float64)
    grad = np.zeros_like(theta)
    for j in range(theta.size):
        e = np.zeros_like(theta)
        e[j] = h
        grad[j] = (nll(theta + e, data, lam) - nll(theta - e, data, lam)) / (2 * h)
    return grad


def random_records(rng, d, n, voter_ids=(0,)):
    """Small random dataset with arbitrary labels, for oracle checks."""
    records = []
    for _ in range(n):
        records.append(
            ComparisonRecord(
                voter_id=int(rng.choice(voter_ids)),
                a0=rng.uniform(-1, 1, d),
                a1=rng.uniform(-1, 1, d),
                label=int(rng.integers(0, 2)),
            )
        )
    return records


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
