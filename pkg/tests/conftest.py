import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(entropy=seed))


def random_invertible(d: int, rng: np.random.Generator) -> np.ndarray:
    """Well-conditioned random invertible matrix (singular values in [0.5, 2])."""
    q1, _ = np.linalg.qr(rng.standard_normal((d, d)))
    q2, _ = np.linalg.qr(rng.standard_normal((d, d)))
    svals = rng.uniform(0.5, 2.0, size=d)
    return q1 @ np.diag(svals) @ q2


def random_spd(d: int, rng: np.random.Generator) -> np.ndarray:
    a = random_invertible(d, rng)
    return a @ a.T + 0.1 * np.eye(d)
