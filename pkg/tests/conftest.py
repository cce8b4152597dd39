import numpy as np
import pytest

from posmaps import LinMap


@pytest.fixture
def rng():
    return np.random.default_rng(20101)


def random_hermitian(rng, n, scale=1.0):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return scale * (X + X.conj().T) / 2


def random_map(rng, dim_k, dim_h, shift=0.0):
    """Self-adjoint map with Gaussian Hermitian Choi matrix plus ``shift * Tr``."""
    n = dim_k * dim_h
    return LinMap(dim_k, dim_h, random_hermitian(rng, n) + shift * np.eye(n))


def random_unit(rng, n):
    v = rng.normal(size=n) + 1j * rng.normal(size=n)
    return v / np.linalg.norm(v)
