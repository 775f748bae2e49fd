"""Shared random generators for the test suite."""

import numpy as np

from coex import hermitian as hm
from coex.effects import Effect


def rand_hermitian(rng, dim, scale=1.0):
    M = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return hm.hermitize(scale * M)


def rand_effect(rng, dim, min_eig=0.0):
    """Wishart rescaled to top eigenvalue uniform in (0, 1]."""
    while True:
        B = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
        H = hm.hermitize(B @ B.conj().T)
        w = hm.eigvalsh(H)
        if w[-1] <= 0:
            continue
        u = 1.0 - rng.uniform()
        E = Effect((u / w[-1]) * H)
        if w[0] * u / w[-1] >= min_eig:
            return E


def rand_unit(rng, dim):
    v = rng.normal(size=dim) + 1j * rng.normal(size=dim)
    return v / np.linalg.norm(v)


def rand_bloch(rng, max_norm=1.0):
    v = rng.normal(size=3)
    return v / np.linalg.norm(v) * rng.uniform(0, max_norm)
