"""Shared random-object generators for the test suite (always seeded by callers)."""

import numpy as np

from seqeve import BlochDirection


def random_direction(rng: np.random.Generator) -> BlochDirection:
    cos_theta = rng.uniform(-1.0, 1.0)
    return BlochDirection(
        float(np.arccos(cos_theta)), float(rng.uniform(0.0, 2.0 * np.pi))
    )


def random_pure_amp(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_qubit_density(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    m = a @ a.conj().T
    return m / np.trace(m).real


def random_pure_qubit_density(rng: np.random.Generator) -> np.ndarray:
    v = rng.normal(size=2) + 1j * rng.normal(size=2)
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def random_psd2(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return a @ a.conj().T


def random_hermitian2(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(2, 2)) + 1j * rng.normal(size=(2, 2))
    return 0.5 * (a + a.conj().T)


def random_hermitian4(rng: np.random.Generator) -> np.ndarray:
    a = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
    return 0.5 * (a + a.conj().T)
