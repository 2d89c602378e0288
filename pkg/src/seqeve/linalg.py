"""Fixed-dimension complex linear algebra for two-qubit simulations.

Everything here works on dense 2x2 and 4x4 complex numpy arrays; the
problem is fixed-dimension, so no general-N machinery is provided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Entrywise tolerance for invariants; composed results get one decade of
# slack per composition layer.
ATOL = 1e-12
COMPOSED_ATOL = 1e-10
# Negative eigenvalues above this magnitude signal a corrupted state rather
# than roundoff.
NEG_EIG_LIMIT = 1e-9

ID2 = np.eye(2, dtype=complex)
ID4 = np.eye(4, dtype=complex)
PAULI_X = np.array([[0.0, 1.0], [1.0, 0.0]], dtype=complex)
PAULI_Y = np.array([[0.0, -1.0j], [1.0j, 0.0]], dtype=complex)
PAULI_Z = np.array([[1.0, 0.0], [0.0, -1.0]], dtype=complex)


def dagger(m: np.ndarray) -> np.ndarray:
    """Conjugate transpose."""
    return m.conj().T


def is_hermitian(m: np.ndarray, atol: float = ATOL) -> bool:
    return bool(np.allclose(m, dagger(m), rtol=0.0, atol=atol))


def mats_equal(a: np.ndarray, b: np.ndarray, atol: float = ATOL) -> bool:
    """Entrywise equality at absolute tolerance."""
    return bool(np.allclose(a, b, rtol=0.0, atol=atol))


def kron(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Kronecker product, used to lift single-qubit operators to two qubits."""
    return np.kron(a, b)


def partial_trace(rho: np.ndarray, keep: str) -> np.ndarray:
    """Trace a 4x4 two-qubit operator down to the kept subsystem.

    ``keep`` is ``"A"`` (first qubit) or ``"B"`` (second qubit).  Works for
    any matrix, not only density operators, so it can absorb projected
    states as well.
    """
    r = np.asarray(rho, dtype=complex).reshape(2, 2, 2, 2)
    if keep == "A":
        return np.einsum("ajbj->ab", r)
    if keep == "B":
        return np.einsum("iaib->ab", r)
    raise ValueError(f"keep must be 'A' or 'B', got {keep!r}")


def psd_sqrt(m: np.ndarray) -> np.ndarray:
    """Square root of a Hermitian PSD 2x2 matrix via closed-form spectra.

    Eigenvalues follow from trace and determinant, so no iteration is
    involved.  Eigenvalues in [-1e-9, 0) are clamped to zero; anything more
    negative is rejected as a corrupted input.
    """
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise ValueError(f"expected a 2x2 matrix, got shape {m.shape}")
    if not is_hermitian(m, atol=NEG_EIG_LIMIT):
        raise ValueError("psd_sqrt requires a Hermitian matrix")
    half_tr = 0.5 * (m[0, 0].real + m[1, 1].real)
    det = (m[0, 0] * m[1, 1] - m[0, 1] * m[1, 0]).real
    gap = math.sqrt(max(half_tr * half_tr - det, 0.0))
    lo = half_tr - gap
    hi = half_tr + gap
    if lo < -NEG_EIG_LIMIT:
        raise ValueError(f"matrix has negative eigenvalue {lo:.3e}")
    lo = max(lo, 0.0)
    hi = max(hi, 0.0)
    if gap < ATOL:
        # Scalar multiple of the identity.
        return math.sqrt(hi) * ID2
    proj_hi = (m - lo * ID2) / (hi - lo)
    proj_lo = (m - hi * ID2) / (lo - hi)
    return math.sqrt(hi) * proj_hi + math.sqrt(lo) * proj_lo


@dataclass(frozen=True)
class BlochDirection:
    """Measurement direction on the Bloch sphere, angles in radians."""

    theta: float
    phi: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.theta) and math.isfinite(self.phi)):
            raise ValueError("direction angles must be finite")
        if not 0.0 <= self.theta <= math.pi:
            raise ValueError(f"theta must lie in [0, pi], got {self.theta}")
        if not 0.0 <= self.phi <= 2.0 * math.pi:
            raise ValueError(f"phi must lie in [0, 2*pi], got {self.phi}")

    def unit_vector(self) -> np.ndarray:
        st = math.sin(self.theta)
        return np.array(
            [st * math.cos(self.phi), st * math.sin(self.phi), math.cos(self.theta)]
        )


Z_DIR = BlochDirection(0.0, 0.0)
X_DIR = BlochDirection(math.pi / 2.0, 0.0)


def direction_operator(n: BlochDirection) -> np.ndarray:
    """Spin component observable n.sigma; Hermitian, traceless, eigenvalues +-1."""
    nx, ny, nz = n.unit_vector()
    return nx * PAULI_X + ny * PAULI_Y + nz * PAULI_Z
