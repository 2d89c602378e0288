"""Two-qubit state representations with validated physical invariants."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .linalg import ATOL, is_hermitian

RANK_ONE_ATOL = 1e-10


@dataclass(frozen=True)
class TwoQubitState:
    """4x4 density matrix; unit trace, Hermitian, positive semidefinite."""

    rho: np.ndarray

    def __post_init__(self) -> None:
        rho = np.asarray(self.rho, dtype=complex)
        if rho.shape != (4, 4):
            raise ValueError(f"density matrix must be 4x4, got shape {rho.shape}")
        if abs(np.trace(rho).real - 1.0) > ATOL or abs(np.trace(rho).imag) > ATOL:
            raise ValueError(f"trace must be 1, got {np.trace(rho)}")
        if not is_hermitian(rho, atol=ATOL):
            raise ValueError("density matrix must be Hermitian")
        eigs = np.linalg.eigvalsh(rho)
        if eigs.min() < -ATOL:
            raise ValueError(f"density matrix has negative eigenvalue {eigs.min():.3e}")
        object.__setattr__(self, "rho", rho)


@dataclass(frozen=True)
class PureTwoQubitState:
    """Length-4 amplitude vector in the |00>,|01>,|10>,|11> basis."""

    amp: np.ndarray

    def __post_init__(self) -> None:
        amp = np.asarray(self.amp, dtype=complex).reshape(-1)
        if amp.shape != (4,):
            raise ValueError(f"amplitude vector must have length 4, got {amp.shape}")
        norm_sq = float(np.vdot(amp, amp).real)
        if abs(norm_sq - 1.0) > ATOL:
            raise ValueError(f"amplitudes must be normalized, |psi|^2 = {norm_sq}")
        object.__setattr__(self, "amp", amp)

    def to_density(self) -> TwoQubitState:
        return TwoQubitState(np.outer(self.amp, self.amp.conj()))

    def density_matrix(self) -> np.ndarray:
        return np.outer(self.amp, self.amp.conj())


def bell_state() -> PureTwoQubitState:
    """Maximally entangled state (|00> + |11>)/sqrt(2)."""
    s = 1.0 / math.sqrt(2.0)
    return PureTwoQubitState(np.array([s, 0.0, 0.0, s], dtype=complex))


def tilted_state(theta: float) -> PureTwoQubitState:
    """Partially entangled state cos(theta)|00> + sin(theta)|11>.

    The tilt angle is restricted to (0, pi/4]; theta = pi/4 recovers the
    maximally entangled state.  Degenerate (product) inputs are rejected,
    tests that need them can build PureTwoQubitState directly.
    """
    if not 0.0 < theta <= math.pi / 4.0:
        raise ValueError(f"tilt angle must lie in (0, pi/4], got {theta}")
    return PureTwoQubitState(
        np.array([math.cos(theta), 0.0, 0.0, math.sin(theta)], dtype=complex)
    )
