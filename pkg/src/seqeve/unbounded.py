"""Branching strategy that lets arbitrarily many Eves keep a positive rate.

Each Eve applies a weak Kraus measurement in the sigma_x eigenbasis to the
second qubit and then undoes her side's Schmidt unitary, so the forwarded
state is always of the form (U_alice x I)(cos t |00> + sin t |11>).  The
whole binary tree of outcome histories is therefore precomputable from the
initial tilt angle and the list of weak angles alone.  For every leaf,
Alice can evaluate the steering inequality with either the tilt-matched
("canonical") second setting or the sine-adapted ("adapted") one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .chain import ConditionalTable, table_from_operators
from .linalg import ATOL, ID2, PAULI_X, PAULI_Z, dagger
from .measurement import WeakKrausSetting, weak_kraus
from .states import PureTwoQubitState, tilted_state
from .steering import SteeringReport, report_from_table

DEGENERATE_THETA = 1e-8

CANONICAL = "canonical"
ADAPTED = "adapted"
ALICE_STRATEGIES = (CANONICAL, ADAPTED)


class DegenerateStateError(ValueError):
    """The state is (numerically) a product state; no Schmidt angle exists."""


class ZeroProbabilityOutcome(ValueError):
    """A weak-measurement outcome of probability zero was requested."""


@dataclass(frozen=True)
class SchmidtForm:
    """Canonical form (u x v)(cos(theta)|00> + sin(theta)|11>) of a pure state.

    theta lies in (0, pi/4] (coefficients ordered, strictly entangled) and
    the phase convention makes u and v deterministic: the dominant entry of
    each column of u is real nonnegative, likewise the first column of v,
    with the residual phase stored separately.
    """

    theta: float
    u_alice: np.ndarray
    v_other: np.ndarray
    global_phase: float

    def state(self) -> PureTwoQubitState:
        """Reassemble the decomposed state, including the global phase."""
        coeffs = np.diag([math.cos(self.theta), math.sin(self.theta)]).astype(complex)
        mat = self.u_alice @ coeffs @ self.v_other.T
        return PureTwoQubitState(np.exp(1j * self.global_phase) * mat.reshape(4))


@dataclass(frozen=True)
class BranchNode:
    """One leaf of the outcome-history tree.

    Carries the history of weak-measurement outcomes, the Schmidt angle of
    the state Alice now shares, the accumulated Alice-side unitary, and the
    branch weight.  Degenerate leaves mark pruned subtrees.
    """

    outcomes: tuple[int, ...]
    theta: float
    u_alice: np.ndarray
    probability: float
    degenerate: bool = False


@dataclass(frozen=True)
class AdaptedMeasurement:
    """Alice's outcome-adapted second observable for one branch."""

    mu: float
    operator: np.ndarray


def _fix_column_phases(u: np.ndarray, vt: np.ndarray) -> None:
    """Make each column of u real-nonnegative at its dominant entry (in place)."""
    for k in range(2):
        col = u[:, k]
        j = int(np.argmax(np.abs(col)))
        mag = abs(col[j])
        if mag < ATOL:
            continue
        phase = col[j] / mag
        u[:, k] = col / phase
        vt[k, :] = vt[k, :] * phase


def schmidt_decompose(psi: PureTwoQubitState) -> SchmidtForm:
    """Schmidt normal form of a pure two-qubit state.

    Raises DegenerateStateError when the smaller Schmidt coefficient is
    below the product-state threshold (theta < 1e-8), so callers can flag
    and prune degenerate branches instead of dividing by zero.
    """
    mat = psi.amp.reshape(2, 2)
    u, sv, vh = np.linalg.svd(mat)
    theta = math.atan2(sv[1], sv[0])  # singular values are ordered, in [0, pi/4]
    if theta < DEGENERATE_THETA:
        raise DegenerateStateError(
            f"Schmidt angle {theta:.3e} is below the product-state threshold"
        )
    u = u.astype(complex).copy()
    vh = vh.astype(complex).copy()
    _fix_column_phases(u, vh)
    # Right Schmidt vectors as columns: psi = sum_k s_k u[:,k] (x) v[:,k].
    v = vh.T.copy()
    lead = v[int(np.argmax(np.abs(v[:, 0]))), 0]
    phase = lead / abs(lead)
    v /= phase
    return SchmidtForm(
        theta=theta,
        u_alice=u,
        v_other=v,
        global_phase=float(np.angle(phase)),
    )


def _apply_weak(
    psi: PureTwoQubitState, setting: WeakKrausSetting, outcome: int
) -> tuple[PureTwoQubitState, float]:
    """Apply one weak Kraus operator to the second qubit and renormalize."""
    kraus = weak_kraus(setting, outcome)
    mat = psi.amp.reshape(2, 2) @ kraus.T
    prob = float(np.vdot(mat, mat).real)
    if prob < 1e-14:
        raise ZeroProbabilityOutcome(
            f"weak measurement outcome {outcome} has probability {prob:.3e}"
        )
    return PureTwoQubitState(mat.reshape(4) / math.sqrt(prob)), prob


def weak_step(
    psi: PureTwoQubitState, setting: WeakKrausSetting, outcome: int
) -> tuple[SchmidtForm, float]:
    """One weak measurement step: apply, renormalize, Schmidt-decompose.

    The returned probability is the pre-normalization squared norm.
    """
    post, prob = _apply_weak(psi, setting, outcome)
    return schmidt_decompose(post), prob


def correct_and_forward(sf: SchmidtForm) -> PureTwoQubitState:
    """Undo the second qubit's Schmidt unitary before forwarding the state.

    The forwarded state is (u x I)(cos t |00> + sin t |11>); the next party
    can therefore reuse fixed measurement settings whatever the outcome was.
    """
    return branch_state(sf.theta, sf.u_alice)


def branch_state(theta: float, u_alice: np.ndarray) -> PureTwoQubitState:
    """(u_alice x I)(cos(theta)|00> + sin(theta)|11>)."""
    coeffs = np.diag([math.cos(theta), math.sin(theta)]).astype(complex)
    return PureTwoQubitState((u_alice @ coeffs).reshape(4))


def branch_tree(
    theta1: float, weak_angles: tuple[float, ...] | list[float]
) -> list[BranchNode]:
    """All 2^n outcome-history leaves for n weak measurements in order.

    Output depends only on (theta1, weak_angles); no randomness is drawn,
    so repeated invocations are bit-identical.  Leaves are ordered by their
    outcome bitstrings.  A branch that collapses to a product state is
    flagged degenerate and its subtree pruned; with tilt and weak angles in
    (0, pi/4] this cannot happen.
    """
    angles = tuple(weak_angles)
    if not angles:
        raise ValueError("at least one weak measurement is required")
    settings = [WeakKrausSetting(a) for a in angles]
    leaves: list[BranchNode] = []

    def descend(
        psi: PureTwoQubitState,
        depth: int,
        outcomes: tuple[int, ...],
        prob: float,
        theta: float,
        u_alice: np.ndarray,
    ) -> None:
        if depth == len(settings):
            leaves.append(
                BranchNode(
                    outcomes=outcomes,
                    theta=theta,
                    u_alice=u_alice,
                    probability=prob,
                )
            )
            return
        for c in (0, 1):
            post, p = _apply_weak(psi, settings[depth], c)
            try:
                sf = schmidt_decompose(post)
            except DegenerateStateError:
                leaves.append(
                    BranchNode(
                        outcomes=outcomes + (c,),
                        theta=0.0,
                        u_alice=ID2.copy(),
                        probability=prob * p,
                        degenerate=True,
                    )
                )
                continue
            descend(
                correct_and_forward(sf),
                depth + 1,
                outcomes + (c,),
                prob * p,
                sf.theta,
                sf.u_alice,
            )

    descend(tilted_state(theta1), 0, (), 1.0, theta1, ID2.copy())
    return leaves


def alice_facing_count(leaves: list[BranchNode]) -> int:
    """Distinct outcome histories with the last outcome marginalized."""
    return len({leaf.outcomes[:-1] for leaf in leaves})


def canonical_settings(
    theta: float,
) -> tuple[tuple[np.ndarray, np.ndarray], tuple[np.ndarray, np.ndarray]]:
    """Tilt-matched observables: Alice (sz, cos2t*sz + sin2t*sx), Bob (sz, sx)."""
    if not 0.0 < theta <= math.pi / 4.0:
        raise ValueError(f"tilt angle must lie in (0, pi/4], got {theta}")
    a2 = math.cos(2.0 * theta) * PAULI_Z + math.sin(2.0 * theta) * PAULI_X
    return (PAULI_Z.copy(), a2), (PAULI_Z.copy(), PAULI_X.copy())


def adapted_alice_measurement(node: BranchNode) -> AdaptedMeasurement:
    """Alice's precomputable second observable for a branch.

    mu satisfies tan(mu) = sin(2*theta) and the observable is the branch
    unitary conjugation of cos(mu)*sz + sin(mu)*sx.
    """
    if node.degenerate:
        raise DegenerateStateError("cannot adapt measurements to a product branch")
    mu = math.atan(math.sin(2.0 * node.theta))
    base = math.cos(mu) * PAULI_Z + math.sin(mu) * PAULI_X
    return AdaptedMeasurement(
        mu=mu, operator=node.u_alice @ base @ dagger(node.u_alice)
    )


def _observable_projectors(op: np.ndarray) -> list[np.ndarray]:
    """Outcome projectors (I +- op)/2 of a Hermitian involution."""
    return [0.5 * (ID2 + op), 0.5 * (ID2 - op)]


def branch_conditional_table(node: BranchNode, alice_choice: str) -> ConditionalTable:
    """Alice/Bob conditional table for one branch under a settings choice.

    Both of Alice's observables are conjugated by the accumulated branch
    unitary; Bob's are the fixed sigma_z and sigma_x.
    """
    if alice_choice not in ALICE_STRATEGIES:
        raise ValueError(
            f"alice_choice must be one of {ALICE_STRATEGIES}, got {alice_choice!r}"
        )
    if node.degenerate:
        raise DegenerateStateError("cannot evaluate a degenerate branch")
    u = node.u_alice
    a1 = u @ PAULI_Z @ dagger(u)
    if alice_choice == CANONICAL:
        (_, a2_base), _ = canonical_settings(node.theta)
        a2 = u @ a2_base @ dagger(u)
    else:
        a2 = adapted_alice_measurement(node).operator
    rho = branch_state(node.theta, u).density_matrix()
    alice_grid = [_observable_projectors(a1), _observable_projectors(a2)]
    bob_grid = [_observable_projectors(PAULI_Z), _observable_projectors(PAULI_X)]
    return table_from_operators(rho, alice_grid, bob_grid)


def evaluate_branch(node: BranchNode, alice_choice: str) -> SteeringReport:
    """Steering report of one branch for a given Alice strategy."""
    return report_from_table(branch_conditional_table(node, alice_choice))
