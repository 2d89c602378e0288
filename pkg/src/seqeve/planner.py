"""Inverse problems for the eavesdropping chain.

Given a target key rate per Eve, find the minimal sharpness each Eve needs
(bisection against the full simulator), and the longest chain for which Bob
still beats every Eve's rate.  A closed-form recursion valid for the
maximally entangled state with sigma_z/sigma_x settings and unbiased inputs
serves as an independent oracle for both searches.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import BOB, mub_chain
from .steering import delta_for_rate, key_rate, report

BISECTION_TOL = 1e-6
BISECTION_MAX_ITER = 50

# Reasons a chain cannot be extended by one more Eve.
EVE_UNREACHABLE = "eve-rate-unreachable"
BOB_SUPREMACY = "bob-supremacy"


class InfeasibleError(RuntimeError):
    """A requested chain position admits no valid sharpness value."""

    def __init__(self, position: int, reason: str, detail: str = ""):
        self.position = position
        self.reason = reason
        msg = f"no valid sharpness for Eve {position} ({reason})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


@dataclass(frozen=True)
class PlanResult:
    """Longest admissible chain for one target rate."""

    target_rate: float
    lambdas: tuple[float, ...]
    bob_rate: float
    max_eves: int
    feasible: bool
    stop_reason: str


def shrink_factor(sharpness: float) -> float:
    """Per-Eve damping of both matched-basis correlations, (1 + sqrt(1-l^2))/2.

    The measured-basis correlation survives intact while the transverse one
    shrinks by the quality factor; averaging the two equiprobable inputs
    gives this factor for both bases.
    """
    return 0.5 * (1.0 + math.sqrt(1.0 - sharpness * sharpness))


def rate_from_correlation(corr: float) -> float:
    """Key rate implied by a matched-basis correlation value."""
    delta = max(0.5 * (1.0 + corr) - 0.75, 0.0)
    return key_rate(min(delta, 0.25))


def _eve_rate(prefix: tuple[float, ...], lam: float) -> float:
    spec = mub_chain(prefix + (lam,))
    return report(spec, len(prefix) + 1).key_rate


def bob_rate(lambdas: tuple[float, ...] | list[float]) -> float:
    """Bob's key rate when every listed Eve measures at the given sharpness."""
    return report(mub_chain(tuple(lambdas)), BOB).key_rate


def lambda_min_for_rate(prefix: tuple[float, ...], target_rate: float) -> float:
    """Smallest sharpness giving Eve ``len(prefix)+1`` at least the target rate.

    Bisection on the monotone sharpness-to-rate map, to absolute tolerance
    1e-6 in the sharpness.  Raises InfeasibleError when even a projective
    measurement cannot reach the target.
    """
    if target_rate <= 0.0:
        raise ValueError(f"target rate must be positive, got {target_rate}")
    prefix = tuple(prefix)
    position = len(prefix) + 1
    if _eve_rate(prefix, 1.0) < target_rate:
        raise InfeasibleError(
            position,
            EVE_UNREACHABLE,
            f"rate at sharpness 1 is below target {target_rate}",
        )
    lo, hi = 0.0, 1.0  # rate(lo) < target <= rate(hi) throughout
    for _ in range(BISECTION_MAX_ITER):
        if hi - lo < BISECTION_TOL:
            break
        mid = 0.5 * (lo + hi)
        if _eve_rate(prefix, mid) >= target_rate:
            hi = mid
        else:
            lo = mid
    return hi


def max_eves(target_rate: float) -> PlanResult:
    """Longest minimal-sharpness chain with Bob's rate above the target.

    Extends greedily: each new Eve takes her minimal sharpness given the
    accepted prefix, and the extension is kept only while Bob (with all
    listed Eves in place) still exceeds the target rate.
    """
    if not 0.0 < target_rate < 1.0:
        raise ValueError(f"target rate must lie in (0, 1), got {target_rate}")
    accepted: tuple[float, ...] = ()
    stop_reason = ""
    while True:
        try:
            lam = lambda_min_for_rate(accepted, target_rate)
        except InfeasibleError as exc:
            stop_reason = exc.reason
            break
        candidate = accepted + (lam,)
        if bob_rate(candidate) > target_rate:
            accepted = candidate
        else:
            stop_reason = BOB_SUPREMACY
            break
    final_bob = bob_rate(accepted)
    return PlanResult(
        target_rate=target_rate,
        lambdas=accepted,
        bob_rate=final_bob,
        max_eves=len(accepted),
        feasible=final_bob > target_rate,
        stop_reason=stop_reason,
    )


def closed_form_chain(target_rate: float, n: int) -> tuple[float, ...]:
    """Analytic minimal-sharpness sequence; oracle for the simulator planner.

    Valid only for the maximally entangled state, sigma_z/sigma_x settings
    and unbiased inputs.  Eve m needs matched-basis correlation
    2*delta(target) + 1/2, and each upstream Eve damps it by her shrink
    factor, so lambda_m = needed / prod(shrink_factor(lambda_i), i < m).
    Raises InfeasibleError at the first position where either the required
    sharpness exceeds 1 or Bob's closed-form rate stops exceeding the target.
    """
    if not 0.0 < target_rate < 1.0:
        raise ValueError(f"target rate must lie in (0, 1), got {target_rate}")
    if n < 1:
        raise ValueError(f"chain length must be at least 1, got {n}")
    needed = 2.0 * delta_for_rate(target_rate) + 0.5
    lambdas: list[float] = []
    damping = 1.0
    for m in range(1, n + 1):
        lam = needed / damping
        if lam > 1.0:
            raise InfeasibleError(
                m, EVE_UNREACHABLE, f"required sharpness {lam:.6f} exceeds 1"
            )
        damping *= shrink_factor(lam)
        bob = rate_from_correlation(damping)
        if bob <= target_rate:
            raise InfeasibleError(
                m,
                BOB_SUPREMACY,
                f"Bob rate {bob:.6f} would not exceed target {target_rate}",
            )
        lambdas.append(lam)
    return tuple(lambdas)
