"""Fine-grained steering inequality and the secret-key-rate lower bound.

The inequality bounds the averaged conditional agreement between Alice and
the probed party at 3/4 for unsteerable correlations.  Each of the two
terms pairs equal input indices (input 0 with input 0, input 1 with
input 1).  Since relabeling dichotomic outcomes is free classical
post-processing, each term is maximized over the two outcome relabelings;
within a relabeling the agreement is evaluated at the least favorable
Alice outcome, so perfect correlations score 1 and product states can
never exceed the bound.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .chain import ChainSpec, ConditionalTable, conditional_table

THRESHOLD = 0.75
MAX_DELTA = 0.25
DELTA_SLACK = 1e-9


@dataclass(frozen=True)
class SteeringReport:
    """Inequality value, violation degree, and key-rate bound for one party."""

    lhs: float
    delta: float
    key_rate: float
    violated: bool


def fgi_lhs(table: ConditionalTable) -> float:
    """Left-hand side of the steering inequality for a conditional table.

    Values above 3/4 certify steering; 1 is maximal.
    """
    total = 0.0
    for k in (0, 1):
        cells = table.probs[k, k]  # indexed [alice outcome a, party outcome c]
        keep = min(cells[0, 0], cells[1, 1])
        flip = min(cells[0, 1], cells[1, 0])
        total += max(keep, flip)
    return 0.5 * total


def key_rate(delta: float) -> float:
    """Secret-key-rate lower bound log2((3/4 + delta)/(3/4 - delta)) in bits.

    Zero at delta = 0, one bit at the maximal violation delta = 1/4.
    """
    if not -DELTA_SLACK <= delta <= MAX_DELTA + DELTA_SLACK:
        raise ValueError(f"violation degree must lie in [0, 1/4], got {delta}")
    delta = min(max(delta, 0.0), MAX_DELTA)
    if delta == 0.0:
        return 0.0
    return math.log2((THRESHOLD + delta) / (THRESHOLD - delta))


def delta_for_rate(rate: float) -> float:
    """Inverse of key_rate: the violation degree needed for a given rate."""
    if rate < 0.0:
        raise ValueError(f"rate must be nonnegative, got {rate}")
    scale = 2.0**rate
    return THRESHOLD * (scale - 1.0) / (scale + 1.0)


def report_from_table(table: ConditionalTable) -> SteeringReport:
    lhs = fgi_lhs(table)
    delta = max(lhs - THRESHOLD, 0.0)
    return SteeringReport(
        lhs=lhs, delta=delta, key_rate=key_rate(delta), violated=delta > 0.0
    )


def report(spec: ChainSpec, party: int | str) -> SteeringReport:
    """Steering report for one Eve (1-based index) or BOB in a chain."""
    return report_from_table(conditional_table(spec, party))
