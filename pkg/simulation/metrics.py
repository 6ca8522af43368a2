"""
Edge-burst quantifiers of a decay distribution.
"""

import logging
from dataclasses import asdict, dataclass
from typing import Any, Dict

import numpy as np

from core.exceptions import DegenerateDistributionError, ValidationError
from .dynamics import DecayDistribution

logger = logging.getLogger(__name__)

DEGENERATE_FLOOR = 1e-15
EDGE_BURST_THRESHOLD = 5.0


@dataclass(frozen=True)
class EdgeBurstMetrics:
    """P_1 relative to the minimum over cells 1..S and to the start cell."""

    p1_over_pmin: float
    p1_over_ps: float
    edge_fraction: float
    pmin_index: int

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


def edge_burst_metrics(dist: DecayDistribution) -> EdgeBurstMetrics:
    """
    P_1 / min{P_1..P_S}, P_1 / P_S and P_1.

    The minimum includes n = 1 and ties go to the smallest index. For S = 1
    both ratios are 1.

    Raises:
        DegenerateDistributionError: min{P_1..P_S} <= 1e-15
    """
    P = np.asarray(dist.P, dtype=float)
    if not 1 <= dist.S <= P.shape[0]:
        raise ValidationError(f"Start cell {dist.S} outside 1..{P.shape[0]}", field="S", value=dist.S)

    window = P[:dist.S]
    # argmin returns the first occurrence
    pmin_pos = int(np.argmin(window))
    p_min = float(window[pmin_pos])
    if p_min <= DEGENERATE_FLOOR:
        raise DegenerateDistributionError(p_min=p_min, index=pmin_pos + 1)

    p1 = float(P[0])
    return EdgeBurstMetrics(
        p1_over_pmin=p1 / p_min,
        p1_over_ps=p1 / float(P[dist.S - 1]),
        edge_fraction=p1,
        pmin_index=pmin_pos + 1
    )


def left_right_asymmetry(dist: DecayDistribution, depth: int) -> float:
    """Sum over k = 1..depth of |P_{S-k} - P_{S+k}|, skipping pairs that leave the lattice."""
    if depth < 0:
        raise ValidationError("Asymmetry depth must be nonnegative", field="K", value=depth)
    P = np.asarray(dist.P, dtype=float)
    n_cells, s = P.shape[0], dist.S
    total = 0.0
    for k in range(1, depth + 1):
        left, right = s - k, s + k
        if left < 1 or right > n_cells:
            continue
        total += abs(P[left - 1] - P[right - 1])
    return total


def edge_burst_present(metrics: EdgeBurstMetrics, threshold: float = EDGE_BURST_THRESHOLD) -> bool:
    return metrics.p1_over_pmin >= threshold
