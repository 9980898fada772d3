"""Upper and lower bounds on compound processes.

Walks with fixed step lengths, relativistic velocity composition, chained
transfer matrices and parametric excitation all reduce to the same interval
``[max(2*peak - total, 0), total]`` over a list of nonnegative magnitudes.
"""

from compound_bounds.bounds_core import (
    BoundInterval,
    MagnitudeList,
    bound_interval,
    lower_closed,
    lower_iterative,
    pairwise_interval,
    plan_chain_targets,
    polygon_satisfied,
    upper_total,
)
from compound_bounds.errors import ConsistencyError, DomainError

__all__ = [
    "BoundInterval",
    "ConsistencyError",
    "DomainError",
    "MagnitudeList",
    "bound_interval",
    "lower_closed",
    "lower_iterative",
    "pairwise_interval",
    "plan_chain_targets",
    "polygon_satisfied",
    "upper_total",
]

__version__ = "0.1.0"
